#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace eif::cli {

struct Invocation {
    RunConfig config;
    std::optional<std::string> out;   // --out; stdout when absent
    std::optional<std::string> data;  // --data
};

// Each returns the process exit code: 0 success, 1 configuration or input
// error, 2 numerical failure. Messages go to `err`.
int run_point(const Invocation& inv, std::ostream& out, std::ostream& err);
int run_grid(const Invocation& inv, std::ostream& out, std::ostream& err);
int run_onestep(const Invocation& inv, std::ostream& out, std::ostream& err);
int run_validate(const Invocation& inv, std::ostream& out, std::ostream& err);
int run_diagnose(const Invocation& inv, std::ostream& out, std::ostream& err);
int make_demo_data(const Invocation& inv, std::ostream& out, std::ostream& err);

// Path next to `path` with `suffix` replacing a trailing ".csv".
std::string sibling_path(const std::string& path, const std::string& suffix);

}  // namespace eif::cli
