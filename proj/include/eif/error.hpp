#pragma once

#include <stdexcept>
#include <string>

namespace eif {

enum class ErrorKind {
    input,
    config,
    numerical,
    domination,
    bracket,
    infeasible,
    positivity,
    non_convergence,
    unsupported,
    model_membership,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // 1 for bad input or configuration, 2 for anything numerical.
    int exit_code() const noexcept {
        return (kind_ == ErrorKind::input || kind_ == ErrorKind::config ||
                kind_ == ErrorKind::unsupported)
                   ? 1
                   : 2;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace eif
