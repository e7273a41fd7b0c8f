#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "eif/error.hpp"

using namespace eif::cli;

int main(int argc, char** argv) {
    CLI::App app{"Numerical efficient influence functions by projected point-mass perturbation"};
    app.require_subcommand(1);

    std::string config_path, out_path, data_path;
    std::uint64_t seed = 0;
    bool print = false;

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Invocation&, std::ostream&, std::ostream&);
    };
    const Command commands[] = {
        {"point", "secant EIF estimate at one (epsilon, lambda)", run_point},
        {"grid", "epsilon-lambda grid with plateau detection", run_grid},
        {"onestep", "one-step estimator over a data file", run_onestep},
        {"validate", "engine against the closed-form EIF", run_validate},
        {"diagnose", "remainder and condition diagnostics", run_diagnose},
        {"demo-data", "seeded sample from the configured distribution", make_demo_data},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    CLI::Option* seed_opt = nullptr;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", config_path, "config file")->required();
        sub->add_option("--out", out_path, "output CSV path (default stdout)");
        if (std::string(c.name) == "onestep") sub->add_option("--data", data_path, "observations CSV");
        if (std::string(c.name) == "demo-data") seed_opt = sub->add_option("--seed", seed, "generator seed");
        sub->add_flag("--print-config", print, "print the parsed config and exit");
        subs.emplace_back(sub, &c);
    }
    CLI11_PARSE(app, argc, argv);

    Invocation inv;
    try {
        inv.config = load_config(config_path);
    } catch (const eif::Error& e) {
        std::cerr << "error (" << eif::to_string(e.kind()) << "): " << e.what() << "\n";
        return e.exit_code();
    }
    if (seed_opt && seed_opt->count() > 0) inv.config.seed = seed;
    if (!out_path.empty()) inv.out = out_path;
    if (!data_path.empty()) inv.data = data_path;
    if (print) {
        std::cout << print_config(inv.config);
        return 0;
    }
    for (const auto& [sub, cmd] : subs)
        if (sub->parsed()) return cmd->run(inv, std::cout, std::cerr);
    return 1;
}
