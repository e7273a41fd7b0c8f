#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eif/engine.hpp"
#include "eif/families.hpp"
#include "eif/diagnostics.hpp"

namespace eif::cli {

// One conditional factor of a sequential law.
struct FactorSpec {
    std::string kind;  // beta, uniform, normal, bernoulli, bernoulli_logit, discrete_uniform, discrete
    double alpha = 1.0, beta = 1.0;
    double lower = 0.0, upper = 1.0;
    std::string mean = "0";
    double variance = 1.0;
    double p = 0.5;
    std::string logit = "0";
    std::vector<double> support, masses;

    bool operator==(const FactorSpec&) const = default;
};

// Flat key = value configuration. Lists use ';', validation points use '|'
// between points. Lines starting with '#' are comments.
struct RunConfig {
    // distribution.family: a single factor kind, sequential, or example2
    std::string family;
    FactorSpec single;  // parameters of a single-factor family
    std::vector<FactorSpec> factors;  // sequential

    std::string model;  // model.kind
    std::optional<double> mu;
    std::vector<std::string> basis;

    std::string functional;  // functional.kind
    std::size_t component = 0;
    double constant = 0.0;

    Point x;
    std::optional<double> epsilon, lambda;
    KernelWidth kernel = KernelWidth::half;

    std::vector<double> epsilons = default_grid_values();
    std::vector<double> lambdas = default_grid_values();
    int digits = 3;
    int min_cells = 4;
    unsigned threads = 0;

    // empty: validate reports the secant; richardson or closed_form: the derivative
    std::string derivative_mode;
    int levels = 4;
    double eps0 = 0.0;

    QuadratureSettings quad;
    double root_tol = 1e-13;
    NewtonOptions newton;

    std::vector<double> diagnose_epsilons{1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<double> diagnose_lambdas{1e-1, 1e-2};

    std::vector<Point> validate_points;

    std::size_t demo_n = 50;
    std::optional<std::uint64_t> seed;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string print_config(const RunConfig& cfg);

DistPtr build_distribution(const RunConfig& cfg);
ProjectorPtr build_model(const RunConfig& cfg, const DistPtr& p);
FunctionalPtr build_functional(const RunConfig& cfg);

// Oracle EIF at an arbitrary member of the configured model, when one exists.
std::optional<OracleFactory> oracle_for(const RunConfig& cfg);

}  // namespace eif::cli
