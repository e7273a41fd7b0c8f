#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eif/functionals.hpp"
#include "eif/perturbation.hpp"
#include "eif/projection.hpp"

namespace eif {

struct SecantEstimate {
    double epsilon = 0.0;
    double lambda = 0.0;
    double value = 0.0;  // difference / epsilon
    double difference = 0.0;
    double psi_base = 0.0;
    double psi_star = 0.0;
    ProjectionMeta meta;
    bool feasible = true;
    bool stable_path = true;
    std::string status = "ok";
};

struct SecantOptions {
    KernelWidth width = KernelWidth::half;
    bool stable = true;  // false forces evaluate(P*) - evaluate(P)
    std::optional<double> psi_base;  // reuse a known Psi(P)
};

// [Psi(P*_{eps,lambda}) - Psi(P)] / eps with P*_{eps,lambda} the projection of
// (1 - eps) P + eps H_{x,lambda}.
SecantEstimate secant_eif(const DistPtr& p, const ModelProjector& model, const Functional& psi, const Point& x,
                          double epsilon, double lambda, const SecantOptions& options = {});

enum class DerivativeMode { richardson, closed_form };

struct DerivativeOptions {
    KernelWidth width = KernelWidth::half;
    double eps0 = 0.0;  // 0 selects epsilon_guideline(lambda, d1)
    int levels = 4;
};

double derivative_eif(const DistPtr& p, const ModelProjector& model, const Functional& psi, const Point& x,
                      double lambda, DerivativeMode mode, const DerivativeOptions& options = {});

// d/deps Psi(P*_{eps,lambda}) at eps = 0 in closed form.
using DerivativeHook =
    std::function<double(const DistPtr& p, const Functional& psi, const Point& x, double lambda, KernelWidth width)>;

void register_derivative_hook(ModelKind model, FunctionalKind functional, DerivativeHook hook);
std::optional<DerivativeHook> find_derivative_hook(ModelKind model, FunctionalKind functional);

struct PlateauCell {
    std::size_t lambda_index;
    std::size_t epsilon_index;
    bool operator==(const PlateauCell&) const = default;
};

// Cells are stored lambda-major: cell(i, j) has lambdas[i], epsilons[j].
struct EifGrid {
    std::vector<double> epsilons;  // descending
    std::vector<double> lambdas;   // descending
    std::vector<SecantEstimate> cells;
    std::vector<PlateauCell> plateau;
    std::optional<double> consensus;
    int digits = 3;

    const SecantEstimate& cell(std::size_t li, std::size_t ei) const { return cells.at(li * epsilons.size() + ei); }
    SecantEstimate& cell(std::size_t li, std::size_t ei) { return cells.at(li * epsilons.size() + ei); }
};

struct GridOptions {
    int digits = 3;
    int min_cells = 4;
    KernelWidth width = KernelWidth::half;
    unsigned threads = 0;  // 0: hardware concurrency
};

std::vector<double> default_grid_values();  // 1e-1, ..., 1e-8

EifGrid build_grid(const DistPtr& p, const ModelProjector& model, const Functional& psi, const Point& x,
                   const std::vector<double>& epsilons, const std::vector<double>& lambdas,
                   const GridOptions& options = {});

struct PlateauResult {
    std::vector<PlateauCell> region;
    std::optional<double> consensus;
};

// Largest 4-connected region of equal rounded values that reaches the
// smallest-epsilon row and has at least min_cells cells. Ties prefer smaller
// epsilon, then larger lambda.
PlateauResult detect_plateau(const EifGrid& grid, int digits, int min_cells);

// Value rounded to `digits` decimals.
double round_to(double v, int digits);

struct OneStepResult {
    double plug_in = 0.0;
    double correction = 0.0;
    double estimate = 0.0;
    std::size_t n = 0;
    double epsilon = 0.0;
    double lambda = 0.0;
};

OneStepResult one_step(const DistPtr& p_hat, const ModelProjector& model, const Functional& psi,
                       const std::vector<Point>& data, double epsilon, double lambda,
                       KernelWidth width = KernelWidth::half);

// CSV renderings (17 significant digits, RFC 4180 quoting).
std::string grid_csv(const EifGrid& grid);
std::string plateau_csv(const EifGrid& grid);
std::string secant_csv(const SecantEstimate& s);
std::string one_step_csv(const OneStepResult& r);

}  // namespace eif
