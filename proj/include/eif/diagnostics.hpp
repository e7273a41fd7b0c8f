#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eif/engine.hpp"
#include "eif/oracles.hpp"

namespace eif {

// R(P1, P) = Psi(P1) - Psi(P) + int phi_{P1} dP, evaluated as
//   [Psi(P1) - Psi(P)] - int phi_{P1} d(P1 - P) + int phi_{P1} dP1
// so that the two O(eps) pieces are formed from differences directly.
double remainder(const Functional& psi, const OracleEif& phi_p1, const Distribution& p1, const Distribution& p,
                 const QuadratureSettings& quad = {});

// |int phi* dP_{eps,lambda}|.
double check_a1(const OracleEif& phi_star, const Distribution& p_eps_lambda, const QuadratureSettings& quad = {});

struct RemainderPoint {
    double epsilon = 0.0;
    double lambda = 0.0;
    double R = 0.0;
};

struct BoundRow {
    double epsilon = 0.0;
    double lambda = 0.0;
    double R = 0.0;
    double r_lambda = 0.0;
    double ratio = 0.0;  // R / [eps (1 + r)]^2
    bool guideline_ok = true;
};

struct BoundReport {
    std::vector<BoundRow> rows;
    double max_ratio = 0.0;  // over |ratio|
    double min_ratio = 0.0;  // over nonzero |ratio|
    double spread = 0.0;     // max / min, 0 when every ratio is zero
    std::size_t outside_guideline = 0;
};

// r_lambda_values[i] belongs to remainders[i]; d1 is the smoothed dimension
// used for the eps <= lambda^(2 d1) / 100 flag.
BoundReport theorem4_bound_probe(const std::vector<RemainderPoint>& remainders,
                                 const std::vector<double>& r_lambda_values, int d1 = 1);

// Least-squares slope of log|y| on log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConditionReport {
    double a1_residual = 0.0;  // largest over the sweep
    double r_lambda = 0.0;
    std::vector<RemainderPoint> remainder_values;
    double loglog_slope_in_eps = 0.0;
    double bound_ratio_spread = 0.0;  // max / min of |R| / [eps (1 + r)]^2
    bool guideline_ok = true;  // every epsilon within the guideline
};

// Oracle EIF at an arbitrary member of the model.
using OracleFactory = std::function<OracleEif(const DistPtr&)>;

struct SweepRow {
    double epsilon = 0.0;
    double lambda = 0.0;
    double R = 0.0;
    double R_over_eps = 0.0;
    double R_over_bound = 0.0;
    double a1_residual = 0.0;
    double r_lambda = 0.0;
};

// Remainder, bound ratio and A1 residual over an epsilon x lambda sweep.
std::vector<SweepRow> remainder_sweep(const DistPtr& p, const ModelProjector& model, const Functional& psi,
                                      const Point& x, const std::vector<double>& epsilons,
                                      const std::vector<double>& lambdas, const OracleFactory& oracle,
                                      KernelWidth width = KernelWidth::half, const QuadratureSettings& quad = {});

// Per-lambda summary of a sweep.
ConditionReport condition_report(const std::vector<SweepRow>& rows, double lambda, int d1 = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string condition_csv(const std::vector<ConditionReport>& reports, const std::vector<double>& lambdas);

}  // namespace eif
