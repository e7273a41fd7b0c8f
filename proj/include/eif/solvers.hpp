#pragma once

#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace eif {

struct RootBracket {
    double lo;
    double hi;
    double tol = 1e-13;  // relative
};

// Brent's method. The bracket is never widened; throws a bracket error when
// g(lo) and g(hi) share a sign.
double find_root(const std::function<double(double)>& g, const RootBracket& bracket, int max_iter = 500);

struct NewtonOptions {
    double tol = 1e-12;  // gradient norm
    int max_iter = 100;
    bool operator==(const NewtonOptions&) const = default;
};

struct NewtonResult {
    Eigen::VectorXd argmax;
    int iterations = 0;
    double gradient_norm = 0.0;
};

// Damped Newton ascent with step halving on the objective.
NewtonResult newton_maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                             const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& hessian,
                             const Eigen::VectorXd& start, const NewtonOptions& options = {});

// Right derivative at 0 of an increment function (f(0) == 0) from forward
// difference quotients f(h)/h at h = eps0 / 2^k, k < levels, combined by
// Richardson extrapolation.
double richardson_derivative(const std::function<double(double)>& increment, double eps0, int levels = 4);

}  // namespace eif
