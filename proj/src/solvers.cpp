#include "eif/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

double find_root(const std::function<double(double)>& g, const RootBracket& bracket, int max_iter) {
    if (!(bracket.lo < bracket.hi)) fail(ErrorKind::input, "root bracket needs lo < hi");
    double a = bracket.lo, b = bracket.hi;
    double fa = g(a), fb = g(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        fail(ErrorKind::numerical, "root function is not finite at the bracket ends");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        fail(ErrorKind::bracket, "no sign change on [" + format_number(a) + ", " + format_number(b) + "]");

    double c = a, fc = fa;
    double d = b - a, e = d;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * bracket.tol * std::abs(b) +
                           std::numeric_limits<double>::min();
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = g(b);
        if (!std::isfinite(fb)) fail(ErrorKind::numerical, "root function is not finite at " + format_number(b));
    }
    return b;
}

NewtonResult newton_maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
                             const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& hessian,
                             const Eigen::VectorXd& start, const NewtonOptions& options) {
    NewtonResult res;
    Eigen::VectorXd beta = start;
    Eigen::VectorXd grad = gradient(beta);
    double value = objective(beta);
    for (int iter = 0;; ++iter) {
        res.gradient_norm = grad.norm();
        if (!std::isfinite(res.gradient_norm))
            fail(ErrorKind::numerical, "non-finite gradient in Newton iteration");
        if (res.gradient_norm <= options.tol) {
            res.argmax = beta;
            res.iterations = iter;
            return res;
        }
        if (iter >= options.max_iter) {
            std::ostringstream os;
            os << "Newton did not converge in " << options.max_iter << " iterations; last iterate (";
            for (Eigen::Index i = 0; i < beta.size(); ++i) os << (i ? "," : "") << format_number(beta[i]);
            os << "), gradient norm " << format_number(res.gradient_norm);
            fail(ErrorKind::non_convergence, os.str());
        }
        const Eigen::MatrixXd neg_h = -hessian(beta);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_h);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive() && (ldlt.vectorD().array() > 0.0).all())
            step = ldlt.solve(grad);
        else
            step = grad;  // gradient ascent fallback away from concavity

        // near the optimum the objective is flat to rounding
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value));
        double t = 1.0;
        Eigen::VectorXd next = beta + step;
        double next_value = objective(next);
        for (int halving = 0; halving < 60 && !(next_value >= value - slack); ++halving) {
            t *= 0.5;
            next = beta + t * step;
            next_value = objective(next);
        }
        if (!std::isfinite(next_value)) fail(ErrorKind::numerical, "non-finite objective in Newton line search");
        beta = next;
        value = next_value;
        grad = gradient(beta);
    }
}

double richardson_derivative(const std::function<double(double)>& increment, double eps0, int levels) {
    if (!(eps0 > 0.0)) fail(ErrorKind::input, "Richardson base step must be positive");
    if (levels < 2) fail(ErrorKind::input, "Richardson extrapolation needs at least 2 levels");
    std::vector<std::vector<double>> table(levels);
    double h = eps0;
    for (int k = 0; k < levels; ++k, h *= 0.5) {
        const double fh = increment(h);
        if (!std::isfinite(fh)) fail(ErrorKind::numerical, "non-finite increment at step " + format_number(h));
        table[k].push_back(fh / h);
        double factor = 1.0;
        for (int j = 1; j <= k; ++j) {
            factor *= 2.0;
            table[k].push_back((factor * table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0));
        }
    }
    return table.back().back();
}

}  // namespace eif
