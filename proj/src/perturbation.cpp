#include "eif/perturbation.hpp"

#include <cmath>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

PerturbationPath PerturbationPath::at_point(const DistPtr& base, const Point& x, double epsilon, double lambda,
                                            KernelWidth width) {
    PerturbationPath path;
    path.base = base;
    path.bump = make_bump(x, lambda, base, width);
    path.epsilon = epsilon;
    path.lambda = lambda;
    path.realized = mix(base, path.bump, epsilon);
    return path;
}

PerturbationPath PerturbationPath::over_data(const DistPtr& base, const std::vector<Point>& data, double epsilon,
                                             double lambda, KernelWidth width) {
    PerturbationPath path;
    path.base = base;
    path.bump = mixture_bump(data, lambda, base, width);
    path.epsilon = epsilon;
    path.lambda = lambda;
    path.realized = mix(base, path.bump, epsilon);
    return path;
}

double r_lambda(const Distribution& base, const Distribution& bump, const QuadratureSettings& settings) {
    if (base.dimension() != bump.dimension()) fail(ErrorKind::input, "r_lambda: dimension mismatch");
    const double integral = integrate(
        [&](std::span<const double> u) {
            const double h = bump.density(u);
            if (h == 0.0) return 0.0;
            const double p = base.density(u);
            if (!(p >= 1e-300))
                fail(ErrorKind::domination, "base density " + format_number(p) + " below floor at " + format_point(u) +
                                                " inside the bump support");
            return h * (h / p);
        },
        bump.domain(settings));
    return std::sqrt(integral);
}

double epsilon_guideline(double lambda, int d1) {
    if (d1 <= 0) return 1e-2;
    return std::pow(lambda, 2 * d1) / 100.0;
}

DistPtr mixture_bump(const std::vector<Point>& data, double lambda, const DistPtr& base, KernelWidth width) {
    if (data.empty()) fail(ErrorKind::input, "mixture_bump needs at least one data point");
    std::vector<DistPtr> bumps;
    bumps.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        try {
            bumps.push_back(make_bump(data[i], lambda, base, width));
        } catch (const Error& e) {
            fail(e.kind(), "data point " + std::to_string(i) + ": " + e.what());
        }
    }
    if (bumps.size() == 1) return bumps.front();
    std::vector<double> w(bumps.size(), 1.0 / static_cast<double>(bumps.size()));
    return std::make_shared<Mixture>(std::move(bumps), std::move(w));
}

}  // namespace eif
