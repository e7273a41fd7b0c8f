#pragma once

#include <vector>

#include "eif/kernel.hpp"
#include "eif/mixture.hpp"
#include "eif/quadrature.hpp"

namespace eif {

// P_{eps,lambda} = (1 - eps) P + eps H, with H a bump or a uniform mixture of bumps.
struct PerturbationPath {
    DistPtr base;
    DistPtr bump;
    double epsilon = 0.0;
    double lambda = 0.0;
    std::shared_ptr<const Mixture> realized;

    static PerturbationPath at_point(const DistPtr& base, const Point& x, double epsilon, double lambda,
                                     KernelWidth width = KernelWidth::half);
    static PerturbationPath over_data(const DistPtr& base, const std::vector<Point>& data, double epsilon,
                                      double lambda, KernelWidth width = KernelWidth::half);
};

// sqrt(int h^2 / p dnu), the L2(P) norm of dH/dP, integrated over the bump's own
// support. Domination error where p < 1e-300 inside that support.
double r_lambda(const Distribution& base, const Distribution& bump, const QuadratureSettings& settings = {});

// Recommended ceiling on epsilon: lambda^(2 d1) / 100 (1e-2 when d1 = 0).
double epsilon_guideline(double lambda, int d1);

// Equal-weight mixture of bumps at the data points. Domination failures name
// the offending index.
DistPtr mixture_bump(const std::vector<Point>& data, double lambda, const DistPtr& base,
                     KernelWidth width = KernelWidth::half);

}  // namespace eif
