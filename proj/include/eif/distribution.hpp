#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>

#include "eif/quadrature.hpp"
#include "eif/space.hpp"

namespace eif {

// A distribution dominated by the product of Lebesgue measure (continuous
// components) and counting measure (discrete components), with pointwise
// density evaluation. Instances are immutable once built.
//
// Components are ordered. The "prefix" of a point is its first last+1
// coordinates; prefix densities are the corresponding marginals, which gives
// every distribution a sequential factorization through prefix ratios.
class Distribution {
public:
    explicit Distribution(SampleSpace space) : space_(std::move(space)) {}
    virtual ~Distribution() = default;

    const SampleSpace& space() const { return space_; }
    std::size_t dimension() const { return space_.dimension(); }

    // Joint density at u. Throws on dimension mismatch.
    double density(std::span<const double> u) const;

    // Marginal density of components 0..last. Only u[0..last] is read.
    // The default integrates the remaining components numerically.
    virtual double prefix_density(std::size_t last, std::span<const double> u) const;

    // Conditional density of component k given components 0..k-1; zero where
    // the conditioning prefix has zero density.
    virtual double conditional(std::size_t k, std::span<const double> u) const;

    // prefix_density(last) of this minus that of `base`, evaluated without
    // subtracting nearly equal numbers when the construction allows it.
    virtual double prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const;

    // conditional(k) of this minus that of `base`.
    virtual double conditional_delta(std::size_t k, std::span<const double> u, const Distribution& base) const;

    double delta(std::span<const double> u, const Distribution& base) const {
        return prefix_delta(dimension() - 1, u, base);
    }

    // Effective integration range, kinks and support of component k.
    virtual AxisHint axis_hint(std::size_t k) const;

    virtual std::string descriptor() const = 0;

    IntegrationDomain domain(const QuadratureSettings& settings) const;

protected:
    virtual double joint_density(std::span<const double> u) const = 0;

private:
    SampleSpace space_;
};

using DistPtr = std::shared_ptr<const Distribution>;

// Domain covering the union of the distributions' ranges and kinks.
IntegrationDomain joint_domain(std::initializer_list<const Distribution*> dists, const QuadratureSettings& settings);

// Numerical total mass.
double total_mass(const Distribution& d, const QuadratureSettings& settings = {});

// Longitudinal layout X = (L0, A0, L1, A1, ..., LK, AK, L_{K+1}).
struct LongitudinalLayout {
    std::size_t K = 0;

    static LongitudinalLayout from_dimension(std::size_t d);
    std::size_t dimension() const { return 2 * K + 3; }
    static constexpr std::size_t covariate(std::size_t j) { return 2 * j; }
    static constexpr std::size_t treatment(std::size_t j) { return 2 * j + 1; }
    std::size_t outcome() const { return 2 * K + 2; }
};

}  // namespace eif
