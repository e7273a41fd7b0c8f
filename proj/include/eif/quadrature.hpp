#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eif/error.hpp"
#include "eif/space.hpp"

namespace eif {

struct QuadratureSettings {
    int panels = 64;           // subintervals per continuous component
    int nodes_per_panel = 16;  // Gauss-Legendre order
    bool split_at_breakpoints = true;

    void validate() const;
    bool operator==(const QuadratureSettings&) const = default;
};

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre rule on [-1, 1].
Rule1D gauss_legendre(int order);

// Composite rule on [a, b]: `panels` equal panels, further split at every
// breakpoint strictly inside (a, b) when splitting is enabled.
Rule1D composite_rule(double a, double b, std::span<const double> breakpoints, const QuadratureSettings& settings);

// What a distribution reports about one component for integration purposes.
struct AxisHint {
    bool continuous = true;
    double lower = 0.0;  // effective (finite) range for continuous axes
    double upper = 1.0;
    std::vector<double> breakpoints;
    std::vector<double> support;  // discrete axes only
};

AxisHint merge(const AxisHint& a, const AxisHint& b);

// Tensor-product node set: composite Gauss-Legendre on continuous axes,
// exact enumeration on discrete axes.
class IntegrationDomain {
public:
    IntegrationDomain() = default;
    IntegrationDomain(std::span<const AxisHint> hints, const QuadratureSettings& settings);

    std::size_t dimension() const { return axes_.size(); }
    const Rule1D& axis(std::size_t i) const { return axes_.at(i); }
    std::size_t node_count() const;

private:
    std::vector<Rule1D> axes_;
};

// Neumaier-compensated accumulator.
class Accumulator {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

[[noreturn]] void non_finite_integrand(std::span<const double> node, double value);

// Integrates f over the listed axes of `domain`; coordinates not listed keep
// their value in `u`. `u` is restored on return.
template <class F>
double integrate_axes(const IntegrationDomain& domain, std::span<const std::size_t> axes, Point& u, F&& f) {
    if (axes.empty()) {
        const double v = f(std::span<const double>(u));
        if (!std::isfinite(v)) non_finite_integrand(u, v);
        return v;
    }
    const std::size_t k = axes.front();
    const double saved = u[k];
    const Rule1D& rule = domain.axis(k);
    Accumulator acc;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        u[k] = rule.nodes[i];
        acc.add(rule.weights[i] * integrate_axes(domain, axes.subspan(1), u, f));
    }
    u[k] = saved;
    return acc.value();
}

// Integral of f over the full domain.
template <class F>
double integrate(F&& f, const IntegrationDomain& domain) {
    std::vector<std::size_t> axes(domain.dimension());
    for (std::size_t i = 0; i < axes.size(); ++i) axes[i] = i;
    Point u(domain.dimension(), 0.0);
    return integrate_axes(domain, axes, u, f);
}

// Integral over a sample space with finite declared bounds.
template <class F>
double integrate(F&& f, const SampleSpace& space, const QuadratureSettings& settings) {
    std::vector<AxisHint> hints;
    for (const auto& c : space.components()) {
        AxisHint h;
        if (const auto* cont = std::get_if<Continuous>(&c)) {
            if (!std::isfinite(cont->lower) || !std::isfinite(cont->upper))
                fail(ErrorKind::input, "integration over a space needs finite continuous bounds");
            h.lower = cont->lower;
            h.upper = cont->upper;
        } else {
            h.continuous = false;
            h.support = std::get<Discrete>(c).support;
        }
        hints.push_back(std::move(h));
    }
    return integrate(std::forward<F>(f), IntegrationDomain(hints, settings));
}

}  // namespace eif
