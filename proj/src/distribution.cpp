#include "eif/distribution.hpp"

#include <vector>

#include "eif/error.hpp"

namespace eif {

double Distribution::density(std::span<const double> u) const {
    space_.check_dimension(u);
    return joint_density(u);
}

double Distribution::prefix_density(std::size_t last, std::span<const double> u) const {
    const std::size_t d = dimension();
    if (last + 1 >= d) return joint_density(u.first(d));
    const IntegrationDomain dom = domain(QuadratureSettings{});
    Point x(d, 0.0);
    for (std::size_t i = 0; i <= last; ++i) x[i] = u[i];
    std::vector<std::size_t> rest;
    for (std::size_t i = last + 1; i < d; ++i) rest.push_back(i);
    return integrate_axes(dom, rest, x, [&](std::span<const double> v) { return joint_density(v); });
}

double Distribution::conditional(std::size_t k, std::span<const double> u) const {
    const double num = prefix_density(k, u);
    if (k == 0) return num;
    const double den = prefix_density(k - 1, u);
    return den > 0.0 ? num / den : 0.0;
}

double Distribution::prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const {
    if (&base == this) return 0.0;
    return prefix_density(last, u) - base.prefix_density(last, u);
}

double Distribution::conditional_delta(std::size_t k, std::span<const double> u, const Distribution& base) const {
    if (&base == this) return 0.0;
    if (k == 0) return prefix_delta(0, u, base);
    const double q_prev = prefix_density(k - 1, u);
    const double p_prev = base.prefix_density(k - 1, u);
    if (q_prev <= 0.0 || p_prev <= 0.0) return conditional(k, u) - base.conditional(k, u);
    const double dq = prefix_delta(k, u, base);
    const double dq_prev = prefix_delta(k - 1, u, base);
    const double p_k = base.prefix_density(k, u);
    return (dq * p_prev - p_k * dq_prev) / (q_prev * p_prev);
}

AxisHint Distribution::axis_hint(std::size_t k) const {
    AxisHint h;
    const auto& c = space_.component(k);
    if (const auto* cont = std::get_if<Continuous>(&c)) {
        if (!std::isfinite(cont->lower) || !std::isfinite(cont->upper))
            fail(ErrorKind::input, descriptor() + ": component " + std::to_string(k) +
                                       " has an infinite bound and no effective integration range");
        h.lower = cont->lower;
        h.upper = cont->upper;
    } else {
        h.continuous = false;
        h.support = std::get<Discrete>(c).support;
    }
    return h;
}

IntegrationDomain Distribution::domain(const QuadratureSettings& settings) const {
    return joint_domain({this}, settings);
}

IntegrationDomain joint_domain(std::initializer_list<const Distribution*> dists, const QuadratureSettings& settings) {
    std::vector<AxisHint> hints;
    for (const Distribution* d : dists) {
        if (hints.empty()) {
            for (std::size_t k = 0; k < d->dimension(); ++k) hints.push_back(d->axis_hint(k));
        } else {
            if (d->dimension() != hints.size()) fail(ErrorKind::input, "distributions have different dimensions");
            for (std::size_t k = 0; k < hints.size(); ++k) hints[k] = merge(hints[k], d->axis_hint(k));
        }
    }
    return IntegrationDomain(hints, settings);
}

double total_mass(const Distribution& d, const QuadratureSettings& settings) {
    return integrate([&](std::span<const double> u) { return d.density(u); }, d.domain(settings));
}

LongitudinalLayout LongitudinalLayout::from_dimension(std::size_t d) {
    if (d < 3 || d % 2 == 0)
        fail(ErrorKind::input, "longitudinal data need (L0, A0, ..., AK, L_{K+1}): odd dimension >= 3, got " +
                                   std::to_string(d));
    return LongitudinalLayout{(d - 3) / 2};
}

}  // namespace eif
