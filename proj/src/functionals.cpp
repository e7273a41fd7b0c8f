#include "eif/functionals.hpp"

#include <utility>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

const char* to_string(FunctionalKind kind) {
    switch (kind) {
        case FunctionalKind::avg_density: return "avg_density";
        case FunctionalKind::gcomp_mean: return "gcomp_mean";
        case FunctionalKind::mean: return "mean";
        case FunctionalKind::constant: return "constant";
    }
    return "unknown";
}

namespace {

void require_continuous(const Distribution& p) {
    if (!p.space().all_continuous())
        fail(ErrorKind::unsupported, "average density value needs a continuous sample space; " + p.descriptor() +
                                         " has discrete components");
}

}  // namespace

double AvgDensity::evaluate(const Distribution& p) const {
    require_continuous(p);
    return integrate(
        [&](std::span<const double> u) {
            const double v = p.density(u);
            return v * v;
        },
        p.domain(quad_));
}

double AvgDensity::difference(const Distribution& p1, const Distribution& p) const {
    if (&p1 == &p) return 0.0;
    require_continuous(p1);
    require_continuous(p);
    return integrate(
        [&](std::span<const double> u) {
            const double d = p1.delta(u, p);
            if (d == 0.0) return 0.0;
            return d * (p1.density(u) + p.density(u));
        },
        joint_domain({&p1, &p}, quad_));
}

double MeanFunctional::evaluate(const Distribution& p) const {
    if (component_ >= p.dimension()) fail(ErrorKind::input, "mean functional component out of range");
    return integrate([&](std::span<const double> u) { return u[component_] * p.density(u); }, p.domain(quad_));
}

double MeanFunctional::difference(const Distribution& p1, const Distribution& p) const {
    if (&p1 == &p) return 0.0;
    if (component_ >= p.dimension()) fail(ErrorKind::input, "mean functional component out of range");
    return integrate([&](std::span<const double> u) { return u[component_] * p1.delta(u, p); },
                     joint_domain({&p1, &p}, quad_));
}

// --- G-computation ----------------------------------------------------------

namespace {

struct Recursion {
    const Distribution& p;
    const LongitudinalLayout layout;
    const IntegrationDomain domain;

    Recursion(const Distribution& dist, IntegrationDomain dom)
        : p(dist), layout(LongitudinalLayout::from_dimension(dist.dimension())), domain(std::move(dom)) {}

    // Positivity of A_j = 1 given the history in u, where that history is reachable.
    static void check_positivity(const Distribution& d, std::size_t j, std::span<const double> u) {
        const std::size_t a = LongitudinalLayout::treatment(j);
        if (d.conditional(a, u) > 0.0) return;
        if (d.prefix_density(a - 1, u) == 0.0) return;
        std::vector<double> hist(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(a));
        fail(ErrorKind::positivity, "P(A_" + std::to_string(j) + " = 1 | history " + format_point(hist) +
                                        ") = 0 for " + d.descriptor());
    }

    double m(std::size_t j, Point& u) const {
        if (j == layout.K + 1) return u[layout.outcome()];
        u[LongitudinalLayout::treatment(j)] = 1.0;
        check_positivity(p, j, u);
        const std::size_t next = LongitudinalLayout::covariate(j + 1);
        const std::size_t axes[] = {next};
        return integrate_axes(domain, axes, u, [&](std::span<const double>) {
            const double c = p.conditional(next, u);
            return c == 0.0 ? 0.0 : c * m(j + 1, u);
        });
    }
};

// (m_j under the base, change of m_j) at the history in u.
std::pair<double, double> m_pair(const Distribution& p1, const Distribution& p, const LongitudinalLayout& layout,
                                 const IntegrationDomain& domain, std::size_t j, Point& u) {
    if (j == layout.K + 1) return {u[layout.outcome()], 0.0};
    u[LongitudinalLayout::treatment(j)] = 1.0;
    Recursion::check_positivity(p, j, u);
    Recursion::check_positivity(p1, j, u);
    const std::size_t next = LongitudinalLayout::covariate(j + 1);
    const Rule1D& rule = domain.axis(next);
    const double saved = u[next];
    Accumulator base, change;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        u[next] = rule.nodes[i];
        const double c = p.conditional(next, u);
        const double dc = p1.conditional_delta(next, u, p);
        if (c == 0.0 && dc == 0.0) continue;
        const auto [mp, dm] = m_pair(p1, p, layout, domain, j + 1, u);
        base.add(rule.weights[i] * c * mp);
        change.add(rule.weights[i] * (dc * (mp + dm) + c * dm));
    }
    u[next] = saved;
    return {base.value(), change.value()};
}

}  // namespace

double GcompMean::m(const Distribution& p, std::size_t j, std::span<const double> u) const {
    Recursion r(p, p.domain(quad_));
    Point x(u.begin(), u.end());
    return r.m(j, x);
}

double GcompMean::evaluate(const Distribution& p) const {
    Recursion r(p, p.domain(quad_));
    Point u(p.dimension(), 0.0);
    const std::size_t axes[] = {0};
    return integrate_axes(r.domain, axes, u, [&](std::span<const double>) {
        const double c = p.prefix_density(0, u);
        return c == 0.0 ? 0.0 : c * r.m(0, u);
    });
}

double GcompMean::difference(const Distribution& p1, const Distribution& p) const {
    if (&p1 == &p) return 0.0;
    const LongitudinalLayout layout = LongitudinalLayout::from_dimension(p.dimension());
    if (p1.dimension() != p.dimension()) fail(ErrorKind::input, "G-computation difference: dimension mismatch");
    const IntegrationDomain domain = joint_domain({&p1, &p}, quad_);
    Point u(p.dimension(), 0.0);
    const Rule1D& rule = domain.axis(0);
    Accumulator acc;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        u[0] = rule.nodes[i];
        const double c = p.prefix_density(0, u);
        const double dc = p1.prefix_delta(0, u, p);
        if (c == 0.0 && dc == 0.0) continue;
        const auto [mp, dm] = m_pair(p1, p, layout, domain, 0, u);
        acc.add(rule.weights[i] * (dc * (mp + dm) + c * dm));
    }
    return acc.value();
}

}  // namespace eif
