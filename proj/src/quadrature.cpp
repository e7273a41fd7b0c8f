#include "eif/quadrature.hpp"

#include <algorithm>
#include <numbers>

#include "eif/format.hpp"

namespace eif {

void QuadratureSettings::validate() const {
    if (panels < 1) fail(ErrorKind::input, "quadrature.panels must be >= 1");
    if (nodes_per_panel < 2) fail(ErrorKind::input, "quadrature.nodes must be >= 2");
}

Rule1D gauss_legendre(int order) {
    if (order < 1) fail(ErrorKind::input, "Gauss-Legendre order must be positive");
    const int n = order;
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

Rule1D composite_rule(double a, double b, std::span<const double> breakpoints, const QuadratureSettings& settings) {
    settings.validate();
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        fail(ErrorKind::input, "composite rule needs a finite interval with a < b");
    std::vector<double> edges;
    edges.reserve(settings.panels + 1 + breakpoints.size());
    for (int i = 0; i <= settings.panels; ++i)
        edges.push_back(i == settings.panels ? b : a + (b - a) * (static_cast<double>(i) / settings.panels));
    if (settings.split_at_breakpoints) {
        for (double x : breakpoints)
            if (x > a && x < b) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const Rule1D base = gauss_legendre(settings.nodes_per_panel);
    Rule1D out;
    out.nodes.reserve((edges.size() - 1) * base.size());
    out.weights.reserve((edges.size() - 1) * base.size());
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < base.size(); ++i) {
            out.nodes.push_back(mid + half * base.nodes[i]);
            out.weights.push_back(half * base.weights[i]);
        }
    }
    return out;
}

AxisHint merge(const AxisHint& a, const AxisHint& b) {
    if (a.continuous != b.continuous) fail(ErrorKind::input, "cannot merge continuous and discrete axes");
    AxisHint out = a;
    if (a.continuous) {
        out.lower = std::min(a.lower, b.lower);
        out.upper = std::max(a.upper, b.upper);
        out.breakpoints.insert(out.breakpoints.end(), b.breakpoints.begin(), b.breakpoints.end());
        // The narrower range's ends become kinks of the merged integrand.
        for (double e : {a.lower, a.upper, b.lower, b.upper})
            if (e > out.lower && e < out.upper) out.breakpoints.push_back(e);
        std::sort(out.breakpoints.begin(), out.breakpoints.end());
        out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end()), out.breakpoints.end());
    } else {
        out.support.insert(out.support.end(), b.support.begin(), b.support.end());
        std::sort(out.support.begin(), out.support.end());
        out.support.erase(std::unique(out.support.begin(), out.support.end()), out.support.end());
    }
    return out;
}

IntegrationDomain::IntegrationDomain(std::span<const AxisHint> hints, const QuadratureSettings& settings) {
    settings.validate();
    axes_.reserve(hints.size());
    for (const auto& h : hints) {
        if (h.continuous) {
            axes_.push_back(composite_rule(h.lower, h.upper, h.breakpoints, settings));
        } else {
            Rule1D r;
            r.nodes = h.support;
            r.weights.assign(h.support.size(), 1.0);
            axes_.push_back(std::move(r));
        }
    }
}

std::size_t IntegrationDomain::node_count() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.size();
    return n;
}

void non_finite_integrand(std::span<const double> node, double value) {
    fail(ErrorKind::numerical, "integrand is " + format_number(value) + " at node (" + format_point(node) + ")");
}

}  // namespace eif
