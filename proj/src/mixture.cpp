#include "eif/mixture.hpp"

#include <cmath>

#include "eif/error.hpp"
#include "eif/format.hpp"
#include "eif/quadrature.hpp"

namespace eif {

namespace {

SampleSpace mixture_space(const std::vector<DistPtr>& components) {
    if (components.empty()) fail(ErrorKind::input, "mixture needs at least one component");
    SampleSpace s;
    for (const auto& c : components) {
        if (!c) fail(ErrorKind::input, "null mixture component");
        s = s.dimension() == 0 ? c->space() : merge(s, c->space());
    }
    return s;
}

}  // namespace

Mixture::Mixture(std::vector<DistPtr> components, std::vector<double> weights)
    : Distribution(mixture_space(components)), components_(std::move(components)), weights_(std::move(weights)) {
    if (weights_.size() != components_.size()) fail(ErrorKind::input, "mixture weights must match components");
    Accumulator total;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::input, "mixture weights must be non-negative");
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) fail(ErrorKind::input, "mixture weights must sum to 1");
}

double Mixture::prefix_density(std::size_t last, std::span<const double> u) const {
    Accumulator acc;
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (weights_[i] != 0.0) acc.add(weights_[i] * components_[i]->prefix_density(last, u));
    return acc.value();
}

double Mixture::prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const {
    if (&base == this) return 0.0;
    std::size_t b = components_.size();
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (components_[i].get() == &base) b = i;
    if (b == components_.size()) return Distribution::prefix_delta(last, u, base);
    const double pb = base.prefix_density(last, u);
    Accumulator acc;
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (i != b && weights_[i] != 0.0) acc.add(weights_[i] * (components_[i]->prefix_density(last, u) - pb));
    return acc.value();
}

AxisHint Mixture::axis_hint(std::size_t k) const {
    AxisHint h = components_[0]->axis_hint(k);
    for (std::size_t i = 1; i < components_.size(); ++i) h = merge(h, components_[i]->axis_hint(k));
    return h;
}

std::string Mixture::descriptor() const {
    std::string s = "mixture[";
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) s += " + ";
        s += format_number(weights_[i]) + "*" + components_[i]->descriptor();
    }
    return s + "]";
}

std::shared_ptr<const Mixture> mix(const DistPtr& p, const DistPtr& h, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        fail(ErrorKind::input, "mixing weight epsilon must lie in [0, 1], got " + format_number(epsilon));
    if (!p || !h) fail(ErrorKind::input, "mix needs two distributions");
    if (p->dimension() != h->dimension()) fail(ErrorKind::input, "mixed distributions have different dimensions");
    return std::make_shared<Mixture>(std::vector<DistPtr>{p, h}, std::vector<double>{1.0 - epsilon, epsilon});
}

}  // namespace eif
