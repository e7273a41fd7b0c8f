#include "eif/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

const char* to_string(KernelWidth w) { return w == KernelWidth::half ? "half" : "full"; }

KernelWidth parse_kernel_width(const std::string& text) {
    if (text == "half") return KernelWidth::half;
    if (text == "full") return KernelWidth::full;
    fail(ErrorKind::config, "unknown kernel width '" + text + "' (expected half or full)");
}

KernelBump::KernelBump(Point center, double lambda, KernelWidth width, const Distribution& base)
    : Distribution(base.space()), center_(std::move(center)), lambda_(lambda), width_(width) {
    space().check_dimension(center_);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorKind::input, "bump lambda must be positive");
    const double hw = width == KernelWidth::half ? lambda : 0.5 * lambda;
    const std::size_t d = dimension();
    lower_.assign(d, 0.0);
    upper_.assign(d, 0.0);
    height_.assign(d, 1.0);
    for (std::size_t k = 0; k < d; ++k) {
        const auto& c = space().component(k);
        if (const auto* cont = std::get_if<Continuous>(&c)) {
            lower_[k] = std::max(center_[k] - hw, cont->lower);
            upper_[k] = std::min(center_[k] + hw, cont->upper);
            if (!(lower_[k] < upper_[k]))
                fail(ErrorKind::domination, "bump at " + format_point(center_) + " misses the support of component " +
                                                std::to_string(k));
            height_[k] = 1.0 / (upper_[k] - lower_[k]);
        }
    }
}

double KernelBump::factor(std::size_t k, double v) const {
    if (space().is_continuous(k)) return (v > lower_[k] && v < upper_[k]) ? height_[k] : 0.0;
    return v == center_[k] ? 1.0 : 0.0;
}

double KernelBump::prefix_density(std::size_t last, std::span<const double> u) const {
    double p = 1.0;
    for (std::size_t k = 0; k <= last && k < dimension(); ++k) {
        p *= factor(k, u[k]);
        if (p == 0.0) return 0.0;
    }
    return p;
}

double KernelBump::conditional(std::size_t k, std::span<const double> u) const {
    if (prefix_density(k == 0 ? 0 : k - 1, u) == 0.0 && k > 0) return 0.0;
    return factor(k, u[k]);
}

AxisHint KernelBump::axis_hint(std::size_t k) const {
    AxisHint h;
    if (space().is_continuous(k)) {
        h.lower = lower_[k];
        h.upper = upper_[k];
    } else {
        h.continuous = false;
        h.support = {center_[k]};
    }
    return h;
}

std::string KernelBump::descriptor() const {
    return "bump(x=" + format_point(center_) + ",lambda=" + format_number(lambda_) + ",width=" + to_string(width_) +
           ")";
}

std::shared_ptr<const KernelBump> make_bump(const Point& x, double lambda, const DistPtr& base, KernelWidth width) {
    if (!base) fail(ErrorKind::input, "make_bump needs a base distribution");
    base->space().check_dimension(x);
    if (!base->space().contains(x))
        fail(ErrorKind::domination, "bump center " + format_point(x) + " lies outside the base's sample space");
    auto bump = std::make_shared<KernelBump>(x, lambda, width, *base);
    if (!(base->density(x) > 0.0))
        fail(ErrorKind::domination, "base " + base->descriptor() + " has zero density at bump center " + format_point(x));
    // Probe the box interior: corners pulled a quarter of the way in.
    const std::size_t d = x.size();
    std::vector<std::size_t> cont;
    for (std::size_t k = 0; k < d; ++k)
        if (base->space().is_continuous(k)) cont.push_back(k);
    if (cont.size() <= 10) {
        Point probe = x;
        for (std::size_t mask = 0; mask < (std::size_t{1} << cont.size()); ++mask) {
            for (std::size_t i = 0; i < cont.size(); ++i) {
                const std::size_t k = cont[i];
                const double lo = bump->lower(k), hi = bump->upper(k);
                probe[k] = (mask >> i) & 1 ? hi - 0.25 * (hi - lo) : lo + 0.25 * (hi - lo);
            }
            if (!(base->density(probe) > 0.0))
                fail(ErrorKind::domination, "base " + base->descriptor() + " has zero density at " +
                                                format_point(probe) + " inside the bump at " + format_point(x));
        }
    }
    return bump;
}

}  // namespace eif
