#include "eif/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::input: return "input";
        case ErrorKind::config: return "config";
        case ErrorKind::numerical: return "numerical";
        case ErrorKind::domination: return "domination";
        case ErrorKind::bracket: return "bracket";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::positivity: return "positivity";
        case ErrorKind::non_convergence: return "non-convergence";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::model_membership: return "model-membership";
    }
    return "unknown";
}

SampleSpace::SampleSpace(std::vector<ComponentSpec> components)
    : components_(std::move(components)) {
    if (components_.empty()) fail(ErrorKind::input, "sample space needs at least one component");
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (const auto* c = std::get_if<Continuous>(&components_[i])) {
            if (!(c->lower < c->upper))
                fail(ErrorKind::input, "component " + std::to_string(i) + ": lower bound must be below upper bound");
        } else {
            auto& s = std::get<Discrete>(components_[i]).support;
            if (s.empty()) fail(ErrorKind::input, "component " + std::to_string(i) + ": empty discrete support");
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                fail(ErrorKind::input, "component " + std::to_string(i) + ": duplicate support point");
        }
    }
}

bool SampleSpace::is_continuous(std::size_t i) const {
    return std::holds_alternative<Continuous>(components_.at(i));
}

std::size_t SampleSpace::continuous_count() const {
    return static_cast<std::size_t>(std::count_if(components_.begin(), components_.end(), [](const auto& c) {
        return std::holds_alternative<Continuous>(c);
    }));
}

void SampleSpace::check_dimension(std::span<const double> u) const {
    if (u.size() != components_.size())
        fail(ErrorKind::input, "point has " + std::to_string(u.size()) + " coordinates, sample space has " +
                                   std::to_string(components_.size()));
}

bool SampleSpace::contains(std::span<const double> u) const {
    if (u.size() != components_.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (const auto* c = std::get_if<Continuous>(&components_[i])) {
            if (!(u[i] >= c->lower && u[i] <= c->upper)) return false;
        } else {
            const auto& s = std::get<Discrete>(components_[i]).support;
            if (!std::binary_search(s.begin(), s.end(), u[i])) return false;
        }
    }
    return true;
}

SampleSpace merge(const SampleSpace& a, const SampleSpace& b) {
    if (a.dimension() != b.dimension()) fail(ErrorKind::input, "cannot merge sample spaces of different dimension");
    std::vector<ComponentSpec> out;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const auto& ca = a.component(i);
        const auto& cb = b.component(i);
        if (ca.index() != cb.index())
            fail(ErrorKind::input, "component " + std::to_string(i) + " is continuous in one space and discrete in the other");
        if (const auto* x = std::get_if<Continuous>(&ca)) {
            const auto& y = std::get<Continuous>(cb);
            out.emplace_back(Continuous{std::min(x->lower, y.lower), std::max(x->upper, y.upper)});
        } else {
            auto s = std::get<Discrete>(ca).support;
            const auto& t = std::get<Discrete>(cb).support;
            s.insert(s.end(), t.begin(), t.end());
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            out.emplace_back(Discrete{std::move(s)});
        }
    }
    return SampleSpace(std::move(out));
}

std::string format_point(std::span<const double> u, char sep) {
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) out += sep;
        out += format_number(u[i]);
    }
    return out;
}

}  // namespace eif
