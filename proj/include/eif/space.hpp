#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace eif {

using Point = std::vector<double>;

struct Continuous {
    double lower;
    double upper;
    bool operator==(const Continuous&) const = default;
};

struct Discrete {
    std::vector<double> support;
    bool operator==(const Discrete&) const = default;
};

using ComponentSpec = std::variant<Continuous, Discrete>;

// Ordered product of continuous (Lebesgue) and discrete (counting) components.
class SampleSpace {
public:
    SampleSpace() = default;
    explicit SampleSpace(std::vector<ComponentSpec> components);

    std::size_t dimension() const { return components_.size(); }
    const ComponentSpec& component(std::size_t i) const { return components_.at(i); }
    const std::vector<ComponentSpec>& components() const { return components_; }

    bool is_continuous(std::size_t i) const;
    std::size_t continuous_count() const;
    bool all_continuous() const { return continuous_count() == dimension(); }

    // Throws input error on dimension mismatch.
    void check_dimension(std::span<const double> u) const;
    // True when u lies inside every declared bound/support.
    bool contains(std::span<const double> u) const;

    bool operator==(const SampleSpace&) const = default;

private:
    std::vector<ComponentSpec> components_;
};

// Merge two spaces of equal dimension: continuous bounds take the hull,
// discrete supports the union.
SampleSpace merge(const SampleSpace& a, const SampleSpace& b);

std::string format_point(std::span<const double> u, char sep = ';');

}  // namespace eif
