#pragma once

#include <string>
#include <vector>

#include "eif/distribution.hpp"

namespace eif {

// Finite mixture sum_i w_i P_i. When the base of a difference is one of the
// components, the difference is formed as sum_{i != base} w_i (P_i - base),
// which stays proportional to the small weights.
class Mixture final : public Distribution {
public:
    Mixture(std::vector<DistPtr> components, std::vector<double> weights);

    double prefix_density(std::size_t last, std::span<const double> u) const override;
    double prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const override;
    AxisHint axis_hint(std::size_t k) const override;
    std::string descriptor() const override;

    const std::vector<DistPtr>& components() const { return components_; }
    const std::vector<double>& weights() const { return weights_; }

protected:
    double joint_density(std::span<const double> u) const override {
        return prefix_density(dimension() - 1, u);
    }

private:
    std::vector<DistPtr> components_;
    std::vector<double> weights_;
};

// (1 - epsilon) p + epsilon h. Input error unless 0 <= epsilon <= 1.
std::shared_ptr<const Mixture> mix(const DistPtr& p, const DistPtr& h, double epsilon);

}  // namespace eif
