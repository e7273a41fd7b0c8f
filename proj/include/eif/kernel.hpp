#pragma once

#include <string>
#include <vector>

#include "eif/distribution.hpp"

namespace eif {

// How lambda maps to the bump's interval on each continuous component.
//   half: (x - lambda, x + lambda), height 1/(2 lambda)
//   full: (x - lambda/2, x + lambda/2), height 1/lambda, i.e. K(w) = 1{-1 < 2w < 1}
enum class KernelWidth { half, full };

const char* to_string(KernelWidth w);
KernelWidth parse_kernel_width(const std::string& text);

// Uniform product bump at x: uniform on the box around the continuous
// coordinates (truncated to the base's declared support and renormalized),
// point masses on the discrete coordinates.
class KernelBump final : public Distribution {
public:
    KernelBump(Point center, double lambda, KernelWidth width, const Distribution& base);

    double prefix_density(std::size_t last, std::span<const double> u) const override;
    double conditional(std::size_t k, std::span<const double> u) const override;
    AxisHint axis_hint(std::size_t k) const override;
    std::string descriptor() const override;

    const Point& center() const { return center_; }
    double lambda() const { return lambda_; }
    KernelWidth width() const { return width_; }
    // Interval actually covered on continuous component k.
    double lower(std::size_t k) const { return lower_.at(k); }
    double upper(std::size_t k) const { return upper_.at(k); }

protected:
    double joint_density(std::span<const double> u) const override {
        return prefix_density(dimension() - 1, u);
    }

private:
    double factor(std::size_t k, double v) const;

    Point center_;
    double lambda_;
    KernelWidth width_;
    std::vector<double> lower_, upper_, height_;
};

// Throws a domination error when the base has zero density at x or does not
// cover the bump's continuous box.
std::shared_ptr<const KernelBump> make_bump(const Point& x, double lambda, const DistPtr& base,
                                            KernelWidth width = KernelWidth::half);

}  // namespace eif
