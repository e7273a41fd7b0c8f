#pragma once

#include <memory>
#include <string>

#include "eif/distribution.hpp"
#include "eif/quadrature.hpp"

namespace eif {

enum class FunctionalKind { avg_density, gcomp_mean, mean, constant };

const char* to_string(FunctionalKind kind);

// A parameter Psi with an optional cancellation-aware difference
// Psi(P1) - Psi(P) that reads P1 - P through the distributions' delta hooks.
class Functional {
public:
    virtual ~Functional() = default;
    virtual FunctionalKind kind() const = 0;
    virtual std::string name() const = 0;
    virtual double evaluate(const Distribution& p) const = 0;
    virtual bool has_difference() const { return true; }
    virtual double difference(const Distribution& p1, const Distribution& p) const = 0;
    // Plain evaluate(p1) - evaluate(p), for comparisons.
    double naive_difference(const Distribution& p1, const Distribution& p) const {
        return evaluate(p1) - evaluate(p);
    }
};

using FunctionalPtr = std::shared_ptr<const Functional>;

// int p(u)^2 du on a fully continuous space.
class AvgDensity final : public Functional {
public:
    explicit AvgDensity(QuadratureSettings quad = {}) : quad_(quad) {}
    FunctionalKind kind() const override { return FunctionalKind::avg_density; }
    std::string name() const override { return "avg_density"; }
    double evaluate(const Distribution& p) const override;
    double difference(const Distribution& p1, const Distribution& p) const override;

private:
    QuadratureSettings quad_;
};

// E[X_k].
class MeanFunctional final : public Functional {
public:
    explicit MeanFunctional(std::size_t component = 0, QuadratureSettings quad = {})
        : component_(component), quad_(quad) {}
    FunctionalKind kind() const override { return FunctionalKind::mean; }
    std::string name() const override { return "mean"; }
    double evaluate(const Distribution& p) const override;
    double difference(const Distribution& p1, const Distribution& p) const override;

private:
    std::size_t component_;
    QuadratureSettings quad_;
};

class ConstantFunctional final : public Functional {
public:
    explicit ConstantFunctional(double c) : c_(c) {}
    FunctionalKind kind() const override { return FunctionalKind::constant; }
    std::string name() const override { return "constant"; }
    double evaluate(const Distribution&) const override { return c_; }
    double difference(const Distribution&, const Distribution&) const override { return 0.0; }

private:
    double c_;
};

// G-computation mean of the final covariate under treatment 1 at every time:
// m_{K+1} = l_{K+1}, m_j = E[m_{j+1} | lbar_j, abar_j = 1], Psi = E[m_0(L0)].
class GcompMean final : public Functional {
public:
    explicit GcompMean(QuadratureSettings quad = {}) : quad_(quad) {}
    FunctionalKind kind() const override { return FunctionalKind::gcomp_mean; }
    std::string name() const override { return "gcomp_mean"; }
    double evaluate(const Distribution& p) const override;
    // Differences the recursions stage by stage:
    //   dm_j = int [dc * (m_{j+1} + dm_{j+1}) + c * dm_{j+1}]
    // with c the base conditional of l_{j+1} and dc its change.
    double difference(const Distribution& p1, const Distribution& p) const override;

    // m_j at the history stored in u (components up to covariate j; the
    // treatments a_0..a_j are read as 1).
    double m(const Distribution& p, std::size_t j, std::span<const double> u) const;

private:
    QuadratureSettings quad_;
};

}  // namespace eif
