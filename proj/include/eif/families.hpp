#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eif/distribution.hpp"
#include "eif/expression.hpp"
#include "eif/rng.hpp"

namespace eif {

// Conditional law of one component given the components before it.
class ConditionalFactor {
public:
    virtual ~ConditionalFactor() = default;

    virtual ComponentSpec component() const = 0;
    virtual double density(double value, std::span<const double> history) const = 0;
    virtual double sample(std::span<const double> history, Xorshift64Star& rng) const = 0;
    virtual std::string descriptor() const = 0;

    // Effective integration range given the ranges of the history.
    virtual AxisHint hint(std::span<const AxisHint> history) const;
    // Kinks in history coordinates, as (component, location).
    virtual std::vector<std::pair<std::size_t, double>> kinks() const { return {}; }
    // Number of history coordinates the factor reads.
    virtual std::size_t arity() const { return 0; }
};

using FactorPtr = std::shared_ptr<const ConditionalFactor>;

class BetaFactor final : public ConditionalFactor {
public:
    BetaFactor(double alpha, double beta);
    ComponentSpec component() const override { return Continuous{0.0, 1.0}; }
    double density(double value, std::span<const double>) const override;
    double sample(std::span<const double>, Xorshift64Star& rng) const override;
    std::string descriptor() const override;

private:
    double alpha_, beta_, log_norm_;
};

class UniformFactor final : public ConditionalFactor {
public:
    UniformFactor(double lower, double upper);
    ComponentSpec component() const override { return Continuous{lower_, upper_}; }
    double density(double value, std::span<const double>) const override;
    double sample(std::span<const double>, Xorshift64Star& rng) const override;
    std::string descriptor() const override;

private:
    double lower_, upper_;
};

// Normal with mean given by an expression of the history. Effective range is
// the span of the mean over the corners of the history ranges, +- 8 sd.
class NormalFactor final : public ConditionalFactor {
public:
    NormalFactor(Expression mean, double variance);
    ComponentSpec component() const override;
    double density(double value, std::span<const double> history) const override;
    double sample(std::span<const double> history, Xorshift64Star& rng) const override;
    std::string descriptor() const override;
    AxisHint hint(std::span<const AxisHint> history) const override;
    std::vector<std::pair<std::size_t, double>> kinks() const override { return mean_.kinks(); }
    std::size_t arity() const override { return mean_.arity(); }

private:
    Expression mean_;
    double variance_, sd_;
};

// Bernoulli on {0, 1} with success probability expit(logit(history)).
class LogitBernoulliFactor final : public ConditionalFactor {
public:
    explicit LogitBernoulliFactor(Expression logit);
    ComponentSpec component() const override { return Discrete{{0.0, 1.0}}; }
    double density(double value, std::span<const double> history) const override;
    double sample(std::span<const double> history, Xorshift64Star& rng) const override;
    std::string descriptor() const override;
    std::vector<std::pair<std::size_t, double>> kinks() const override { return logit_.kinks(); }
    std::size_t arity() const override { return logit_.arity(); }
    double success(std::span<const double> history) const { return expit(logit_(history)); }

private:
    Expression logit_;
};

class BernoulliFactor final : public ConditionalFactor {
public:
    explicit BernoulliFactor(double p);
    ComponentSpec component() const override { return Discrete{{0.0, 1.0}}; }
    double density(double value, std::span<const double>) const override;
    double sample(std::span<const double>, Xorshift64Star& rng) const override;
    std::string descriptor() const override;

private:
    double p_;
};

// Finite support with explicit masses (uniform when masses are omitted).
class DiscreteFactor final : public ConditionalFactor {
public:
    explicit DiscreteFactor(std::vector<double> support, std::vector<double> masses = {});
    ComponentSpec component() const override { return Discrete{support_}; }
    double density(double value, std::span<const double>) const override;
    double sample(std::span<const double>, Xorshift64Star& rng) const override;
    std::string descriptor() const override;

private:
    std::vector<double> support_;
    std::vector<double> masses_;
    bool uniform_;
};

// Joint law as an ordered product of conditional factors.
class FactorizedLaw final : public Distribution {
public:
    explicit FactorizedLaw(std::vector<FactorPtr> factors);

    double prefix_density(std::size_t last, std::span<const double> u) const override;
    double conditional(std::size_t k, std::span<const double> u) const override;
    AxisHint axis_hint(std::size_t k) const override { return hints_.at(k); }
    std::string descriptor() const override;

    const std::vector<FactorPtr>& factors() const { return factors_; }
    const ConditionalFactor& factor(std::size_t k) const { return *factors_.at(k); }
    Point sample(Xorshift64Star& rng) const;

protected:
    double joint_density(std::span<const double> u) const override { return prefix_density(dimension() - 1, u); }

private:
    std::vector<FactorPtr> factors_;
    std::vector<AxisHint> hints_;
};

// density_eval on a single factorized law is its product of factors.
double sequential_joint(const FactorizedLaw& law, std::span<const double> u);

DistPtr beta_distribution(double alpha, double beta);
DistPtr uniform_distribution(double lower, double upper);
DistPtr normal_distribution(double mean, double variance);
DistPtr bernoulli_distribution(double p);
DistPtr discrete_uniform(std::vector<double> support);

// The five-component longitudinal law (L0, A0, L1, A1, Y):
//   L0 ~ uniform{0..4}; A0 ~ Bern(expit(-1 + 0.5 l0));
//   L1 ~ N(3 l0 - 3 a0, 4); A1 ~ Bern(expit(-5 + c10(l1) + a0 + 0.5 l0));
//   Y ~ Bern(expit(-1 + 0.5 c10(l1) - 0.5 a1 - a0)).
std::shared_ptr<const FactorizedLaw> markov_example_law();

}  // namespace eif
