#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eif/distribution.hpp"
#include "eif/expression.hpp"
#include "eif/solvers.hpp"

namespace eif {

enum class ModelKind { nonparametric, mean_constrained, markov, tilted };

const char* to_string(ModelKind kind);

struct ProjectionMeta {
    double xi = 0.0;                 // mean-constrained multiplier
    std::vector<double> beta;        // tilt coefficients
    int iterations = 0;
    double gradient_norm = 0.0;
    double constraint_residual = 0.0;  // |mean - mu|, CI residual, or tilt gradient norm
    std::string note;

    std::string summary() const;
};

struct ProjectionOutcome {
    DistPtr projected;
    ProjectionMeta meta;
    bool feasible = true;
};

// A model, represented by its KL projection Q -> argmax_{P1 in M} int log p1 dQ.
class ModelProjector {
public:
    virtual ~ModelProjector() = default;
    virtual ModelKind kind() const = 0;
    virtual std::string descriptor() const = 0;
    virtual ProjectionOutcome project(const DistPtr& q) const = 0;
};

using ProjectorPtr = std::shared_ptr<const ModelProjector>;

// --- nonparametric ---------------------------------------------------------

class NonparametricProjector final : public ModelProjector {
public:
    ModelKind kind() const override { return ModelKind::nonparametric; }
    std::string descriptor() const override { return "nonparametric"; }
    ProjectionOutcome project(const DistPtr& q) const override;
};

// --- mean constraint --------------------------------------------------------

// q(u) / (1 - xi (u - mu)) on a univariate space.
class MeanTilted final : public Distribution {
public:
    MeanTilted(DistPtr q, double mu, double xi);

    double prefix_density(std::size_t last, std::span<const double> u) const override;
    double prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const override;
    AxisHint axis_hint(std::size_t k) const override { return q_->axis_hint(k); }
    std::string descriptor() const override;

    double xi() const { return xi_; }
    const DistPtr& source() const { return q_; }

protected:
    double joint_density(std::span<const double> u) const override { return prefix_density(0, u); }

private:
    DistPtr q_;
    double mu_, xi_;
};

class MeanConstrainedProjector final : public ModelProjector {
public:
    explicit MeanConstrainedProjector(double mu, QuadratureSettings quad = {}, double root_tol = 1e-13);
    ModelKind kind() const override { return ModelKind::mean_constrained; }
    std::string descriptor() const override;
    ProjectionOutcome project(const DistPtr& q) const override;
    double mu() const { return mu_; }

private:
    double mu_;
    QuadratureSettings quad_;
    double root_tol_;
};

// --- Markov longitudinal ----------------------------------------------------

// Q with the kernel of every L_j (j >= 2) under the all-treated history
// replaced by qbar(l_{j-1}, l_j) / int qbar(l_{j-1}, l') dl', where qbar
// integrates the treated Q-prefix over l_0..l_{j-2}. Other conditionals are Q's.
class MarkovProjectedLaw final : public Distribution {
public:
    MarkovProjectedLaw(DistPtr q, QuadratureSettings quad = {});

    double prefix_density(std::size_t last, std::span<const double> u) const override;
    double conditional(std::size_t k, std::span<const double> u) const override;
    double prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const override;
    double conditional_delta(std::size_t k, std::span<const double> u, const Distribution& base) const override;
    AxisHint axis_hint(std::size_t k) const override { return q_->axis_hint(k); }
    std::string descriptor() const override;

    const DistPtr& source() const { return q_; }
    const LongitudinalLayout& layout() const { return layout_; }
    // True when component k is a constrained covariate evaluated on a treated history.
    bool markov_position(std::size_t k, std::span<const double> u) const;

protected:
    double joint_density(std::span<const double> u) const override { return prefix_density(dimension() - 1, u); }

private:
    // qbar numerator (through component k) and denominator (through k - 1),
    // integrated over l_0..l_{j-2} with treatments fixed at 1.
    double marginal(const Distribution& d, std::size_t last, std::size_t j, std::span<const double> u) const;
    double marginal_delta(std::size_t last, std::size_t j, std::span<const double> u, const Distribution& base) const;

    DistPtr q_;
    LongitudinalLayout layout_;
    IntegrationDomain domain_;
};

// Largest spread of the conditional of L_j (j >= 2) across earlier covariate
// values, at fixed (l_{j-1}, l_j) and all treatments 1, over a test grid.
double markov_residual(const Distribution& d, const QuadratureSettings& quad = {});

class MarkovProjector final : public ModelProjector {
public:
    explicit MarkovProjector(QuadratureSettings quad = {}) : quad_(quad) {}
    ModelKind kind() const override { return ModelKind::markov; }
    std::string descriptor() const override { return "markov"; }
    ProjectionOutcome project(const DistPtr& q) const override;

private:
    QuadratureSettings quad_;
};

// --- exponential tilt -------------------------------------------------------

// reference(u) exp(beta . h(u) - logZ).
class TiltedDistribution final : public Distribution {
public:
    TiltedDistribution(DistPtr reference, std::vector<Expression> basis, Eigen::VectorXd beta, double log_z);

    double prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const override;
    AxisHint axis_hint(std::size_t k) const override { return reference_->axis_hint(k); }
    std::string descriptor() const override;
    const Eigen::VectorXd& beta() const { return beta_; }

protected:
    double joint_density(std::span<const double> u) const override;

private:
    double exponent(std::span<const double> u) const;

    DistPtr reference_;
    std::vector<Expression> basis_;
    Eigen::VectorXd beta_;
    double log_z_;
};

class TiltedProjector final : public ModelProjector {
public:
    TiltedProjector(std::vector<Expression> basis, DistPtr reference, QuadratureSettings quad = {},
                    NewtonOptions newton = {});
    ModelKind kind() const override { return ModelKind::tilted; }
    std::string descriptor() const override;
    ProjectionOutcome project(const DistPtr& q) const override;

    // L(beta) = beta . int h dQ - log int exp(beta . h) dP.
    double objective(const DistPtr& q, const Eigen::VectorXd& beta) const;
    const std::vector<Expression>& basis() const { return basis_; }
    const DistPtr& reference() const { return reference_; }

private:
    std::vector<Expression> basis_;
    DistPtr reference_;
    QuadratureSettings quad_;
    NewtonOptions newton_;
};

}  // namespace eif
