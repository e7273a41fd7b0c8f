#include "eif/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::nonparametric: return "nonparametric";
        case ModelKind::mean_constrained: return "mean_constrained";
        case ModelKind::markov: return "markov";
        case ModelKind::tilted: return "tilted";
    }
    return "unknown";
}

std::string ProjectionMeta::summary() const {
    std::ostringstream os;
    os << "xi=" << format_number(xi);
    if (!beta.empty()) {
        os << " beta=(";
        for (std::size_t i = 0; i < beta.size(); ++i) os << (i ? "," : "") << format_number(beta[i]);
        os << ") iterations=" << iterations << " gradient_norm=" << format_number(gradient_norm);
    }
    os << " residual=" << format_number(constraint_residual);
    if (!note.empty()) os << " note=" << note;
    return os.str();
}

ProjectionOutcome NonparametricProjector::project(const DistPtr& q) const {
    if (!q) fail(ErrorKind::input, "projection of a null distribution");
    return ProjectionOutcome{q, {}, true};
}

// --- mean constraint --------------------------------------------------------

MeanTilted::MeanTilted(DistPtr q, double mu, double xi)
    : Distribution(q->space()), q_(std::move(q)), mu_(mu), xi_(xi) {
    if (dimension() != 1) fail(ErrorKind::input, "mean-constrained projection needs a univariate space");
}

double MeanTilted::prefix_density(std::size_t, std::span<const double> u) const {
    const double qv = q_->prefix_density(0, u);
    if (qv == 0.0) return 0.0;
    return qv / (1.0 - xi_ * (u[0] - mu_));
}

double MeanTilted::prefix_delta(std::size_t, std::span<const double> u, const Distribution& base) const {
    if (&base == this) return 0.0;
    const double t = u[0] - mu_;
    const double dq = q_->prefix_delta(0, u, base);
    return (dq + base.prefix_density(0, u) * xi_ * t) / (1.0 - xi_ * t);
}

std::string MeanTilted::descriptor() const {
    return "mean_projected(" + q_->descriptor() + ",mu=" + format_number(mu_) + ",xi=" + format_number(xi_) + ")";
}

MeanConstrainedProjector::MeanConstrainedProjector(double mu, QuadratureSettings quad, double root_tol)
    : mu_(mu), quad_(quad), root_tol_(root_tol) {
    if (!std::isfinite(mu)) fail(ErrorKind::input, "constraint mean must be finite");
    quad_.validate();
}

std::string MeanConstrainedProjector::descriptor() const { return "mean_constrained(mu=" + format_number(mu_) + ")"; }

ProjectionOutcome MeanConstrainedProjector::project(const DistPtr& q) const {
    if (!q) fail(ErrorKind::input, "projection of a null distribution");
    if (q->dimension() != 1) fail(ErrorKind::input, "mean-constrained projection needs a univariate distribution");
    const AxisHint hint = q->axis_hint(0);
    const double a = hint.continuous ? hint.lower : hint.support.front();
    const double b = hint.continuous ? hint.upper : hint.support.back();
    if (!(a < mu_ && mu_ < b))
        fail(ErrorKind::input, "constraint mean " + format_number(mu_) + " must lie inside the support (" +
                                   format_number(a) + ", " + format_number(b) + ")");

    const IntegrationDomain dom = q->domain(quad_);
    const Rule1D& rule = dom.axis(0);
    std::vector<double> t(rule.size()), wq(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double u = rule.nodes[i];
        t[i] = u - mu_;
        wq[i] = rule.weights[i] * q->density(std::span<const double>(&u, 1));
    }
    // G(xi) = int (u - mu) / (1 - xi (u - mu)) dQ, strictly increasing in xi.
    auto G = [&](double xi) {
        Accumulator acc;
        for (std::size_t i = 0; i < t.size(); ++i) acc.add(wq[i] * t[i] / (1.0 - xi * t[i]));
        return acc.value();
    };

    ProjectionMeta meta;
    double xi = 0.0;
    if (G(0.0) != 0.0) {
        const double lo = 1.0 / (a - mu_), hi = 1.0 / (b - mu_);
        const double delta = 1e-9 * (hi - lo);
        RootBracket br{lo + delta, hi - delta, root_tol_};
        try {
            xi = find_root(G, br);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::bracket) throw;
            constexpr int n = 1000;
            std::vector<double> roots;
            double prev_x = br.lo, prev_g = G(prev_x);
            for (int i = 1; i <= n; ++i) {
                const double x = br.lo + (br.hi - br.lo) * i / n;
                const double g = G(x);
                if ((prev_g > 0.0) != (g > 0.0) || g == 0.0)
                    roots.push_back(find_root(G, RootBracket{prev_x, x, root_tol_}));
                prev_x = x;
                prev_g = g;
            }
            if (roots.empty())
                fail(ErrorKind::infeasible, "no multiplier solves the mean constraint for " + q->descriptor());
            if (roots.size() > 1) meta.note = "dense scan found " + std::to_string(roots.size()) + " sign changes";
            xi = *std::min_element(roots.begin(), roots.end(),
                                   [](double x, double y) { return std::abs(x) < std::abs(y); });
        }
    }

    Accumulator mass;
    for (std::size_t i = 0; i < t.size(); ++i) mass.add(wq[i] / (1.0 - xi * t[i]));
    meta.xi = xi;
    meta.constraint_residual = std::abs(G(xi));
    ProjectionOutcome out;
    out.projected = std::make_shared<MeanTilted>(q, mu_, xi);
    out.meta = meta;
    out.feasible = meta.constraint_residual <= 1e-9 && std::abs(mass.value() - 1.0) <= 1e-9;
    return out;
}

// --- Markov -----------------------------------------------------------------

MarkovProjectedLaw::MarkovProjectedLaw(DistPtr q, QuadratureSettings quad)
    : Distribution(q->space()),
      q_(std::move(q)),
      layout_(LongitudinalLayout::from_dimension(q_->dimension())),
      domain_(q_->domain(quad)) {}

bool MarkovProjectedLaw::markov_position(std::size_t k, std::span<const double> u) const {
    if (k % 2 != 0 || k < 4) return false;
    for (std::size_t r = 0; r < k / 2; ++r)
        if (u[LongitudinalLayout::treatment(r)] != 1.0) return false;
    return true;
}

double MarkovProjectedLaw::marginal(const Distribution& d, std::size_t last, std::size_t j,
                                    std::span<const double> u) const {
    Point x(u.begin(), u.end());
    std::vector<std::size_t> axes;
    for (std::size_t i = 0; i + 1 < j; ++i) axes.push_back(LongitudinalLayout::covariate(i));
    return integrate_axes(domain_, axes, x, [&](std::span<const double> v) { return d.prefix_density(last, v); });
}

double MarkovProjectedLaw::marginal_delta(std::size_t last, std::size_t j, std::span<const double> u,
                                          const Distribution& base) const {
    Point x(u.begin(), u.end());
    std::vector<std::size_t> axes;
    for (std::size_t i = 0; i + 1 < j; ++i) axes.push_back(LongitudinalLayout::covariate(i));
    return integrate_axes(domain_, axes, x,
                          [&](std::span<const double> v) { return q_->prefix_delta(last, v, base); });
}

double MarkovProjectedLaw::conditional(std::size_t k, std::span<const double> u) const {
    if (!markov_position(k, u)) return q_->conditional(k, u);
    const std::size_t j = k / 2;
    const double den = marginal(*q_, k - 1, j, u);
    if (!(den > 0.0))
        fail(ErrorKind::positivity, "treated history (l_" + std::to_string(j - 1) + " = " + format_number(u[k - 2]) +
                                        ", all treatments 1) has zero probability");
    return marginal(*q_, k, j, u) / den;
}

double MarkovProjectedLaw::prefix_density(std::size_t last, std::span<const double> u) const {
    double p = 1.0;
    for (std::size_t k = 0; k <= last && k < dimension(); ++k) {
        p *= conditional(k, u);
        if (p == 0.0) return 0.0;
    }
    return p;
}

double MarkovProjectedLaw::conditional_delta(std::size_t k, std::span<const double> u,
                                             const Distribution& base) const {
    if (&base == this) return 0.0;
    if (!markov_position(k, u)) return q_->conditional_delta(k, u, base);
    const std::size_t j = k / 2;
    const double den_q = marginal(*q_, k - 1, j, u);
    const double den_p = marginal(base, k - 1, j, u);
    if (!(den_q > 0.0) || !(den_p > 0.0)) return conditional(k, u) - base.conditional(k, u);
    const double num_p = marginal(base, k, j, u);
    const double d_num = marginal_delta(k, j, u, base);
    const double d_den = marginal_delta(k - 1, j, u, base);
    // base's own departure from its Markov kernel; zero when base is Markov
    const double base_gap = num_p / den_p - base.conditional(k, u);
    return (d_num * den_p - num_p * d_den) / (den_q * den_p) + base_gap;
}

double MarkovProjectedLaw::prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const {
    if (&base == this) return 0.0;
    const std::size_t n = std::min(last + 1, dimension());
    std::vector<double> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = conditional(k, u);
        b[k] = base.conditional(k, u);
    }
    // prod a - prod b = sum_k (a_k - b_k) prod_{i<k} a_i prod_{i>k} b_i
    std::vector<double> suffix(n + 1, 1.0);
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * b[k];
    Accumulator acc;
    double head = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (head != 0.0 && suffix[k + 1] != 0.0) acc.add(conditional_delta(k, u, base) * head * suffix[k + 1]);
        head *= a[k];
    }
    return acc.value();
}

std::string MarkovProjectedLaw::descriptor() const { return "markov_projected(" + q_->descriptor() + ")"; }

namespace {

std::vector<double> probe_values(const AxisHint& h, int count) {
    if (!h.continuous) return h.support;
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(h.lower + (h.upper - h.lower) * (0.2 + 0.6 * i / (count - 1)));
    return v;
}

}  // namespace

double markov_residual(const Distribution& d, const QuadratureSettings&) {
    const LongitudinalLayout layout = LongitudinalLayout::from_dimension(d.dimension());
    double worst = 0.0;
    for (std::size_t j = 2; j <= layout.K + 1; ++j) {
        const std::size_t k = LongitudinalLayout::covariate(j);
        const auto prev_vals = probe_values(d.axis_hint(k - 2), 7);
        const auto cur_vals = probe_values(d.axis_hint(k), 7);
        std::vector<std::vector<double>> early;
        for (std::size_t i = 0; i + 1 < j; ++i)
            early.push_back(probe_values(d.axis_hint(LongitudinalLayout::covariate(i)), 3));
        Point u(d.dimension(), 0.0);
        for (std::size_t r = 0; r < j; ++r) u[LongitudinalLayout::treatment(r)] = 1.0;
        for (double lp : prev_vals) {
            for (double lc : cur_vals) {
                u[k - 2] = lp;
                u[k] = lc;
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                std::vector<std::size_t> idx(early.size(), 0);
                while (true) {
                    for (std::size_t i = 0; i < early.size(); ++i) u[LongitudinalLayout::covariate(i)] = early[i][idx[i]];
                    if (d.prefix_density(k - 1, u) > 0.0) {
                        const double c = d.conditional(k, u);
                        lo = std::min(lo, c);
                        hi = std::max(hi, c);
                    }
                    std::size_t i = 0;
                    for (; i < early.size(); ++i) {
                        if (++idx[i] < early[i].size()) break;
                        idx[i] = 0;
                    }
                    if (i == early.size()) break;
                }
                if (hi >= lo) worst = std::max(worst, hi - lo);
            }
        }
    }
    return worst;
}

ProjectionOutcome MarkovProjector::project(const DistPtr& q) const {
    if (!q) fail(ErrorKind::input, "projection of a null distribution");
    auto law = std::make_shared<MarkovProjectedLaw>(q, quad_);
    ProjectionOutcome out;
    out.projected = law;
    out.meta.constraint_residual = markov_residual(*law, quad_);
    out.feasible = out.meta.constraint_residual <= 1e-8;
    return out;
}

// --- tilt -------------------------------------------------------------------

TiltedDistribution::TiltedDistribution(DistPtr reference, std::vector<Expression> basis, Eigen::VectorXd beta,
                                       double log_z)
    : Distribution(reference->space()),
      reference_(std::move(reference)),
      basis_(std::move(basis)),
      beta_(std::move(beta)),
      log_z_(log_z) {}

double TiltedDistribution::exponent(std::span<const double> u) const {
    double s = -log_z_;
    for (std::size_t j = 0; j < basis_.size(); ++j) s += beta_[static_cast<Eigen::Index>(j)] * basis_[j](u);
    return s;
}

double TiltedDistribution::joint_density(std::span<const double> u) const {
    const double p = reference_->density(u);
    return p == 0.0 ? 0.0 : p * std::exp(exponent(u));
}

double TiltedDistribution::prefix_delta(std::size_t last, std::span<const double> u, const Distribution& base) const {
    if (&base == this) return 0.0;
    if (&base == reference_.get() && last + 1 == dimension()) {
        const double p = reference_->density(u);
        return p == 0.0 ? 0.0 : p * std::expm1(exponent(u));
    }
    return Distribution::prefix_delta(last, u, base);
}

std::string TiltedDistribution::descriptor() const {
    std::string s = "tilted(" + reference_->descriptor() + ",beta=(";
    for (Eigen::Index i = 0; i < beta_.size(); ++i) s += (i ? "," : "") + format_number(beta_[i]);
    return s + "))";
}

TiltedProjector::TiltedProjector(std::vector<Expression> basis, DistPtr reference, QuadratureSettings quad,
                                 NewtonOptions newton)
    : basis_(std::move(basis)), reference_(std::move(reference)), quad_(quad), newton_(newton) {
    if (basis_.empty()) fail(ErrorKind::input, "tilt family needs at least one basis function");
    if (!reference_) fail(ErrorKind::input, "tilt family needs a reference distribution");
    for (const auto& h : basis_)
        if (h.arity() > reference_->dimension())
            fail(ErrorKind::input, "basis function '" + h.text() + "' reads coordinates beyond the sample space");
    quad_.validate();
}

std::string TiltedProjector::descriptor() const {
    std::string s = "tilted(basis=";
    for (std::size_t j = 0; j < basis_.size(); ++j) s += (j ? ";" : "") + basis_[j].text();
    return s + ")";
}

namespace {

// Basis values, reference weights and Q - P weights at every node.
struct TiltNodes {
    Eigen::MatrixXd h;  // m x n
    Eigen::VectorXd wp;  // weight * p
    Eigen::VectorXd wdq;  // weight * (q - p)

    Eigen::VectorXd g0() const { return h * wdq; }
    Eigen::VectorXd e0() const { return h * wp; }
    // log int p exp(beta . h), formed around log 1 = 0
    double log_z(const Eigen::VectorXd& beta) const {
        const Eigen::VectorXd s = h.transpose() * beta;
        Accumulator acc;
        for (Eigen::Index i = 0; i < s.size(); ++i) acc.add(wp[i] * std::expm1(s[i]));
        return std::log1p(acc.value());
    }
};

TiltNodes tilt_nodes(const std::vector<Expression>& basis, const Distribution& ref, const Distribution& q,
                     const QuadratureSettings& quad) {
    const IntegrationDomain dom = joint_domain({&ref, &q}, quad);
    std::vector<double> hv, wp, wdq;
    Point u(dom.dimension(), 0.0);
    std::vector<std::size_t> idx(dom.dimension(), 0);
    std::size_t n = 0;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            u[i] = dom.axis(i).nodes[idx[i]];
            w *= dom.axis(i).weights[idx[i]];
        }
        const double p = ref.density(u);
        const double dq = q.delta(u, ref);
        if (p != 0.0 || dq != 0.0) {
            for (const auto& e : basis) hv.push_back(e(u));
            wp.push_back(w * p);
            wdq.push_back(w * dq);
            ++n;
        }
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < dom.axis(i).size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    TiltNodes t;
    const auto m = static_cast<Eigen::Index>(basis.size());
    t.h = Eigen::Map<Eigen::MatrixXd>(hv.data(), m, static_cast<Eigen::Index>(n));
    t.wp = Eigen::Map<Eigen::VectorXd>(wp.data(), static_cast<Eigen::Index>(n));
    t.wdq = Eigen::Map<Eigen::VectorXd>(wdq.data(), static_cast<Eigen::Index>(n));
    return t;
}

}  // namespace

double TiltedProjector::objective(const DistPtr& q, const Eigen::VectorXd& beta) const {
    const TiltNodes t = tilt_nodes(basis_, *reference_, *q, quad_);
    return beta.dot(t.g0() + t.e0()) - t.log_z(beta);
}

ProjectionOutcome TiltedProjector::project(const DistPtr& q) const {
    if (!q) fail(ErrorKind::input, "projection of a null distribution");
    if (q->dimension() != reference_->dimension()) fail(ErrorKind::input, "tilt projection: dimension mismatch");
    const TiltNodes t = tilt_nodes(basis_, *reference_, *q, quad_);
    const auto m = static_cast<Eigen::Index>(basis_.size());
    const Eigen::VectorXd g0 = t.g0(), e0 = t.e0();
    const Eigen::VectorXd target = g0 + e0;

    auto objective = [&](const Eigen::VectorXd& beta) { return beta.dot(target) - t.log_z(beta); };
    // int h dQ - E_beta h, with both sides measured from E_0 h
    auto gradient = [&](const Eigen::VectorXd& beta) -> Eigen::VectorXd {
        const double lz = t.log_z(beta);
        const Eigen::VectorXd s = t.h.transpose() * beta;
        Eigen::VectorXd shift = Eigen::VectorXd::Zero(m);
        for (Eigen::Index i = 0; i < s.size(); ++i) shift += t.wp[i] * std::expm1(s[i] - lz) * t.h.col(i);
        return g0 - shift;
    };
    auto hessian = [&](const Eigen::VectorXd& beta) -> Eigen::MatrixXd {
        const double lz = t.log_z(beta);
        const Eigen::VectorXd s = t.h.transpose() * beta;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
        for (Eigen::Index i = 0; i < s.size(); ++i) mean += t.wp[i] * std::exp(s[i] - lz) * t.h.col(i);
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            const Eigen::VectorXd c = t.h.col(i) - mean;
            cov += t.wp[i] * std::exp(s[i] - lz) * c * c.transpose();
        }
        return -cov;
    };

    NewtonResult res;
    res.argmax = Eigen::VectorXd::Zero(m);
    if (g0.norm() != 0.0) {
        NewtonOptions opt = newton_;
        // The gradient is O(epsilon); converge relative to its starting size
        // but not below what the node sums can resolve.
        const double floor = 1e-15 * (1.0 + e0.cwiseAbs().maxCoeff());
        opt.tol = std::min(newton_.tol, std::max(1e-10 * g0.norm(), floor));
        res = newton_maximize(objective, gradient, hessian, Eigen::VectorXd::Zero(m), opt);
    }
    ProjectionOutcome out;
    out.projected = std::make_shared<TiltedDistribution>(reference_, basis_, res.argmax, t.log_z(res.argmax));
    out.meta.beta.assign(res.argmax.data(), res.argmax.data() + m);
    out.meta.iterations = res.iterations;
    out.meta.gradient_norm = res.gradient_norm;
    out.meta.constraint_residual = res.gradient_norm;
    out.feasible = true;
    return out;
}

}  // namespace eif
