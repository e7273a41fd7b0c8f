#include "eif/oracles.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "eif/error.hpp"
#include "eif/format.hpp"
#include "eif/functionals.hpp"
#include "eif/projection.hpp"

namespace eif {

double centering(const std::function<double(std::span<const double>)>& phi, const Distribution& p,
                 const QuadratureSettings& quad) {
    return std::abs(integrate(
        [&](std::span<const double> u) {
            const double w = p.density(u);
            return w == 0.0 ? 0.0 : phi(u) * w;
        },
        p.domain(quad)));
}

// --- average density value --------------------------------------------------

double np_avg_density_eif(const Distribution& p, std::span<const double> u, const QuadratureSettings& quad) {
    return 2.0 * (p.density(u) - AvgDensity(quad).evaluate(p));
}

OracleEif np_avg_density_oracle(const DistPtr& p, const QuadratureSettings& quad) {
    const double psi = AvgDensity(quad).evaluate(*p);
    OracleEif o;
    o.fn = [p, psi](std::span<const double> u) { return 2.0 * (p->density(u) - psi); };
    o.centered_residual = centering(o.fn, *p, quad);
    o.provenance = "average density value, nonparametric: 2{p(u) - Psi(P)}";
    return o;
}

double constrained_avg_density_coefficient(const Distribution& p, double mu, const QuadratureSettings& quad) {
    if (p.dimension() != 1) fail(ErrorKind::input, "mean-constrained oracle needs a univariate distribution");
    const IntegrationDomain dom = p.domain(quad);
    const double num = integrate(
        [&](std::span<const double> u) {
            const double v = p.density(u);
            return (u[0] - mu) * v * v;
        },
        dom);
    const double var = integrate([&](std::span<const double> u) { return (u[0] - mu) * (u[0] - mu) * p.density(u); },
                                 dom);
    if (!(var > 0.0)) fail(ErrorKind::numerical, "degenerate distribution: zero variance about mu");
    return num / var;
}

double constrained_avg_density_eif(const Distribution& p, double mu, std::span<const double> u,
                                   const QuadratureSettings& quad) {
    const double c = constrained_avg_density_coefficient(p, mu, quad);
    return 2.0 * (p.density(u) - AvgDensity(quad).evaluate(p) - c * (u[0] - mu));
}

OracleEif constrained_avg_density_oracle(const DistPtr& p, double mu, const QuadratureSettings& quad) {
    const double psi = AvgDensity(quad).evaluate(*p);
    const double c = constrained_avg_density_coefficient(*p, mu, quad);
    OracleEif o;
    o.fn = [p, psi, c, mu](std::span<const double> u) { return 2.0 * (p->density(u) - psi - c * (u[0] - mu)); };
    o.centered_residual = centering(o.fn, *p, quad);
    o.provenance = "average density value under a mean constraint: 2{p(u) - Psi(P) - c(u - mu)}";
    return o;
}

OracleEif project_onto_one_constraint(const OracleEif& phi_np, const OracleEif& phi_tilde, const DistPtr& p,
                                      const QuadratureSettings& quad) {
    const IntegrationDomain dom = p->domain(quad);
    const double cross = integrate([&](std::span<const double> u) { return phi_np(u) * phi_tilde(u) * p->density(u); },
                                   dom);
    const double norm2 = integrate(
        [&](std::span<const double> u) {
            const double t = phi_tilde(u);
            return t * t * p->density(u);
        },
        dom);
    if (!(norm2 > 1e-300)) fail(ErrorKind::numerical, "constraint direction has zero norm under P");
    const double coef = cross / norm2;
    OracleEif o;
    o.fn = [np = phi_np.fn, t = phi_tilde.fn, coef](std::span<const double> u) { return np(u) - coef * t(u); };
    o.centered_residual = centering(o.fn, *p, quad);
    o.provenance = "projection of (" + phi_np.provenance + ") orthogonal to one constraint direction";
    return o;
}

OracleEif tilted_tangent_oracle(const OracleEif& phi_np, const std::vector<Expression>& basis, const DistPtr& p,
                                const QuadratureSettings& quad) {
    if (basis.empty()) fail(ErrorKind::input, "tilt tangent needs at least one basis function");
    const IntegrationDomain dom = p->domain(quad);
    const auto m = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXd mean(m);
    for (Eigen::Index j = 0; j < m; ++j)
        mean[j] = integrate([&](std::span<const double> u) { return basis[j](u) * p->density(u); }, dom);
    Eigen::MatrixXd gram(m, m);
    Eigen::VectorXd cross(m);
    for (Eigen::Index a = 0; a < m; ++a) {
        cross[a] = integrate(
            [&](std::span<const double> u) { return phi_np(u) * (basis[a](u) - mean[a]) * p->density(u); }, dom);
        for (Eigen::Index b = 0; b <= a; ++b)
            gram(a, b) = gram(b, a) = integrate(
                [&](std::span<const double> u) {
                    return (basis[a](u) - mean[a]) * (basis[b](u) - mean[b]) * p->density(u);
                },
                dom);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 1e-300).all())
        fail(ErrorKind::numerical, "tilt basis is degenerate under P");
    const Eigen::VectorXd coef = ldlt.solve(cross);
    OracleEif o;
    o.fn = [basis, mean, coef, np = phi_np.fn](std::span<const double> u) {
        double s = 0.0;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            s += coef[jj] * (basis[j](u) - mean[jj]);
        }
        return s;
    };
    o.centered_residual = centering(o.fn, *p, quad);
    o.provenance = "projection of (" + phi_np.provenance + ") onto the tilt scores";
    return o;
}

// --- G-computation ----------------------------------------------------------

namespace {

// m_j, g_r and T_j for one law, memoized by history.
class GcompTables {
public:
    GcompTables(DistPtr p, const QuadratureSettings& quad)
        : p_(std::move(p)),
          layout_(LongitudinalLayout::from_dimension(p_->dimension())),
          domain_(p_->domain(quad)),
          m_cache_(layout_.K + 1) {
        psi_ = GcompMean(quad).evaluate(*p_);
    }

    const LongitudinalLayout& layout() const { return layout_; }
    double psi() const { return psi_; }

    // Treatment probability P(A_r = 1 | history of x, earlier treatments 1).
    double g(std::size_t r, std::span<const double> x) const {
        Point u = treated(x, r + 1);
        const double v = p_->conditional(LongitudinalLayout::treatment(r), u);
        if (!(v > 0.0))
            fail(ErrorKind::positivity, "P(A_" + std::to_string(r) + " = 1 | history " +
                                            format_point(std::span<const double>(u).first(2 * r + 1)) + ") = 0");
        return v;
    }

    double m(std::size_t j, std::span<const double> x) const {
        if (j == layout_.K + 1) return x[layout_.outcome()];
        const std::size_t last = LongitudinalLayout::covariate(j);
        std::vector<double> key(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(last + 1));
        for (std::size_t r = 0; r < j; ++r) key[LongitudinalLayout::treatment(r)] = 1.0;
        {
            std::lock_guard lock(mutex_);
            auto it = m_cache_[j].find(key);
            if (it != m_cache_[j].end()) return it->second;
        }
        Point u = treated(x, j + 1);
        g(j, u);  // positivity
        const std::size_t next = LongitudinalLayout::covariate(j + 1);
        const std::size_t axes[] = {next};
        const double v = integrate_axes(domain_, axes, u, [&](std::span<const double> w) {
            const double c = p_->conditional(next, w);
            return c == 0.0 ? 0.0 : c * m(j + 1, w);
        });
        std::lock_guard lock(mutex_);
        m_cache_[j].emplace(std::move(key), v);
        return v;
    }

    // E[1 / prod_{r<j} g_r | L_j, L_{j-1}, treatments 1] at x.
    double T(std::size_t j, std::span<const double> x) const {
        if (j == 1) return 1.0 / g(0, x);
        Point u = treated(x, j);
        std::vector<double> key{u[LongitudinalLayout::covariate(j - 1)], u[LongitudinalLayout::covariate(j)],
                                static_cast<double>(j)};
        {
            std::lock_guard lock(mutex_);
            auto it = t_cache_.find(key);
            if (it != t_cache_.end()) return it->second;
        }
        std::vector<std::size_t> axes;
        for (std::size_t i = 0; i + 1 < j; ++i) axes.push_back(LongitudinalLayout::covariate(i));
        const std::size_t last = LongitudinalLayout::covariate(j);
        Accumulator num, den;
        Point v = u;
        visit(axes, 0, v, 1.0, [&](std::span<const double> w, double weight) {
            const double post = p_->prefix_density(last, w);
            if (post == 0.0) return;
            double inv = 1.0;
            for (std::size_t r = 0; r < j; ++r) inv /= g(r, w);
            num.add(weight * post * inv);
            den.add(weight * post);
        });
        if (!(den.value() > 0.0))
            fail(ErrorKind::positivity, "treated history with L_" + std::to_string(j) + " = " +
                                            format_number(u[last]) + " has zero probability");
        const double t = num.value() / den.value();
        std::lock_guard lock(mutex_);
        t_cache_.emplace(std::move(key), t);
        return t;
    }

private:
    template <class F>
    void visit(const std::vector<std::size_t>& axes, std::size_t i, Point& u, double weight, F&& f) const {
        if (i == axes.size()) {
            f(std::span<const double>(u), weight);
            return;
        }
        const Rule1D& rule = domain_.axis(axes[i]);
        for (std::size_t n = 0; n < rule.size(); ++n) {
            u[axes[i]] = rule.nodes[n];
            visit(axes, i + 1, u, weight * rule.weights[n], f);
        }
    }

    // Copy of x with treatments a_0..a_{count-1} set to 1.
    static Point treated(std::span<const double> x, std::size_t count) {
        Point u(x.begin(), x.end());
        for (std::size_t r = 0; r < count && LongitudinalLayout::treatment(r) < u.size(); ++r)
            u[LongitudinalLayout::treatment(r)] = 1.0;
        return u;
    }

    DistPtr p_;
    LongitudinalLayout layout_;
    IntegrationDomain domain_;
    double psi_ = 0.0;
    mutable std::mutex mutex_;
    mutable std::vector<std::map<std::vector<double>, double>> m_cache_;
    mutable std::map<std::vector<double>, double> t_cache_;
};

std::vector<double> np_terms(const GcompTables& t, std::span<const double> x) {
    const auto& L = t.layout();
    std::vector<double> terms{t.m(0, x) - t.psi()};
    double weight = 1.0;
    for (std::size_t j = 1; j <= L.K + 1; ++j) {
        if (x[LongitudinalLayout::treatment(j - 1)] != 1.0) weight = 0.0;
        if (weight == 0.0) {
            terms.push_back(0.0);
            continue;
        }
        weight /= t.g(j - 1, x);
        terms.push_back(weight * (t.m(j, x) - t.m(j - 1, x)));
    }
    return terms;
}

std::vector<double> markov_terms(const GcompTables& t, std::span<const double> x) {
    const auto& L = t.layout();
    std::vector<double> terms{t.m(0, x) - t.psi()};
    bool treated = true;
    for (std::size_t j = 1; j <= L.K + 1; ++j) {
        treated = treated && x[LongitudinalLayout::treatment(j - 1)] == 1.0;
        terms.push_back(treated ? t.T(j, x) * (t.m(j, x) - t.m(j - 1, x)) : 0.0);
    }
    return terms;
}

double sum(const std::vector<double>& v) {
    Accumulator a;
    for (double x : v) a.add(x);
    return a.value();
}

void require_markov(const Distribution& p, const QuadratureSettings& quad) {
    const double r = markov_residual(p, quad);
    if (r > 1e-8)
        fail(ErrorKind::model_membership, p.descriptor() + " is not in the Markov model (conditional-independence residual " +
                                              format_number(r) + ")");
}

}  // namespace

std::vector<double> gcomp_np_terms(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad) {
    p->space().check_dimension(x);
    return np_terms(GcompTables(p, quad), x);
}

std::vector<double> gcomp_markov_terms(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad) {
    p->space().check_dimension(x);
    require_markov(*p, quad);
    return markov_terms(GcompTables(p, quad), x);
}

double gcomp_np_eif(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad) {
    return sum(gcomp_np_terms(p, x, quad));
}

double gcomp_markov_eif(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad) {
    return sum(gcomp_markov_terms(p, x, quad));
}

OracleEif gcomp_np_oracle(const DistPtr& p, const QuadratureSettings& quad) {
    auto tables = std::make_shared<GcompTables>(p, quad);
    OracleEif o;
    o.fn = [tables](std::span<const double> x) { return sum(np_terms(*tables, x)); };
    o.centered_residual = centering(o.fn, *p, quad);
    o.provenance = "G-computation mean, nonparametric: inverse-probability-weighted stage residuals";
    return o;
}

OracleEif gcomp_markov_oracle(const DistPtr& p, const QuadratureSettings& quad) {
    require_markov(*p, quad);
    auto tables = std::make_shared<GcompTables>(p, quad);
    OracleEif o;
    o.fn = [tables](std::span<const double> x) { return sum(markov_terms(*tables, x)); };
    o.centered_residual = centering(o.fn, *p, quad);
    o.provenance = "G-computation mean, Markov model: posterior-averaged inverse weights T_j";
    return o;
}

}  // namespace eif
