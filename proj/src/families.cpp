#include "eif/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

AxisHint ConditionalFactor::hint(std::span<const AxisHint>) const {
    AxisHint h;
    const ComponentSpec c = component();
    if (const auto* cont = std::get_if<Continuous>(&c)) {
        h.lower = cont->lower;
        h.upper = cont->upper;
    } else {
        h.continuous = false;
        h.support = std::get<Discrete>(c).support;
    }
    return h;
}

// --- Beta -------------------------------------------------------------------

BetaFactor::BetaFactor(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) fail(ErrorKind::input, "beta parameters must be positive");
    log_norm_ = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta);
}

double BetaFactor::density(double u, std::span<const double>) const {
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0 && alpha_ == 1.0) return std::exp(log_norm_);
        if (u == 1.0 && beta_ == 1.0) return std::exp(log_norm_);
        return 0.0;
    }
    return std::exp(log_norm_ + (alpha_ - 1.0) * std::log(u) + (beta_ - 1.0) * std::log1p(-u));
}

double BetaFactor::sample(std::span<const double>, Xorshift64Star& rng) const { return rng.beta(alpha_, beta_); }

std::string BetaFactor::descriptor() const {
    return "beta(" + format_number(alpha_) + "," + format_number(beta_) + ")";
}

// --- Uniform ----------------------------------------------------------------

UniformFactor::UniformFactor(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
        fail(ErrorKind::input, "uniform bounds must be finite with lower < upper");
}

double UniformFactor::density(double u, std::span<const double>) const {
    return (u >= lower_ && u <= upper_) ? 1.0 / (upper_ - lower_) : 0.0;
}

double UniformFactor::sample(std::span<const double>, Xorshift64Star& rng) const {
    return lower_ + (upper_ - lower_) * rng.uniform();
}

std::string UniformFactor::descriptor() const {
    return "uniform(" + format_number(lower_) + "," + format_number(upper_) + ")";
}

// --- Normal -----------------------------------------------------------------

NormalFactor::NormalFactor(Expression mean, double variance)
    : mean_(std::move(mean)), variance_(variance), sd_(std::sqrt(variance)) {
    if (!(variance > 0.0) || !std::isfinite(variance)) fail(ErrorKind::input, "normal variance must be positive");
}

ComponentSpec NormalFactor::component() const {
    return Continuous{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

double NormalFactor::density(double v, std::span<const double> history) const {
    const double z = (v - mean_(history)) / sd_;
    return std::exp(-0.5 * z * z) / (sd_ * std::sqrt(2.0 * std::numbers::pi));
}

double NormalFactor::sample(std::span<const double> history, Xorshift64Star& rng) const {
    return mean_(history) + sd_ * rng.normal();
}

std::string NormalFactor::descriptor() const {
    return "normal(" + mean_.text() + "," + format_number(variance_) + ")";
}

AxisHint NormalFactor::hint(std::span<const AxisHint> history) const {
    const std::size_t n = std::min(mean_.arity(), history.size());
    if (mean_.arity() > history.size())
        fail(ErrorKind::input, "normal mean '" + mean_.text() + "' reads coordinates beyond its history");
    std::vector<std::vector<double>> corners(n);
    for (std::size_t i = 0; i < n; ++i)
        corners[i] = history[i].continuous ? std::vector<double>{history[i].lower, history[i].upper}
                                           : history[i].support;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    Point x(n, 0.0);
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) x[i] = corners[i][idx[i]];
        const double m = mean_(x);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (++idx[i] < corners[i].size()) break;
            idx[i] = 0;
        }
        if (i == n) break;
    }
    AxisHint h;
    h.lower = lo - 8.0 * sd_;
    h.upper = hi + 8.0 * sd_;
    return h;
}

// --- Bernoulli --------------------------------------------------------------

LogitBernoulliFactor::LogitBernoulliFactor(Expression logit) : logit_(std::move(logit)) {}

double LogitBernoulliFactor::density(double v, std::span<const double> history) const {
    if (v == 1.0) return expit(logit_(history));
    if (v == 0.0) return expit(-logit_(history));
    return 0.0;
}

double LogitBernoulliFactor::sample(std::span<const double> history, Xorshift64Star& rng) const {
    return rng.uniform() < success(history) ? 1.0 : 0.0;
}

std::string LogitBernoulliFactor::descriptor() const { return "bernoulli_logit(" + logit_.text() + ")"; }

BernoulliFactor::BernoulliFactor(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::input, "bernoulli probability must lie in [0, 1]");
}

double BernoulliFactor::density(double v, std::span<const double>) const {
    return v == 1.0 ? p_ : (v == 0.0 ? 1.0 - p_ : 0.0);
}

double BernoulliFactor::sample(std::span<const double>, Xorshift64Star& rng) const {
    return rng.uniform() < p_ ? 1.0 : 0.0;
}

std::string BernoulliFactor::descriptor() const { return "bernoulli(" + format_number(p_) + ")"; }

DiscreteFactor::DiscreteFactor(std::vector<double> support, std::vector<double> masses)
    : support_(std::move(support)), masses_(std::move(masses)), uniform_(masses_.empty()) {
    if (support_.empty()) fail(ErrorKind::input, "discrete support must be non-empty");
    if (uniform_) masses_.assign(support_.size(), 1.0 / static_cast<double>(support_.size()));
    if (masses_.size() != support_.size()) fail(ErrorKind::input, "discrete masses must match the support");
    std::vector<std::size_t> order(support_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return support_[a] < support_[b]; });
    std::vector<double> s, m;
    double total = 0.0;
    for (auto i : order) {
        if (!s.empty() && s.back() == support_[i]) fail(ErrorKind::input, "duplicate discrete support point");
        if (!(masses_[i] >= 0.0)) fail(ErrorKind::input, "discrete masses must be non-negative");
        s.push_back(support_[i]);
        m.push_back(masses_[i]);
        total += masses_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::input, "discrete masses must sum to 1");
    support_ = std::move(s);
    masses_ = std::move(m);
}

double DiscreteFactor::density(double v, std::span<const double>) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), v);
    if (it == support_.end() || *it != v) return 0.0;
    return masses_[static_cast<std::size_t>(it - support_.begin())];
}

double DiscreteFactor::sample(std::span<const double>, Xorshift64Star& rng) const {
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        cum += masses_[i];
        if (u < cum) return support_[i];
    }
    return support_.back();
}

std::string DiscreteFactor::descriptor() const {
    std::string s = uniform_ ? "discrete_uniform{" : "discrete{";
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (i) s += ",";
        s += format_number(support_[i]);
        if (!uniform_) s += ":" + format_number(masses_[i]);
    }
    return s + "}";
}

// --- FactorizedLaw ----------------------------------------------------------

namespace {

SampleSpace space_of(const std::vector<FactorPtr>& factors) {
    std::vector<ComponentSpec> comps;
    for (const auto& f : factors) {
        if (!f) fail(ErrorKind::input, "null factor");
        comps.push_back(f->component());
    }
    return SampleSpace(std::move(comps));
}

}  // namespace

FactorizedLaw::FactorizedLaw(std::vector<FactorPtr> factors)
    : Distribution(space_of(factors)), factors_(std::move(factors)) {
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (factors_[k]->arity() > k)
            fail(ErrorKind::input, "factor " + std::to_string(k) + " (" + factors_[k]->descriptor() +
                                       ") reads coordinates at or after its own position");
        hints_.push_back(factors_[k]->hint(std::span<const AxisHint>(hints_).first(k)));
    }
    for (const auto& f : factors_) {
        for (auto [comp, loc] : f->kinks()) {
            auto& h = hints_.at(comp);
            if (h.continuous && loc > h.lower && loc < h.upper) h.breakpoints.push_back(loc);
        }
    }
    for (auto& h : hints_) {
        std::sort(h.breakpoints.begin(), h.breakpoints.end());
        h.breakpoints.erase(std::unique(h.breakpoints.begin(), h.breakpoints.end()), h.breakpoints.end());
    }
}

double FactorizedLaw::prefix_density(std::size_t last, std::span<const double> u) const {
    double p = 1.0;
    for (std::size_t k = 0; k <= last && k < factors_.size(); ++k) {
        p *= factors_[k]->density(u[k], u.first(k));
        if (p == 0.0) return 0.0;
    }
    return p;
}

double FactorizedLaw::conditional(std::size_t k, std::span<const double> u) const {
    return factors_.at(k)->density(u[k], u.first(k));
}

std::string FactorizedLaw::descriptor() const {
    if (factors_.size() == 1) return factors_[0]->descriptor();
    std::string s = "sequential[";
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (k) s += "; ";
        s += factors_[k]->descriptor();
    }
    return s + "]";
}

Point FactorizedLaw::sample(Xorshift64Star& rng) const {
    Point x(factors_.size(), 0.0);
    for (std::size_t k = 0; k < factors_.size(); ++k)
        x[k] = factors_[k]->sample(std::span<const double>(x).first(k), rng);
    return x;
}

double sequential_joint(const FactorizedLaw& law, std::span<const double> u) { return law.density(u); }

DistPtr beta_distribution(double alpha, double beta) {
    return std::make_shared<FactorizedLaw>(std::vector<FactorPtr>{std::make_shared<BetaFactor>(alpha, beta)});
}

DistPtr uniform_distribution(double lower, double upper) {
    return std::make_shared<FactorizedLaw>(std::vector<FactorPtr>{std::make_shared<UniformFactor>(lower, upper)});
}

DistPtr normal_distribution(double mean, double variance) {
    return std::make_shared<FactorizedLaw>(
        std::vector<FactorPtr>{std::make_shared<NormalFactor>(Expression::constant(mean), variance)});
}

DistPtr bernoulli_distribution(double p) {
    return std::make_shared<FactorizedLaw>(std::vector<FactorPtr>{std::make_shared<BernoulliFactor>(p)});
}

DistPtr discrete_uniform(std::vector<double> support) {
    return std::make_shared<FactorizedLaw>(
        std::vector<FactorPtr>{std::make_shared<DiscreteFactor>(std::move(support))});
}

std::shared_ptr<const FactorizedLaw> markov_example_law() {
    return std::make_shared<FactorizedLaw>(std::vector<FactorPtr>{
        std::make_shared<DiscreteFactor>(std::vector<double>{0, 1, 2, 3, 4}),
        std::make_shared<LogitBernoulliFactor>(Expression::parse("-1 + 0.5*x0")),
        std::make_shared<NormalFactor>(Expression::parse("3*x0 - 3*x1"), 4.0),
        std::make_shared<LogitBernoulliFactor>(Expression::parse("-5 + c10(x2) + x1 + 0.5*x0")),
        std::make_shared<LogitBernoulliFactor>(Expression::parse("-1 + 0.5*c10(x2) - 0.5*x3 - x1")),
    });
}

}  // namespace eif
