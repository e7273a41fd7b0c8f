#include "config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif::cli {

namespace {

class KeyValues {
public:
    explicit KeyValues(std::string_view text) {
        std::size_t line_no = 0;
        for (const auto& raw : split(text, '\n')) {
            ++line_no;
            const std::string line = trim(raw);
            if (line.empty() || line.front() == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                fail(ErrorKind::config, "line " + std::to_string(line_no) + ": expected 'key = value'");
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key.empty()) fail(ErrorKind::config, "line " + std::to_string(line_no) + ": empty key");
            if (!values_.emplace(key, value).second)
                fail(ErrorKind::config, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) fail(ErrorKind::config, "missing key '" + key + "'");
        return *v;
    }

    void finish() const {
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) fail(ErrorKind::config, "key '" + k + "' is unknown or does not apply here");
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

double number(const std::string& text, const std::string& key) {
    try {
        return parse_number(text, key);
    } catch (const Error& e) {
        fail(ErrorKind::config, e.what());
    }
}

long long integer(const std::string& text, const std::string& key) {
    const double v = number(text, key);
    if (v != std::floor(v) || std::abs(v) > 9e15) fail(ErrorKind::config, "key '" + key + "' needs an integer");
    return static_cast<long long>(v);
}

std::vector<double> numbers(const std::string& text, const std::string& key) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& f : split(text, ';')) out.push_back(number(f, key));
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_shortest(v[i]);
    return s;
}

void check_expression(const std::string& text, const std::string& key) {
    try {
        Expression::parse(text);
    } catch (const Error& e) {
        fail(ErrorKind::config, "key '" + key + "': " + e.what());
    }
}

const std::set<std::string> factor_kinds{"beta",           "uniform",          "normal",  "bernoulli",
                                         "bernoulli_logit", "discrete_uniform", "discrete"};

FactorSpec read_factor(KeyValues& kv, const std::string& prefix, const std::string& kind) {
    FactorSpec f;
    f.kind = kind;
    if (!factor_kinds.count(kind)) fail(ErrorKind::config, "unknown distribution kind '" + kind + "' at " + prefix);
    auto key = [&](const char* name) { return prefix + name; };
    if (kind == "beta") {
        f.alpha = number(kv.require(key("alpha")), key("alpha"));
        f.beta = number(kv.require(key("beta")), key("beta"));
    } else if (kind == "uniform") {
        f.lower = number(kv.require(key("lower")), key("lower"));
        f.upper = number(kv.require(key("upper")), key("upper"));
    } else if (kind == "normal") {
        f.mean = kv.require(key("mean"));
        check_expression(f.mean, key("mean"));
        f.variance = number(kv.require(key("variance")), key("variance"));
    } else if (kind == "bernoulli") {
        f.p = number(kv.require(key("p")), key("p"));
    } else if (kind == "bernoulli_logit") {
        f.logit = kv.require(key("logit"));
        check_expression(f.logit, key("logit"));
    } else if (kind == "discrete_uniform") {
        f.support = numbers(kv.require(key("support")), key("support"));
    } else {
        f.support = numbers(kv.require(key("support")), key("support"));
        f.masses = numbers(kv.require(key("masses")), key("masses"));
    }
    return f;
}

void write_factor(std::ostringstream& os, const std::string& prefix, const FactorSpec& f, bool with_kind) {
    if (with_kind) os << prefix << "kind = " << f.kind << "\n";
    if (f.kind == "beta") {
        os << prefix << "alpha = " << format_shortest(f.alpha) << "\n" << prefix << "beta = " << format_shortest(f.beta) << "\n";
    } else if (f.kind == "uniform") {
        os << prefix << "lower = " << format_shortest(f.lower) << "\n" << prefix << "upper = " << format_shortest(f.upper) << "\n";
    } else if (f.kind == "normal") {
        os << prefix << "mean = " << f.mean << "\n" << prefix << "variance = " << format_shortest(f.variance) << "\n";
    } else if (f.kind == "bernoulli") {
        os << prefix << "p = " << format_shortest(f.p) << "\n";
    } else if (f.kind == "bernoulli_logit") {
        os << prefix << "logit = " << f.logit << "\n";
    } else if (f.kind == "discrete_uniform") {
        os << prefix << "support = " << join(f.support) << "\n";
    } else {
        os << prefix << "support = " << join(f.support) << "\n" << prefix << "masses = " << join(f.masses) << "\n";
    }
}

FactorPtr make_factor(const FactorSpec& f) {
    if (f.kind == "beta") return std::make_shared<BetaFactor>(f.alpha, f.beta);
    if (f.kind == "uniform") return std::make_shared<UniformFactor>(f.lower, f.upper);
    if (f.kind == "normal") return std::make_shared<NormalFactor>(Expression::parse(f.mean), f.variance);
    if (f.kind == "bernoulli") return std::make_shared<BernoulliFactor>(f.p);
    if (f.kind == "bernoulli_logit") return std::make_shared<LogitBernoulliFactor>(Expression::parse(f.logit));
    if (f.kind == "discrete_uniform") return std::make_shared<DiscreteFactor>(f.support);
    return std::make_shared<DiscreteFactor>(f.support, f.masses);
}

Point parse_point(const std::string& text, const std::string& key) {
    Point p = numbers(text, key);
    if (p.empty()) fail(ErrorKind::config, "key '" + key + "' needs at least one coordinate");
    return p;
}

void check_grid(const std::vector<double>& v, const std::string& key) {
    if (v.empty()) fail(ErrorKind::config, "key '" + key + "' needs at least one value");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) fail(ErrorKind::config, "key '" + key + "' values must be positive");
        if (i && !(v[i] < v[i - 1])) fail(ErrorKind::config, "key '" + key + "' values must be strictly descending");
    }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    KeyValues kv(text);
    RunConfig cfg;

    cfg.family = kv.require("distribution.family");
    if (cfg.family == "sequential") {
        const long long n = integer(kv.require("distribution.factors"), "distribution.factors");
        if (n < 1) fail(ErrorKind::config, "distribution.factors must be at least 1");
        for (long long i = 0; i < n; ++i) {
            const std::string prefix = "distribution.factor." + std::to_string(i) + ".";
            cfg.factors.push_back(read_factor(kv, prefix, kv.require(prefix + "kind")));
        }
    } else if (cfg.family != "example2") {
        cfg.single = read_factor(kv, "distribution.", cfg.family);
    }

    if (auto m = kv.take("model.kind")) {
        cfg.model = *m;
        if (cfg.model == "mean_constrained") {
            cfg.mu = number(kv.require("model.mu"), "model.mu");
        } else if (cfg.model == "tilted") {
            for (const auto& e : split(kv.require("model.basis"), ';')) {
                check_expression(e, "model.basis");
                cfg.basis.push_back(e);
            }
        } else if (cfg.model != "nonparametric" && cfg.model != "markov") {
            fail(ErrorKind::config, "unknown model.kind '" + cfg.model + "'");
        }
    }
    if (auto f = kv.take("functional.kind")) {
        cfg.functional = *f;
        if (cfg.functional == "mean") {
            if (auto c = kv.take("functional.component")) {
                const long long v = integer(*c, "functional.component");
                if (v < 0) fail(ErrorKind::config, "functional.component must be non-negative");
                cfg.component = static_cast<std::size_t>(v);
            }
        } else if (cfg.functional == "constant") {
            cfg.constant = number(kv.require("functional.value"), "functional.value");
        } else if (cfg.functional != "avg_density" && cfg.functional != "gcomp_mean") {
            fail(ErrorKind::config, "unknown functional.kind '" + cfg.functional + "'");
        }
    }

    if (auto v = kv.take("point.x")) cfg.x = parse_point(*v, "point.x");
    if (auto v = kv.take("perturbation.epsilon")) cfg.epsilon = number(*v, "perturbation.epsilon");
    if (auto v = kv.take("perturbation.lambda")) cfg.lambda = number(*v, "perturbation.lambda");
    if (auto v = kv.take("perturbation.kernel")) {
        try {
            cfg.kernel = parse_kernel_width(*v);
        } catch (const Error& e) {
            fail(ErrorKind::config, e.what());
        }
    }
    if (auto v = kv.take("grid.epsilons")) cfg.epsilons = numbers(*v, "grid.epsilons");
    if (auto v = kv.take("grid.lambdas")) cfg.lambdas = numbers(*v, "grid.lambdas");
    check_grid(cfg.epsilons, "grid.epsilons");
    check_grid(cfg.lambdas, "grid.lambdas");
    if (auto v = kv.take("grid.digits")) cfg.digits = static_cast<int>(integer(*v, "grid.digits"));
    if (auto v = kv.take("grid.min_cells")) cfg.min_cells = static_cast<int>(integer(*v, "grid.min_cells"));
    if (auto v = kv.take("grid.threads")) {
        const long long t = integer(*v, "grid.threads");
        if (t < 0) fail(ErrorKind::config, "grid.threads must be non-negative");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (auto v = kv.take("derivative.mode")) {
        cfg.derivative_mode = *v;
        if (*v != "richardson" && *v != "closed_form")
            fail(ErrorKind::config, "derivative.mode must be richardson or closed_form");
    }
    if (auto v = kv.take("derivative.levels")) cfg.levels = static_cast<int>(integer(*v, "derivative.levels"));
    if (auto v = kv.take("derivative.eps0")) cfg.eps0 = number(*v, "derivative.eps0");
    if (auto v = kv.take("quadrature.panels")) cfg.quad.panels = static_cast<int>(integer(*v, "quadrature.panels"));
    if (auto v = kv.take("quadrature.nodes"))
        cfg.quad.nodes_per_panel = static_cast<int>(integer(*v, "quadrature.nodes"));
    if (auto v = kv.take("quadrature.split")) {
        if (*v != "true" && *v != "false") fail(ErrorKind::config, "quadrature.split must be true or false");
        cfg.quad.split_at_breakpoints = *v == "true";
    }
    try {
        cfg.quad.validate();
    } catch (const Error& e) {
        fail(ErrorKind::config, e.what());
    }
    if (auto v = kv.take("root.tol")) cfg.root_tol = number(*v, "root.tol");
    if (auto v = kv.take("newton.tol")) cfg.newton.tol = number(*v, "newton.tol");
    if (auto v = kv.take("newton.max_iter")) cfg.newton.max_iter = static_cast<int>(integer(*v, "newton.max_iter"));
    if (auto v = kv.take("diagnose.epsilons")) cfg.diagnose_epsilons = numbers(*v, "diagnose.epsilons");
    if (auto v = kv.take("diagnose.lambdas")) cfg.diagnose_lambdas = numbers(*v, "diagnose.lambdas");
    check_grid(cfg.diagnose_epsilons, "diagnose.epsilons");
    check_grid(cfg.diagnose_lambdas, "diagnose.lambdas");
    if (auto v = kv.take("validate.points"))
        for (const auto& pt : split(*v, '|')) cfg.validate_points.push_back(parse_point(pt, "validate.points"));
    if (auto v = kv.take("demo.n")) {
        const long long n = integer(*v, "demo.n");
        if (n < 1) fail(ErrorKind::config, "demo.n must be at least 1");
        cfg.demo_n = static_cast<std::size_t>(n);
    }
    if (auto v = kv.take("seed")) {
        const long long s = integer(*v, "seed");
        if (s < 0) fail(ErrorKind::config, "seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    kv.finish();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::config, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string print_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "distribution.family = " << cfg.family << "\n";
    if (cfg.family == "sequential") {
        os << "distribution.factors = " << cfg.factors.size() << "\n";
        for (std::size_t i = 0; i < cfg.factors.size(); ++i)
            write_factor(os, "distribution.factor." + std::to_string(i) + ".", cfg.factors[i], true);
    } else if (cfg.family != "example2") {
        write_factor(os, "distribution.", cfg.single, false);
    }
    if (!cfg.model.empty()) {
        os << "model.kind = " << cfg.model << "\n";
        if (cfg.model == "mean_constrained") os << "model.mu = " << format_shortest(*cfg.mu) << "\n";
        if (cfg.model == "tilted") {
            os << "model.basis = ";
            for (std::size_t i = 0; i < cfg.basis.size(); ++i) os << (i ? ";" : "") << cfg.basis[i];
            os << "\n";
        }
    }
    if (!cfg.functional.empty()) {
        os << "functional.kind = " << cfg.functional << "\n";
        if (cfg.functional == "mean") os << "functional.component = " << cfg.component << "\n";
        if (cfg.functional == "constant") os << "functional.value = " << format_shortest(cfg.constant) << "\n";
    }
    if (!cfg.x.empty()) os << "point.x = " << join(cfg.x) << "\n";
    if (cfg.epsilon) os << "perturbation.epsilon = " << format_shortest(*cfg.epsilon) << "\n";
    if (cfg.lambda) os << "perturbation.lambda = " << format_shortest(*cfg.lambda) << "\n";
    os << "perturbation.kernel = " << to_string(cfg.kernel) << "\n";
    os << "grid.epsilons = " << join(cfg.epsilons) << "\n";
    os << "grid.lambdas = " << join(cfg.lambdas) << "\n";
    os << "grid.digits = " << cfg.digits << "\n";
    os << "grid.min_cells = " << cfg.min_cells << "\n";
    os << "grid.threads = " << cfg.threads << "\n";
    if (!cfg.derivative_mode.empty()) os << "derivative.mode = " << cfg.derivative_mode << "\n";
    os << "derivative.levels = " << cfg.levels << "\n";
    os << "derivative.eps0 = " << format_shortest(cfg.eps0) << "\n";
    os << "quadrature.panels = " << cfg.quad.panels << "\n";
    os << "quadrature.nodes = " << cfg.quad.nodes_per_panel << "\n";
    os << "quadrature.split = " << (cfg.quad.split_at_breakpoints ? "true" : "false") << "\n";
    os << "root.tol = " << format_shortest(cfg.root_tol) << "\n";
    os << "newton.tol = " << format_shortest(cfg.newton.tol) << "\n";
    os << "newton.max_iter = " << cfg.newton.max_iter << "\n";
    os << "diagnose.epsilons = " << join(cfg.diagnose_epsilons) << "\n";
    os << "diagnose.lambdas = " << join(cfg.diagnose_lambdas) << "\n";
    if (!cfg.validate_points.empty()) {
        os << "validate.points = ";
        for (std::size_t i = 0; i < cfg.validate_points.size(); ++i)
            os << (i ? " | " : "") << join(cfg.validate_points[i]);
        os << "\n";
    }
    os << "demo.n = " << cfg.demo_n << "\n";
    if (cfg.seed) os << "seed = " << *cfg.seed << "\n";
    return os.str();
}

DistPtr build_distribution(const RunConfig& cfg) {
    try {
        if (cfg.family == "example2") return markov_example_law();
        if (cfg.family == "sequential") {
            std::vector<FactorPtr> factors;
            for (const auto& f : cfg.factors) factors.push_back(make_factor(f));
            return std::make_shared<FactorizedLaw>(std::move(factors));
        }
        return std::make_shared<FactorizedLaw>(std::vector<FactorPtr>{make_factor(cfg.single)});
    } catch (const Error& e) {
        fail(ErrorKind::config, std::string("distribution: ") + e.what());
    }
}

ProjectorPtr build_model(const RunConfig& cfg, const DistPtr& p) {
    if (cfg.model.empty()) fail(ErrorKind::config, "missing key 'model.kind'");
    if (cfg.model == "nonparametric") return std::make_shared<NonparametricProjector>();
    if (cfg.model == "mean_constrained") return std::make_shared<MeanConstrainedProjector>(*cfg.mu, cfg.quad, cfg.root_tol);
    if (cfg.model == "markov") return std::make_shared<MarkovProjector>(cfg.quad);
    std::vector<Expression> basis;
    for (const auto& b : cfg.basis) basis.push_back(Expression::parse(b));
    return std::make_shared<TiltedProjector>(std::move(basis), p, cfg.quad, cfg.newton);
}

FunctionalPtr build_functional(const RunConfig& cfg) {
    if (cfg.functional.empty()) fail(ErrorKind::config, "missing key 'functional.kind'");
    if (cfg.functional == "avg_density") return std::make_shared<AvgDensity>(cfg.quad);
    if (cfg.functional == "gcomp_mean") return std::make_shared<GcompMean>(cfg.quad);
    if (cfg.functional == "mean") return std::make_shared<MeanFunctional>(cfg.component, cfg.quad);
    return std::make_shared<ConstantFunctional>(cfg.constant);
}

std::optional<OracleFactory> oracle_for(const RunConfig& cfg) {
    const QuadratureSettings quad = cfg.quad;
    if (cfg.functional == "avg_density" && cfg.model == "nonparametric")
        return OracleFactory([quad](const DistPtr& p) { return np_avg_density_oracle(p, quad); });
    if (cfg.functional == "avg_density" && cfg.model == "mean_constrained") {
        const double mu = *cfg.mu;
        return OracleFactory([quad, mu](const DistPtr& p) { return constrained_avg_density_oracle(p, mu, quad); });
    }
    if (cfg.functional == "gcomp_mean" && cfg.model == "markov")
        return OracleFactory([quad](const DistPtr& p) { return gcomp_markov_oracle(p, quad); });
    if (cfg.functional == "gcomp_mean" && cfg.model == "nonparametric")
        return OracleFactory([quad](const DistPtr& p) { return gcomp_np_oracle(p, quad); });
    if (cfg.functional == "mean" && cfg.model == "tilted") {
        std::vector<Expression> basis;
        for (const auto& b : cfg.basis) basis.push_back(Expression::parse(b));
        const std::size_t k = cfg.component;
        return OracleFactory([quad, basis, k](const DistPtr& p) {
            const double mean = MeanFunctional(k, quad).evaluate(*p);
            OracleEif np;
            np.fn = [k, mean](std::span<const double> u) { return u[k] - mean; };
            np.provenance = "mean, nonparametric: u_k - E[X_k]";
            return tilted_tangent_oracle(np, basis, p, quad);
        });
    }
    return std::nullopt;
}

}  // namespace eif::cli
