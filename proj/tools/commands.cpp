#include "commands.hpp"

#include <ostream>

#include "eif/csv.hpp"
#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif::cli {

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        body();
        return 0;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
    if (path)
        write_file_atomic(*path, content);
    else
        out << content;
}

double require_epsilon(const RunConfig& cfg) {
    if (!cfg.epsilon) fail(ErrorKind::config, "missing key 'perturbation.epsilon'");
    return *cfg.epsilon;
}

double require_lambda(const RunConfig& cfg) {
    if (!cfg.lambda) fail(ErrorKind::config, "missing key 'perturbation.lambda'");
    return *cfg.lambda;
}

const Point& require_x(const RunConfig& cfg) {
    if (cfg.x.empty()) fail(ErrorKind::config, "missing key 'point.x'");
    return cfg.x;
}

}  // namespace

std::string sibling_path(const std::string& path, const std::string& suffix) {
    const std::string ext = ".csv";
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return path.substr(0, path.size() - ext.size()) + suffix;
    return path + suffix;
}

int run_point(const Invocation& inv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig& cfg = inv.config;
        const DistPtr p = build_distribution(cfg);
        const ProjectorPtr model = build_model(cfg, p);
        const FunctionalPtr psi = build_functional(cfg);
        SecantOptions so;
        so.width = cfg.kernel;
        const SecantEstimate s = secant_eif(p, *model, *psi, require_x(cfg), require_epsilon(cfg), require_lambda(cfg), so);
        emit(inv.out, secant_csv(s), out);
    });
}

int run_grid(const Invocation& inv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig& cfg = inv.config;
        const DistPtr p = build_distribution(cfg);
        const ProjectorPtr model = build_model(cfg, p);
        const FunctionalPtr psi = build_functional(cfg);
        GridOptions go;
        go.digits = cfg.digits;
        go.min_cells = cfg.min_cells;
        go.width = cfg.kernel;
        go.threads = cfg.threads;
        const EifGrid grid = build_grid(p, *model, *psi, require_x(cfg), cfg.epsilons, cfg.lambdas, go);
        if (inv.out) {
            write_file_atomic(*inv.out, grid_csv(grid));
            write_file_atomic(sibling_path(*inv.out, ".plateau.csv"), plateau_csv(grid));
        } else {
            out << grid_csv(grid) << "\n" << plateau_csv(grid);
        }
    });
}

int run_onestep(const Invocation& inv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig& cfg = inv.config;
        if (!inv.data) fail(ErrorKind::config, "onestep needs --data PATH");
        const DistPtr p = build_distribution(cfg);
        const ProjectorPtr model = build_model(cfg, p);
        const FunctionalPtr psi = build_functional(cfg);
        const auto rows = read_numeric_csv(*inv.data);
        if (rows.empty()) fail(ErrorKind::input, *inv.data + ": no observations");
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].size() != p->dimension())
                fail(ErrorKind::input, *inv.data + ": observation " + std::to_string(i + 1) + " has " +
                                           std::to_string(rows[i].size()) + " columns, expected " +
                                           std::to_string(p->dimension()));
        const OneStepResult r = one_step(p, *model, *psi, rows, require_epsilon(cfg), require_lambda(cfg), cfg.kernel);
        emit(inv.out, one_step_csv(r), out);
        err << "n = " << r.n << "\n";
    });
}

int run_validate(const Invocation& inv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig& cfg = inv.config;
        const DistPtr p = build_distribution(cfg);
        const ProjectorPtr model = build_model(cfg, p);
        const FunctionalPtr psi = build_functional(cfg);
        const auto factory = oracle_for(cfg);
        if (!factory)
            fail(ErrorKind::config, "no oracle is available for model '" + cfg.model + "' with functional '" +
                                        cfg.functional + "'");
        const OracleEif oracle = (*factory)(p);
        std::vector<Point> points = cfg.validate_points;
        if (points.empty()) points.push_back(require_x(cfg));
        SecantOptions so;
        so.width = cfg.kernel;
        so.psi_base = psi->evaluate(*p);
        std::string csv = csv_row({"point", "engine_value", "oracle_value", "rel_error"});
        DerivativeOptions dopt;
        dopt.width = cfg.kernel;
        dopt.eps0 = cfg.eps0;
        dopt.levels = cfg.levels;
        for (const auto& x : points) {
            double engine = 0.0;
            if (cfg.derivative_mode.empty())
                engine = secant_eif(p, *model, *psi, x, require_epsilon(cfg), require_lambda(cfg), so).value;
            else
                engine = derivative_eif(p, *model, *psi, x, require_lambda(cfg),
                                        cfg.derivative_mode == "closed_form" ? DerivativeMode::closed_form
                                                                             : DerivativeMode::richardson,
                                        dopt);
            const double truth = oracle(x);
            const double rel = std::abs(engine - truth) / std::max(std::abs(truth), 1e-300);
            csv += csv_row({format_point(x), format_number(engine), format_number(truth), format_number(rel)});
        }
        emit(inv.out, csv, out);
    });
}

int run_diagnose(const Invocation& inv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig& cfg = inv.config;
        const DistPtr p = build_distribution(cfg);
        const ProjectorPtr model = build_model(cfg, p);
        const FunctionalPtr psi = build_functional(cfg);
        const auto factory = oracle_for(cfg);
        if (!factory)
            fail(ErrorKind::config, "no oracle is available for model '" + cfg.model + "' with functional '" +
                                        cfg.functional + "'");
        const auto rows = remainder_sweep(p, *model, *psi, require_x(cfg), cfg.diagnose_epsilons,
                                          cfg.diagnose_lambdas, *factory, cfg.kernel, cfg.quad);
        const int d1 = static_cast<int>(p->space().continuous_count());
        std::vector<ConditionReport> reports;
        for (double l : cfg.diagnose_lambdas) reports.push_back(condition_report(rows, l, d1));
        if (inv.out) {
            write_file_atomic(*inv.out, sweep_csv(rows));
            write_file_atomic(sibling_path(*inv.out, ".summary.csv"), condition_csv(reports, cfg.diagnose_lambdas));
        } else {
            out << sweep_csv(rows) << "\n" << condition_csv(reports, cfg.diagnose_lambdas);
        }
    });
}

int make_demo_data(const Invocation& inv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig& cfg = inv.config;
        if (!cfg.seed) fail(ErrorKind::config, "demo-data needs a seed (--seed N or key 'seed')");
        const DistPtr p = build_distribution(cfg);
        const auto* law = dynamic_cast<const FactorizedLaw*>(p.get());
        if (!law) fail(ErrorKind::config, "demo-data needs a factorized distribution");
        Xorshift64Star rng(*cfg.seed);
        std::vector<std::string> header;
        for (std::size_t k = 0; k < p->dimension(); ++k) header.push_back("x" + std::to_string(k));
        std::string csv = csv_row(header);
        for (std::size_t i = 0; i < cfg.demo_n; ++i) {
            const Point x = law->sample(rng);
            std::vector<std::string> fields;
            for (double v : x) fields.push_back(format_number(v));
            csv += csv_row(fields);
        }
        emit(inv.out, csv, out);
    });
}

}  // namespace eif::cli
