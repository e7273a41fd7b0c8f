#include "eif/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "eif/csv.hpp"
#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

SecantEstimate secant_eif(const DistPtr& p, const ModelProjector& model, const Functional& psi, const Point& x,
                          double epsilon, double lambda, const SecantOptions& options) {
    if (!p) fail(ErrorKind::input, "secant_eif needs a distribution");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        fail(ErrorKind::input, "epsilon must lie in (0, 1), got " + format_number(epsilon));
    if (!(lambda > 0.0)) fail(ErrorKind::input, "lambda must be positive, got " + format_number(lambda));
    p->space().check_dimension(x);

    SecantEstimate s;
    s.epsilon = epsilon;
    s.lambda = lambda;
    const PerturbationPath path = PerturbationPath::at_point(p, x, epsilon, lambda, options.width);
    const ProjectionOutcome proj = model.project(path.realized);
    s.meta = proj.meta;
    s.feasible = proj.feasible;
    s.psi_base = options.psi_base ? *options.psi_base : psi.evaluate(*p);
    s.stable_path = options.stable && psi.has_difference();
    if (s.stable_path) {
        s.difference = psi.difference(*proj.projected, *p);
        s.psi_star = s.psi_base + s.difference;
    } else {
        s.psi_star = psi.evaluate(*proj.projected);
        s.difference = s.psi_star - s.psi_base;
    }
    s.value = s.difference / epsilon;
    if (!std::isfinite(s.value)) fail(ErrorKind::numerical, "non-finite secant value");
    if (!s.feasible) s.status = "infeasible projection (" + s.meta.summary() + ")";
    return s;
}

// --- derivative -------------------------------------------------------------

namespace {

struct HookRegistry {
    std::mutex mutex;
    std::map<std::pair<ModelKind, FunctionalKind>, DerivativeHook> hooks;

    HookRegistry() {
        // d/deps of int ((1-eps) p + eps h)^2 at 0 is 2 (int h p - Psi(P)).
        hooks[{ModelKind::nonparametric, FunctionalKind::avg_density}] =
            [](const DistPtr& p, const Functional& psi, const Point& x, double lambda, KernelWidth width) {
                const auto bump = make_bump(x, lambda, p, width);
                const double hp = integrate([&](std::span<const double> u) { return bump->density(u) * p->density(u); },
                                            bump->domain(QuadratureSettings{}));
                return 2.0 * (hp - psi.evaluate(*p));
            };
    }
};

HookRegistry& registry() {
    static HookRegistry r;
    return r;
}

}  // namespace

void register_derivative_hook(ModelKind model, FunctionalKind functional, DerivativeHook hook) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.hooks[{model, functional}] = std::move(hook);
}

std::optional<DerivativeHook> find_derivative_hook(ModelKind model, FunctionalKind functional) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.hooks.find({model, functional});
    if (it == r.hooks.end()) return std::nullopt;
    return it->second;
}

double derivative_eif(const DistPtr& p, const ModelProjector& model, const Functional& psi, const Point& x,
                      double lambda, DerivativeMode mode, const DerivativeOptions& options) {
    if (!p) fail(ErrorKind::input, "derivative_eif needs a distribution");
    if (!(lambda > 0.0)) fail(ErrorKind::input, "lambda must be positive");
    p->space().check_dimension(x);
    if (mode == DerivativeMode::closed_form) {
        const auto hook = find_derivative_hook(model.kind(), psi.kind());
        if (!hook)
            fail(ErrorKind::unsupported, std::string("no closed-form derivative for model ") + to_string(model.kind()) +
                                             " with functional " + to_string(psi.kind()));
        return (*hook)(p, psi, x, lambda, options.width);
    }
    const int d1 = static_cast<int>(p->space().continuous_count());
    const double eps0 = options.eps0 > 0.0 ? options.eps0 : epsilon_guideline(lambda, d1);
    const double psi_base = psi.evaluate(*p);
    SecantOptions so;
    so.width = options.width;
    so.psi_base = psi_base;
    return richardson_derivative(
        [&](double eps) { return secant_eif(p, model, psi, x, eps, lambda, so).difference; }, eps0, options.levels);
}

// --- grid -------------------------------------------------------------------

std::vector<double> default_grid_values() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}; }

namespace {

void check_descending(const std::vector<double>& v, const char* what) {
    if (v.empty()) fail(ErrorKind::input, std::string(what) + " list is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) fail(ErrorKind::input, std::string(what) + " values must be positive");
        if (i && !(v[i] < v[i - 1])) fail(ErrorKind::input, std::string(what) + " values must be strictly descending");
    }
}

}  // namespace

EifGrid build_grid(const DistPtr& p, const ModelProjector& model, const Functional& psi, const Point& x,
                   const std::vector<double>& epsilons, const std::vector<double>& lambdas,
                   const GridOptions& options) {
    check_descending(epsilons, "epsilon");
    check_descending(lambdas, "lambda");
    EifGrid grid;
    grid.epsilons = epsilons;
    grid.lambdas = lambdas;
    grid.digits = options.digits;
    grid.cells.resize(epsilons.size() * lambdas.size());

    SecantOptions so;
    so.width = options.width;
    so.psi_base = psi.evaluate(*p);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < grid.cells.size();) {
            const std::size_t li = c / epsilons.size(), ei = c % epsilons.size();
            SecantEstimate& cell = grid.cells[c];
            try {
                cell = secant_eif(p, model, psi, x, epsilons[ei], lambdas[li], so);
            } catch (const std::exception& e) {
                cell = SecantEstimate{};
                cell.epsilon = epsilons[ei];
                cell.lambda = lambdas[li];
                cell.psi_base = *so.psi_base;
                cell.value = cell.psi_star = cell.difference = std::nan("");
                cell.feasible = false;
                cell.status = std::string("error: ") + e.what();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.cells.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    const PlateauResult plateau = detect_plateau(grid, options.digits, options.min_cells);
    grid.plateau = plateau.region;
    grid.consensus = plateau.consensus;
    return grid;
}

double round_to(double v, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::round(v * scale) / scale;
}

PlateauResult detect_plateau(const EifGrid& grid, int digits, int min_cells) {
    const std::size_t nl = grid.lambdas.size(), ne = grid.epsilons.size();
    const double scale = std::pow(10.0, digits);
    std::vector<long long> key(nl * ne, 0);
    std::vector<bool> finite(nl * ne, false);
    for (std::size_t c = 0; c < nl * ne; ++c) {
        const double v = grid.cells.at(c).value;
        if (std::isfinite(v) && std::abs(v * scale) < 9e15) {
            finite[c] = true;
            key[c] = std::llround(v * scale);
        }
    }
    std::vector<int> label(nl * ne, -1);
    struct Region {
        std::vector<PlateauCell> cells;
        long long key;
        double mean_e, mean_l;  // mean indices
        bool reaches_smallest_eps;
    };
    std::vector<Region> regions;
    for (std::size_t start = 0; start < nl * ne; ++start) {
        if (!finite[start] || label[start] >= 0) continue;
        Region r{{}, key[start], 0.0, 0.0, false};
        std::vector<std::size_t> stack{start};
        label[start] = static_cast<int>(regions.size());
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            const std::size_t li = c / ne, ei = c % ne;
            r.cells.push_back({li, ei});
            r.mean_e += static_cast<double>(ei);
            r.mean_l += static_cast<double>(li);
            if (ei + 1 == ne) r.reaches_smallest_eps = true;
            auto visit = [&](std::size_t n) {
                if (finite[n] && label[n] < 0 && key[n] == r.key) {
                    label[n] = label[start];
                    stack.push_back(n);
                }
            };
            if (li > 0) visit(c - ne);
            if (li + 1 < nl) visit(c + ne);
            if (ei > 0) visit(c - 1);
            if (ei + 1 < ne) visit(c + 1);
        }
        r.mean_e /= static_cast<double>(r.cells.size());
        r.mean_l /= static_cast<double>(r.cells.size());
        regions.push_back(std::move(r));
    }
    const Region* best = nullptr;
    for (const auto& r : regions) {
        if (!r.reaches_smallest_eps || r.cells.size() < static_cast<std::size_t>(std::max(1, min_cells))) continue;
        if (!best) {
            best = &r;
            continue;
        }
        // larger epsilon index = smaller epsilon; smaller lambda index = larger lambda
        if (r.cells.size() != best->cells.size()) {
            if (r.cells.size() > best->cells.size()) best = &r;
        } else if (r.mean_e != best->mean_e) {
            if (r.mean_e > best->mean_e) best = &r;
        } else if (r.mean_l < best->mean_l) {
            best = &r;
        }
    }
    PlateauResult out;
    if (best) {
        out.region = best->cells;
        std::sort(out.region.begin(), out.region.end(), [](const PlateauCell& a, const PlateauCell& b) {
            return a.lambda_index != b.lambda_index ? a.lambda_index < b.lambda_index : a.epsilon_index < b.epsilon_index;
        });
        out.consensus = static_cast<double>(best->key) / scale;
    }
    return out;
}

// --- one step ---------------------------------------------------------------

OneStepResult one_step(const DistPtr& p_hat, const ModelProjector& model, const Functional& psi,
                       const std::vector<Point>& data, double epsilon, double lambda, KernelWidth width) {
    if (data.empty()) fail(ErrorKind::input, "one-step estimator needs at least one observation");
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::input, "epsilon must lie in (0, 1)");
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].size() != p_hat->dimension())
            fail(ErrorKind::input, "observation " + std::to_string(i) + " has " + std::to_string(data[i].size()) +
                                       " components, expected " + std::to_string(p_hat->dimension()));
    }
    const PerturbationPath path = PerturbationPath::over_data(p_hat, data, epsilon, lambda, width);
    const ProjectionOutcome proj = model.project(path.realized);
    OneStepResult r;
    r.n = data.size();
    r.epsilon = epsilon;
    r.lambda = lambda;
    r.plug_in = psi.evaluate(*p_hat);
    const double raw = psi.difference(*proj.projected, *p_hat) / epsilon;
    r.estimate = r.plug_in + raw;
    r.correction = r.estimate - r.plug_in;
    return r;
}

// --- CSV --------------------------------------------------------------------

std::string grid_csv(const EifGrid& grid) {
    std::string out = csv_row({"lambda", "epsilon", "value", "psi_star", "psi_base", "status"});
    for (std::size_t li = 0; li < grid.lambdas.size(); ++li)
        for (std::size_t ei = 0; ei < grid.epsilons.size(); ++ei) {
            const auto& c = grid.cell(li, ei);
            out += csv_row({format_number(c.lambda), format_number(c.epsilon), format_number(c.value),
                            format_number(c.psi_star), format_number(c.psi_base), c.status});
        }
    return out;
}

std::string plateau_csv(const EifGrid& grid) {
    std::string out = csv_row({"consensus", "digits", "cell_count", "eps_range", "lambda_range"});
    if (!grid.consensus) {
        out += csv_row({"", std::to_string(grid.digits), "0", "", ""});
        return out;
    }
    double emin = INFINITY, emax = -INFINITY, lmin = INFINITY, lmax = -INFINITY;
    for (const auto& c : grid.plateau) {
        emin = std::min(emin, grid.epsilons[c.epsilon_index]);
        emax = std::max(emax, grid.epsilons[c.epsilon_index]);
        lmin = std::min(lmin, grid.lambdas[c.lambda_index]);
        lmax = std::max(lmax, grid.lambdas[c.lambda_index]);
    }
    out += csv_row({format_number(*grid.consensus), std::to_string(grid.digits), std::to_string(grid.plateau.size()),
                    format_number(emin) + ":" + format_number(emax), format_number(lmin) + ":" + format_number(lmax)});
    return out;
}

std::string secant_csv(const SecantEstimate& s) {
    std::string out = csv_row({"lambda", "epsilon", "value", "psi_star", "psi_base", "status"});
    out += csv_row({format_number(s.lambda), format_number(s.epsilon), format_number(s.value),
                    format_number(s.psi_star), format_number(s.psi_base), s.status});
    return out;
}

std::string one_step_csv(const OneStepResult& r) {
    std::string out = csv_row({"n", "epsilon", "lambda", "plug_in", "correction", "estimate"});
    out += csv_row({std::to_string(r.n), format_number(r.epsilon), format_number(r.lambda), format_number(r.plug_in),
                    format_number(r.correction), format_number(r.estimate)});
    return out;
}

}  // namespace eif
