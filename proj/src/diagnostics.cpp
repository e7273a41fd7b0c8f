#include "eif/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "eif/csv.hpp"
#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

double remainder(const Functional& psi, const OracleEif& phi_p1, const Distribution& p1, const Distribution& p,
                 const QuadratureSettings& quad) {
    if (&p1 == &p) return integrate([&](std::span<const double> u) { return phi_p1(u) * p.density(u); },
                                    p.domain(quad));
    const double diff = psi.difference(p1, p);
    const IntegrationDomain dom = joint_domain({&p1, &p}, quad);
    const double shift = integrate(
        [&](std::span<const double> u) {
            const double d = p1.delta(u, p);
            return d == 0.0 ? 0.0 : phi_p1(u) * d;
        },
        dom);
    const double centered = integrate(
        [&](std::span<const double> u) {
            const double w = p1.density(u);
            return w == 0.0 ? 0.0 : phi_p1(u) * w;
        },
        dom);
    return diff - shift + centered;
}

double check_a1(const OracleEif& phi_star, const Distribution& p_eps_lambda, const QuadratureSettings& quad) {
    return centering(phi_star.fn, p_eps_lambda, quad);
}

BoundReport theorem4_bound_probe(const std::vector<RemainderPoint>& remainders,
                                 const std::vector<double>& r_lambda_values, int d1) {
    if (remainders.size() != r_lambda_values.size())
        fail(ErrorKind::input, "one r(lambda) value is needed per remainder");
    BoundReport rep;
    double mx = 0.0, mn = INFINITY;
    for (std::size_t i = 0; i < remainders.size(); ++i) {
        const auto& r = remainders[i];
        BoundRow row;
        row.epsilon = r.epsilon;
        row.lambda = r.lambda;
        row.R = r.R;
        row.r_lambda = r_lambda_values[i];
        const double scale = r.epsilon * (1.0 + row.r_lambda);
        row.ratio = r.R / (scale * scale);
        row.guideline_ok = r.epsilon <= epsilon_guideline(r.lambda, d1);
        if (!row.guideline_ok) ++rep.outside_guideline;
        const double a = std::abs(row.ratio);
        mx = std::max(mx, a);
        if (a > 0.0) mn = std::min(mn, a);
        rep.rows.push_back(row);
    }
    rep.max_ratio = mx;
    rep.min_ratio = std::isfinite(mn) ? mn : 0.0;
    rep.spread = rep.min_ratio > 0.0 ? mx / rep.min_ratio : 0.0;
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::input, "slope needs at least two matched points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0)) fail(ErrorKind::numerical, "log-log slope needs nonzero values");
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (!(den > 0.0)) fail(ErrorKind::numerical, "log-log slope needs distinct x values");
    return (n * sxy - sx * sy) / den;
}

std::vector<SweepRow> remainder_sweep(const DistPtr& p, const ModelProjector& model, const Functional& psi,
                                      const Point& x, const std::vector<double>& epsilons,
                                      const std::vector<double>& lambdas, const OracleFactory& oracle,
                                      KernelWidth width, const QuadratureSettings& quad) {
    std::vector<SweepRow> rows;
    for (double lambda : lambdas) {
        const auto bump = make_bump(x, lambda, p, width);
        const double r = r_lambda(*p, *bump, quad);
        for (double eps : epsilons) {
            const PerturbationPath path = PerturbationPath::at_point(p, x, eps, lambda, width);
            const ProjectionOutcome proj = model.project(path.realized);
            const OracleEif phi_star = oracle(proj.projected);
            SweepRow row;
            row.epsilon = eps;
            row.lambda = lambda;
            row.r_lambda = r;
            row.R = remainder(psi, phi_star, *proj.projected, *p, quad);
            row.R_over_eps = row.R / eps;
            const double scale = eps * (1.0 + r);
            row.R_over_bound = row.R / (scale * scale);
            row.a1_residual = check_a1(phi_star, *path.realized, quad);
            rows.push_back(row);
        }
    }
    return rows;
}

ConditionReport condition_report(const std::vector<SweepRow>& rows, double lambda, int d1) {
    ConditionReport rep;
    std::vector<double> xs, ys, rs;
    for (const auto& row : rows) {
        if (row.lambda != lambda) continue;
        rs.push_back(row.r_lambda);
        rep.r_lambda = row.r_lambda;
        rep.a1_residual = std::max(rep.a1_residual, row.a1_residual);
        rep.remainder_values.push_back({row.epsilon, row.lambda, row.R});
        if (row.epsilon > epsilon_guideline(lambda, d1)) rep.guideline_ok = false;
        xs.push_back(row.epsilon);
        ys.push_back(row.R);
    }
    rep.loglog_slope_in_eps = xs.size() >= 2 ? loglog_slope(xs, ys) : std::nan("");
    rep.bound_ratio_spread = theorem4_bound_probe(rep.remainder_values, rs, d1).spread;
    return rep;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = csv_row({"epsilon", "lambda", "R", "R_over_eps", "R_over_bound", "a1_residual"});
    for (const auto& r : rows)
        out += csv_row({format_number(r.epsilon), format_number(r.lambda), format_number(r.R),
                        format_number(r.R_over_eps), format_number(r.R_over_bound), format_number(r.a1_residual)});
    return out;
}

std::string condition_csv(const std::vector<ConditionReport>& reports, const std::vector<double>& lambdas) {
    std::string out = csv_row(
        {"lambda", "r_lambda", "loglog_slope_in_eps", "max_a1_residual", "bound_ratio_spread", "guideline_ok"});
    for (std::size_t i = 0; i < reports.size(); ++i)
        out += csv_row({format_number(lambdas.at(i)), format_number(reports[i].r_lambda),
                        format_number(reports[i].loglog_slope_in_eps), format_number(reports[i].a1_residual),
                        format_number(reports[i].bound_ratio_spread), reports[i].guideline_ok ? "true" : "false"});
    return out;
}

}  // namespace eif
