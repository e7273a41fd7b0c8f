#include <cmath>

#include "doctest.h"
#include "eif/diagnostics.hpp"
#include "eif/families.hpp"

using namespace eif;

TEST_CASE("log-log slope of a power law") {
    std::vector<double> x{1e-3, 1e-4, 1e-5}, y;
    for (double v : x) y.push_back(-3.0 * v * v);
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bound probe ratios and spread") {
    const std::vector<RemainderPoint> pts{{1e-3, 0.1, 2e-6}, {1e-4, 0.1, 2e-8}};
    const BoundReport r = theorem4_bound_probe(pts, {1.0, 1.0}, 1);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].ratio == doctest::Approx(2e-6 / (4e-6)));
    CHECK(r.spread == doctest::Approx(1.0));
    CHECK(r.outside_guideline == 1);
    const BoundReport z = theorem4_bound_probe({{1e-3, 0.1, 0.0}}, {1.0}, 1);
    CHECK(z.spread == 0.0);
}

TEST_CASE("remainder vanishes at P and A1 holds for a centered oracle") {
    const DistPtr p = beta_distribution(3, 5);
    const AvgDensity psi;
    const OracleEif phi = np_avg_density_oracle(p);
    CHECK(std::abs(remainder(psi, phi, *p, *p)) < 1e-12);
    CHECK(check_a1(phi, *p) < 1e-12);
}

TEST_CASE("nonparametric remainder is -int (p1 - p)^2") {
    const DistPtr p = beta_distribution(3, 5);
    const AvgDensity psi;
    const auto q = mix(p, make_bump({0.6}, 0.1, p), 1e-2);
    const OracleEif phi = np_avg_density_oracle(q);
    const double sq = integrate([&](std::span<const double> u) { return std::pow(q->delta(u, *p), 2); },
                                joint_domain({q.get(), p.get()}, {}));
    CHECK(remainder(psi, phi, *q, *p) == doctest::Approx(-sq).epsilon(1e-8));
}

TEST_CASE("sweep and summary csv") {
    const DistPtr p = beta_distribution(3, 5);
    const MeanConstrainedProjector model(0.375);
    const AvgDensity psi;
    const OracleFactory f = [](const DistPtr& d) { return constrained_avg_density_oracle(d, 0.375); };
    const auto rows = remainder_sweep(p, model, psi, {0.6}, {1e-3, 1e-4}, {1e-1}, f);
    REQUIRE(rows.size() == 2);
    const ConditionReport rep = condition_report(rows, 1e-1, 1);
    CHECK(rep.loglog_slope_in_eps == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.a1_residual < 1e-10);
    CHECK(sweep_csv(rows).rfind("epsilon,lambda,R,R_over_eps,R_over_bound,a1_residual\n", 0) == 0);
    CHECK(condition_csv({rep}, {1e-1}).find("lambda,r_lambda,loglog_slope_in_eps") == 0);
}
