#include <cmath>

#include "doctest.h"
#include "eif/families.hpp"
#include "eif/functionals.hpp"
#include "eif/perturbation.hpp"
#include "eif/projection.hpp"
#include "toy.hpp"

using namespace eif;

namespace {

double mean_of(const Distribution& d) {
    return integrate([&](std::span<const double> u) { return u[0] * d.density(u); }, d.domain({}));
}

}  // namespace

TEST_CASE("nonparametric projection is the identity") {
    const DistPtr p = beta_distribution(3, 5);
    const auto out = NonparametricProjector().project(p);
    CHECK(out.projected == p);
    CHECK(out.feasible);
}

TEST_CASE("mean-constrained projection restores the mean") {
    const DistPtr p = beta_distribution(3, 5);
    const MeanConstrainedProjector proj(0.375);
    const auto path = PerturbationPath::at_point(p, {0.6}, 1e-2, 0.01);
    CHECK(mean_of(*path.realized) == doctest::Approx(0.375 + 1e-2 * (0.6 - 0.375)));
    const auto out = proj.project(path.realized);
    CHECK(out.feasible);
    CHECK(std::abs(mean_of(*out.projected) - 0.375) < 1e-12);
    CHECK(total_mass(*out.projected) == doctest::Approx(1.0).epsilon(1e-12));
    // the bump raised the mean, so the tilt 1 / (1 - xi (u - mu)) must lower it
    CHECK(out.meta.xi < 0.0);
    CHECK(out.meta.xi > -1.0);
}

TEST_CASE("mean-constrained projection of a member is itself") {
    const DistPtr p = beta_distribution(3, 5);
    const auto out = MeanConstrainedProjector(0.375).project(p);
    CHECK(std::abs(out.meta.xi) < 1e-12);
    const std::vector<double> u{0.3};
    CHECK(out.projected->density(u) == doctest::Approx(p->density(u)).epsilon(1e-12));
}

TEST_CASE("mean constraint outside the support is infeasible") {
    const DistPtr p = beta_distribution(3, 5);
    CHECK_THROWS_AS(MeanConstrainedProjector(1.5).project(p), Error);
    const auto coin = MeanConstrainedProjector(0.375).project(discrete_uniform({0, 1}));
    CHECK(coin.projected->density(std::vector<double>{1.0}) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("markov projection") {
    const auto law = markov_example_law();
    CHECK(markov_residual(*law) <= 1e-8);
    const Point x{0, 1, 2, 1, 1};
    const auto path = PerturbationPath::at_point(law, x, 1e-2, 0.5, KernelWidth::full);
    // the bump makes Y depend on L0 given L1 near l1 = 2
    Point other = x;
    other[0] = 1;
    CHECK(std::abs(path.realized->conditional(4, x) - path.realized->conditional(4, other)) > 1e-3);
    const auto out = MarkovProjector().project(path.realized);
    CHECK(out.feasible);
    CHECK(markov_residual(*out.projected) <= 1e-8);
    CHECK(out.projected->conditional(4, x) == doctest::Approx(out.projected->conditional(4, other)).epsilon(1e-12));
    CHECK(total_mass(*out.projected) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("markov projection matches the table projection on the discrete toy") {
    const auto law = toy::markov_toy();
    const DistPtr bump = make_bump({1, 1, 0, 1, 1}, 0.1, law);
    const auto q = mix(law, bump, 0.05);
    const auto out = MarkovProjector().project(q);
    const GcompMean psi;
    CHECK(psi.evaluate(*out.projected) == doctest::Approx(toy::psi_table(toy::table_of(*q), true)).epsilon(1e-13));
}

TEST_CASE("markov model membership") {
    CHECK(markov_residual(*toy::markov_toy()) <= 1e-12);
    CHECK(markov_residual(*toy::markov_toy(true)) > 1e-3);
    CHECK_THROWS_AS(MarkovProjector().project(beta_distribution(2, 2)), Error);
}

TEST_CASE("tilted projection matches moments") {
    const DistPtr p = discrete_uniform({0, 1, 2, 3, 4});
    const TiltedProjector proj({Expression::parse("x0")}, p);
    const auto q = mix(p, make_bump({4}, 0.1, p), 0.1);
    const auto out = proj.project(q);
    CHECK(out.feasible);
    CHECK(mean_of(*out.projected) == doctest::Approx(2.2).epsilon(1e-12));
    REQUIRE(out.meta.beta.size() == 1);
    // the stationarity condition is the first-order condition of the objective
    Eigen::VectorXd b(1), lo(1), hi(1);
    b << out.meta.beta[0];
    lo << out.meta.beta[0] - 1e-3;
    hi << out.meta.beta[0] + 1e-3;
    CHECK(proj.objective(q, b) >= proj.objective(q, lo));
    CHECK(proj.objective(q, b) >= proj.objective(q, hi));
    // P itself sits at beta = 0
    CHECK(std::abs(proj.project(p).meta.beta[0]) < 1e-12);
}

TEST_CASE("projections are idempotent") {
    const DistPtr p = beta_distribution(3, 5);
    const auto q = mix(p, make_bump({0.6}, 0.01, p), 1e-2);
    const MeanConstrainedProjector mean(0.375);
    const auto once = mean.project(q).projected;
    const auto twice = mean.project(once).projected;
    for (double u : {0.1, 0.3, 0.595, 0.6, 0.9}) {
        const std::vector<double> x{u};
        CHECK(twice->density(x) == doctest::Approx(once->density(x)).epsilon(1e-10));
    }

    const auto law = toy::markov_toy();
    const auto tq = mix(law, make_bump({0, 1, 1, 1, 1}, 0.1, law), 0.05);
    const MarkovProjector markov;
    const auto m1 = markov.project(tq).projected;
    const auto m2 = markov.project(m1).projected;
    for (const auto& c : toy::cells()) {
        const Point x = toy::to_point(c);
        CHECK(m2->density(x) == doctest::Approx(m1->density(x)).epsilon(1e-10));
    }
}

TEST_CASE("mean-constrained projection beats mean-preserving competitors") {
    const DistPtr p = beta_distribution(3, 5);
    const auto q = mix(p, make_bump({0.6}, 0.05, p), 0.05);
    const auto star = MeanConstrainedProjector(0.375).project(q).projected;
    const IntegrationDomain dom = joint_domain({q.get(), star.get()}, {});
    auto expect = [&](const Distribution& d, auto f) {
        return integrate([&](std::span<const double> u) { return f(u[0]) * d.density(u); }, dom);
    };
    auto loglik = [&](auto dens) {
        return integrate(
            [&](std::span<const double> u) {
                const double qv = q->density(u);
                return qv > 0 ? qv * std::log(dens(u)) : 0.0;
            },
            dom);
    };
    const double best = loglik([&](std::span<const double> u) { return star->density(u); });
    Xorshift64Star rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double c1 = rng.uniform() - 0.5, c2 = rng.uniform() - 0.5, c3 = rng.uniform() - 0.5;
        auto g0 = [&](double u) { return c1 * u + c2 * u * u + c3 * u * u * u; };
        // remove the components along 1 and (u - mu) under star so mass and mean stay put
        const double e0 = expect(*star, g0);
        auto g1 = [&](double u) { return g0(u) - e0; };
        const double k = expect(*star, [&](double u) { return g1(u) * (u - 0.375); }) /
                         expect(*star, [&](double u) { return (u - 0.375) * (u - 0.375); });
        auto g = [&](double u) { return g1(u) - k * (u - 0.375); };
        const double delta = 0.05;
        const double other = loglik([&](std::span<const double> u) { return star->density(u) * (1 + delta * g(u[0])); });
        CHECK(other <= best);
    }
}

TEST_CASE("markov projection beats markov-respecting competitors") {
    const auto law = toy::markov_toy();
    const auto q = mix(law, make_bump({1, 1, 0, 1, 1}, 0.1, law), 0.1);
    const auto star = MarkovProjector().project(q).projected;
    auto loglik = [&](auto dens) {
        double s = 0;
        for (const auto& c : toy::cells()) {
            const Point x = toy::to_point(c);
            s += q->density(x) * std::log(dens(x));
        }
        return s;
    };
    const double best = loglik([&](const Point& x) { return star->density(x); });
    Xorshift64Star rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const double d0 = 0.05 * (rng.uniform() - 0.5), d1 = 0.05 * (rng.uniform() - 0.5);
        // shift the pooled P(Y = 1 | l1, treated) by d_{l1}; still Markov
        auto dens = [&](const Point& x) {
            const double base = star->density(x);
            if (x[1] != 1.0 || x[3] != 1.0) return base;
            const double py1 = star->conditional(4, Point{x[0], 1, x[2], 1, 1});
            const double shifted = py1 + (x[2] == 0.0 ? d0 : d1);
            return base / (x[4] == 1.0 ? py1 : 1 - py1) * (x[4] == 1.0 ? shifted : 1 - shifted);
        };
        CHECK(loglik(dens) <= best);
    }
}

TEST_CASE("tilt on three points reaches the target mean") {
    const DistPtr p = discrete_uniform({0, 1, 2});
    const TiltedProjector proj({Expression::parse("x0")}, p);
    // mean 1.2: weights 0.3, 0.2, 0.5
    const DistPtr q = std::make_shared<FactorizedLaw>(
        std::vector<FactorPtr>{std::make_shared<DiscreteFactor>(std::vector<double>{0, 1, 2}, std::vector<double>{0.3, 0.2, 0.5})});
    const auto out = proj.project(q);
    CHECK(mean_of(*out.projected) == doctest::Approx(1.2).epsilon(1e-10));
    // dense scan of the moment equation as a check on beta
    double best = 0, gap = 1e300;
    for (int i = 0; i <= 100000; ++i) {
        const double b = -5 + 10.0 * i / 100000;
        const double m = (std::exp(b) + 2 * std::exp(2 * b)) / (1 + std::exp(b) + std::exp(2 * b));
        if (std::abs(m - 1.2) < gap) gap = std::abs(m - 1.2), best = b;
    }
    CHECK(out.meta.beta[0] == doctest::Approx(best).epsilon(1e-3));
}
