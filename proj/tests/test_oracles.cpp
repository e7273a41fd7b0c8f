#include <cmath>

#include "doctest.h"
#include "eif/engine.hpp"
#include "eif/families.hpp"
#include "eif/functionals.hpp"
#include "eif/oracles.hpp"
#include "toy.hpp"

using namespace eif;

TEST_CASE("average density oracles are centered") {
    const DistPtr p = beta_distribution(3, 5);
    const OracleEif np = np_avg_density_oracle(p);
    CHECK(np.centered_residual < 1e-12);
    const OracleEif c = constrained_avg_density_oracle(p, 0.375);
    CHECK(c.centered_residual < 1e-12);
    CHECK(c(Point{0.6}) == doctest::Approx(-0.962542).epsilon(1e-6));
    CHECK(np(Point{0.6}) == doctest::Approx(-1.49122).epsilon(1e-5));
}

TEST_CASE("constrained oracle is the projection of the nonparametric one") {
    const DistPtr p = beta_distribution(3, 5);
    const OracleEif np = np_avg_density_oracle(p);
    OracleEif score{[](std::span<const double> u) { return u[0] - 0.375; }, 0.0, "score"};
    const OracleEif proj = project_onto_one_constraint(np, score, p);
    for (double u : {0.1, 0.37, 0.6, 0.9}) {
        const std::vector<double> x{u};
        CHECK(proj(x) == doctest::Approx(constrained_avg_density_eif(*p, 0.375, x)).epsilon(1e-10));
    }
}

TEST_CASE("tilted tangent oracle for the mean is x - E[X]") {
    const DistPtr p = discrete_uniform({0, 1, 2, 3, 4});
    OracleEif np{[](std::span<const double> u) { return u[0] - 2.0; }, 0.0, "mean"};
    const OracleEif t = tilted_tangent_oracle(np, {Expression::parse("x0")}, p);
    for (double x : {0.0, 4.0}) CHECK(t(Point{x}) == doctest::Approx(x - 2.0).epsilon(1e-12));
    // a basis orthogonal to the target gives zero
    const OracleEif z = tilted_tangent_oracle(np, {Expression::parse("(x0 - 2)^2")}, p);
    CHECK(std::abs(z(Point{4.0})) < 1e-12);
}

TEST_CASE("g-computation oracles agree with brute force on the discrete toy") {
    const auto law = toy::markov_toy();
    const auto t = toy::table_of(*law);
    const OracleEif markov = gcomp_markov_oracle(law);
    const OracleEif np = gcomp_np_oracle(law);
    CHECK(markov.centered_residual < 1e-12);
    CHECK(np.centered_residual < 1e-12);
    for (const auto& c : toy::cells()) {
        const Point x = toy::to_point(c);
        CHECK(markov(x) == doctest::Approx(toy::brute_force_eif(t, c, true)).epsilon(1e-6));
        CHECK(np(x) == doctest::Approx(toy::brute_force_eif(t, c, false)).epsilon(1e-6));
    }
}

TEST_CASE("g-computation terms add up") {
    const auto law = markov_example_law();
    const Point x{0, 1, 2, 1, 1};
    double s = 0;
    for (double v : gcomp_markov_terms(law, x)) s += v;
    CHECK(s == doctest::Approx(gcomp_markov_eif(law, x)).epsilon(1e-12));
    s = 0;
    for (double v : gcomp_np_terms(law, x)) s += v;
    CHECK(s == doctest::Approx(gcomp_np_eif(law, x)).epsilon(1e-12));
}

TEST_CASE("markov oracle refuses laws outside the model") {
    try {
        gcomp_markov_eif(toy::markov_toy(true), std::vector<double>{0, 1, 0, 1, 1});
        FAIL("expected a model membership error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::model_membership);
    }
}

TEST_CASE("engine matches the markov oracle on the discrete toy") {
    const auto law = toy::markov_toy();
    const MarkovProjector model;
    const GcompMean psi;
    for (const auto& c : {toy::Cell{0, 1, 0, 1, 1}, toy::Cell{1, 0, 1, 1, 0}, toy::Cell{1, 1, 1, 1, 1}}) {
        const Point x = toy::to_point(c);
        const double v = secant_eif(law, model, psi, x, 1e-9, 0.1).value;
        CHECK(v == doctest::Approx(gcomp_markov_eif(law, x)).epsilon(1e-6));
    }
}
