#include <cmath>

#include "doctest.h"
#include "eif/families.hpp"
#include "eif/mixture.hpp"
#include "toy.hpp"

using namespace eif;

TEST_CASE("beta density and mass") {
    const DistPtr p = beta_distribution(3, 5);
    const std::vector<double> u{0.6};
    CHECK(p->density(u) == doctest::Approx(105.0 * 0.36 * std::pow(0.4, 4)).epsilon(1e-13));
    CHECK(total_mass(*p) == doctest::Approx(1.0).epsilon(1e-13));
    const std::vector<double> out{1.5};
    CHECK(p->density(out) == 0.0);
    CHECK_THROWS_AS(p->density(std::vector<double>{0.1, 0.2}), Error);
    CHECK_THROWS_AS(beta_distribution(-1, 2), Error);
}

TEST_CASE("simple families") {
    CHECK(total_mass(*uniform_distribution(-1, 3)) == doctest::Approx(1.0));
    CHECK(total_mass(*normal_distribution(2, 0.5)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bernoulli_distribution(0.3)->density(std::vector<double>{1.0}) == doctest::Approx(0.3));
    const DistPtr d = discrete_uniform({0, 1, 2, 3, 4});
    CHECK(d->density(std::vector<double>{2.0}) == doctest::Approx(0.2));
    CHECK(d->density(std::vector<double>{2.5}) == 0.0);
    CHECK_THROWS_AS(uniform_distribution(1, 1), Error);
    CHECK_THROWS_AS(DiscreteFactor({0, 1}, {0.3, 0.3}), Error);
}

TEST_CASE("example-2 law") {
    const auto p = markov_example_law();
    CHECK(p->dimension() == 5);
    CHECK(total_mass(*p) == doctest::Approx(1.0).epsilon(1e-10));
    const std::vector<double> x{0, 1, 2, 1, 1};
    const double expected = 0.2 * expit(-1.0) * std::exp(-0.5 * (2.0 + 3.0) * (2.0 + 3.0) / 4.0) /
                            std::sqrt(2 * std::numbers::pi * 4.0) * expit(-5 + 2 + 1) * expit(-1 + 1 - 0.5 - 1);
    CHECK(p->density(x) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(p->conditional(2, x) == doctest::Approx(std::exp(-25.0 / 8.0) / std::sqrt(8 * std::numbers::pi)));
    // prefix marginals agree with integrating out the tail
    const double l0a0 = p->prefix_density(1, x);
    CHECK(l0a0 == doctest::Approx(0.2 * expit(-1.0)));
}

TEST_CASE("sampling is seeded and follows the law") {
    const auto p = toy::markov_toy();
    Xorshift64Star a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(p->sample(a) == p->sample(b));
    Xorshift64Star r(11);
    const int n = 100000;
    int l0 = 0;
    for (int i = 0; i < n; ++i) l0 += p->sample(r)[0] == 1.0;
    CHECK(double(l0) / n == doctest::Approx(0.4).epsilon(0.02));
}

TEST_CASE("mixture weights and stable differences") {
    const DistPtr p = beta_distribution(2, 2);
    const DistPtr h = uniform_distribution(0, 1);
    const auto m = mix(p, h, 1e-9);
    const std::vector<double> u{0.3};
    const double exact = 1e-9 * (h->density(u) - p->density(u));
    CHECK(m->delta(u, *p) == doctest::Approx(exact).epsilon(1e-14));
    CHECK_THROWS_AS(mix(p, h, 1.5), Error);
    CHECK_THROWS_AS(mix(p, h, -0.1), Error);
    CHECK_THROWS_AS(Mixture({p, h}, {0.5, 0.6}), Error);
}
