#include <cmath>

#include "doctest.h"
#include "eif/families.hpp"
#include "eif/perturbation.hpp"

using namespace eif;

TEST_CASE("kernel bump widths") {
    const DistPtr p = beta_distribution(3, 5);
    const auto half = make_bump({0.6}, 0.01, p, KernelWidth::half);
    CHECK(half->lower(0) == doctest::Approx(0.59));
    CHECK(half->upper(0) == doctest::Approx(0.61));
    CHECK(half->density(std::vector<double>{0.6}) == doctest::Approx(50.0));
    CHECK(half->density(std::vector<double>{0.62}) == 0.0);
    const auto full = make_bump({0.6}, 0.01, p, KernelWidth::full);
    CHECK(full->upper(0) - full->lower(0) == doctest::Approx(0.01));
    CHECK(full->density(std::vector<double>{0.6}) == doctest::Approx(100.0));
    CHECK(total_mass(*half) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(parse_kernel_width("full") == KernelWidth::full);
    CHECK_THROWS_AS(parse_kernel_width("wide"), Error);
}

TEST_CASE("bump is truncated to the support and renormalized") {
    const DistPtr p = uniform_distribution(0, 1);
    const auto b = make_bump({0.005}, 0.01, p);
    CHECK(b->lower(0) == 0.0);
    CHECK(b->upper(0) == doctest::Approx(0.015));
    CHECK(total_mass(*b) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("bump domination failures") {
    const DistPtr p = beta_distribution(3, 5);
    try {
        make_bump({1.5}, 0.01, p);
        FAIL("expected a domination error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domination);
    }
    CHECK_THROWS_AS(make_bump({0.0}, 0.01, p), Error);
    CHECK_THROWS_AS(make_bump({0.5, 0.5}, 0.01, p), Error);
}

TEST_CASE("discrete components get point masses") {
    const auto law = markov_example_law();
    const Point x{0, 1, 2, 1, 1};
    const auto b = make_bump(x, 0.25, law, KernelWidth::full);
    CHECK(b->density(x) == doctest::Approx(4.0));
    Point y = x;
    y[0] = 1;
    CHECK(b->density(y) == 0.0);
    CHECK(total_mass(*b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("r(lambda) for a uniform base") {
    const DistPtr p = uniform_distribution(0, 1);
    for (double l : {0.1, 0.01}) {
        const auto b = make_bump({0.5}, l, p);
        CHECK(r_lambda(*p, *b) == doctest::Approx(std::sqrt(1.0 / (2 * l))).epsilon(1e-10));
    }
}

TEST_CASE("epsilon guideline") {
    CHECK(epsilon_guideline(0.1, 1) == doctest::Approx(1e-4));
    CHECK(epsilon_guideline(0.1, 2) == doctest::Approx(1e-6));
    CHECK(epsilon_guideline(0.1, 0) == doctest::Approx(1e-2));
}

TEST_CASE("perturbation paths") {
    const DistPtr p = beta_distribution(3, 5);
    const auto path = PerturbationPath::at_point(p, {0.6}, 1e-3, 0.01);
    CHECK(total_mass(*path.realized) == doctest::Approx(1.0).epsilon(1e-13));
    const std::vector<double> u{0.6};
    CHECK(path.realized->delta(u, *p) == doctest::Approx(1e-3 * (50.0 - p->density(u))).epsilon(1e-13));

    const auto single = mixture_bump({{0.6}}, 0.01, p);
    CHECK(single->density(u) == doctest::Approx(50.0));
    const auto two = mixture_bump({{0.3}, {0.6}}, 0.01, p);
    CHECK(two->density(u) == doctest::Approx(25.0));
    CHECK(total_mass(*two) == doctest::Approx(1.0).epsilon(1e-13));
    try {
        mixture_bump({{0.3}, {1.3}}, 0.01, p);
        FAIL("expected a domination error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("data point 1") != std::string::npos);
    }
}

TEST_CASE("r(lambda) scales like lambda^(-1/2) and is 1 at the base") {
    const DistPtr p = beta_distribution(3, 5);
    CHECK(r_lambda(*p, *p) == doctest::Approx(1.0).epsilon(1e-10));
    std::vector<double> scaled;
    for (double l : {1e-1, 1e-2, 1e-3}) scaled.push_back(r_lambda(*p, *make_bump({0.6}, l, p)) * std::sqrt(l));
    for (double s : scaled) CHECK(s == doctest::Approx(scaled.back()).epsilon(0.1));
}

TEST_CASE("three-point mixture bump") {
    const DistPtr p = beta_distribution(3, 5);
    const auto m = mixture_bump({{0.2}, {0.5}, {0.505}}, 0.01, p);
    CHECK(total_mass(*m) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m->density(std::vector<double>{0.502}) == doctest::Approx((50.0 + 50.0) / 3.0));
}
