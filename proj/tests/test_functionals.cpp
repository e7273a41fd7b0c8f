#include <cmath>
#include <numbers>

#include "doctest.h"
#include "eif/families.hpp"
#include "eif/functionals.hpp"
#include "eif/mixture.hpp"
#include "eif/kernel.hpp"
#include "toy.hpp"

using namespace eif;

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

TEST_CASE("average density value in closed form") {
    const AvgDensity psi;
    // int p^2 for Beta(a, b) is B(2a - 1, 2b - 1) / B(a, b)^2
    const double exact = std::exp(log_beta(5, 9) - 2 * log_beta(3, 5));
    CHECK(psi.evaluate(*beta_distribution(3, 5)) == doctest::Approx(exact).epsilon(1e-13));
    CHECK(psi.evaluate(*uniform_distribution(0, 4)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(psi.evaluate(*beta_distribution(2, 2)) == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(psi.difference(*beta_distribution(2, 2), *beta_distribution(2, 2)) == 0.0);
    CHECK_THROWS_AS(psi.evaluate(*discrete_uniform({0, 1})), Error);
}

TEST_CASE("stable and naive differences agree where both are accurate") {
    const DistPtr p = beta_distribution(3, 5);
    const auto q = mix(p, make_bump({0.6}, 0.01, p), 1e-3);
    const AvgDensity psi;
    CHECK(psi.difference(*q, *p) == doctest::Approx(psi.naive_difference(*q, *p)).epsilon(1e-9));
    const MeanFunctional mean;
    CHECK(mean.evaluate(*p) == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(mean.difference(*q, *p) == doctest::Approx(1e-3 * (0.6 - 0.375)).epsilon(1e-10));
    const ConstantFunctional c(2.5);
    CHECK(c.evaluate(*p) == 2.5);
    CHECK(c.difference(*q, *p) == 0.0);
}

TEST_CASE("g-computation on the discrete toy matches the table formula") {
    const auto law = toy::markov_toy();
    const GcompMean psi;
    const auto t = toy::table_of(*law);
    CHECK(psi.evaluate(*law) == doctest::Approx(toy::psi_table(t, false)).epsilon(1e-14));
    const auto q = mix(law, make_bump({0, 1, 1, 1, 0}, 0.1, law), 1e-4);
    const double diff = toy::psi_table(toy::table_of(*q), false) - toy::psi_table(t, false);
    CHECK(psi.difference(*q, *law) == doctest::Approx(diff).epsilon(1e-8));
}

TEST_CASE("g-computation on the example-2 law matches direct integration") {
    const auto law = markov_example_law();
    // Psi = sum_l0 0.2 int N(l1; 3 l0 - 3, 4) expit(-1 + 0.5 c10(l1) - 0.5 - 1) dl1
    double expected = 0.0;
    for (int l0 = 0; l0 < 5; ++l0) {
        const double mean = 3.0 * l0 - 3.0;
        const int n = 400000;
        const double lo = mean - 40, hi = mean + 40, h = (hi - lo) / n;
        double s = 0;
        for (int i = 0; i <= n; ++i) {
            const double l1 = lo + i * h;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            s += w * std::exp(-(l1 - mean) * (l1 - mean) / 8.0) / std::sqrt(8 * std::numbers::pi) *
                 expit(-2.5 + 0.5 * clamp10(l1));
        }
        expected += 0.2 * s * h;
    }
    CHECK(GcompMean().evaluate(*law) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("g-computation needs positivity") {
    std::vector<FactorPtr> f{std::make_shared<BernoulliFactor>(0.5), std::make_shared<BernoulliFactor>(0.0),
                             std::make_shared<BernoulliFactor>(0.5)};
    const auto law = std::make_shared<FactorizedLaw>(f);
    try {
        GcompMean().evaluate(*law);
        FAIL("expected a positivity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::positivity);
    }
}
