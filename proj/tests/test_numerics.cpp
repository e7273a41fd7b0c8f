#include <cmath>
#include <numbers>

#include "doctest.h"
#include "eif/expression.hpp"
#include "eif/format.hpp"
#include "eif/quadrature.hpp"
#include "eif/rng.hpp"
#include "eif/solvers.hpp"

using namespace eif;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const Rule1D r = gauss_legendre(5);
    double s0 = 0, s8 = 0, s9 = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        s0 += r.weights[i];
        s8 += r.weights[i] * std::pow(r.nodes[i], 8);
        s9 += r.weights[i] * std::pow(r.nodes[i], 9);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(std::abs(s9) < 1e-15);
    CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("composite rule splits at breakpoints") {
    QuadratureSettings q{4, 8, true};
    const double kink = 0.3;
    const std::vector<double> bp{kink};
    const Rule1D r = composite_rule(0.0, 1.0, bp, q);
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::abs(r.nodes[i] - kink);
    CHECK(s == doctest::Approx(0.5 * (kink * kink + (1 - kink) * (1 - kink))).epsilon(1e-14));
    CHECK_THROWS_AS(composite_rule(1.0, 0.0, {}, q), Error);
}

TEST_CASE("merged hints keep the narrower range as kinks") {
    AxisHint a{true, 0.0, 1.0, {}, {}}, b{true, 0.4, 0.6, {}, {}};
    const AxisHint m = merge(a, b);
    CHECK(m.lower == 0.0);
    CHECK(m.upper == 1.0);
    CHECK(m.breakpoints == std::vector<double>{0.4, 0.6});
}

TEST_CASE("integrate over a space") {
    SampleSpace s({Continuous{0.0, 2.0}, Discrete{{0.0, 1.0, 2.0}}});
    const double v = integrate([](std::span<const double> u) { return u[0] * u[1]; }, s, {});
    CHECK(v == doctest::Approx(2.0 * 3.0).epsilon(1e-14));
}

TEST_CASE("accumulator compensates") {
    Accumulator acc;
    acc.add(1e16);
    for (int i = 0; i < 10; ++i) acc.add(1.0);
    acc.add(-1e16);
    CHECK(acc.value() == 10.0);
}

TEST_CASE("brent finds roots and refuses bad brackets") {
    const double r = find_root([](double x) { return x * x - 2.0; }, {0.0, 2.0});
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    try {
        find_root([](double x) { return x * x + 1.0; }, {0.0, 2.0});
        FAIL("expected a bracket error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::bracket);
    }
}

TEST_CASE("newton maximizes a concave quadratic") {
    auto f = [](const Eigen::VectorXd& b) { return -(b[0] - 1) * (b[0] - 1) - 2 * (b[1] + 3) * (b[1] + 3); };
    auto g = [](const Eigen::VectorXd& b) {
        Eigen::VectorXd v(2);
        v << -2 * (b[0] - 1), -4 * (b[1] + 3);
        return v;
    };
    auto h = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd m(2, 2);
        m << -2, 0, 0, -4;
        return m;
    };
    const NewtonResult r = newton_maximize(f, g, h, Eigen::VectorXd::Zero(2));
    CHECK(r.argmax[0] == doctest::Approx(1.0));
    CHECK(r.argmax[1] == doctest::Approx(-3.0));
    CHECK(r.gradient_norm < 1e-12);
}

TEST_CASE("richardson removes the linear bias of forward differences") {
    const double d = richardson_derivative([](double h) { return std::exp(h) - 1.0; }, 1e-2, 4);
    CHECK(d == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("expressions") {
    const Expression e = Expression::parse("-5 + c10(x2) + x1 + 0.5*x0");
    const std::vector<double> u{2.0, 1.0, 20.0};
    CHECK(e(u) == doctest::Approx(-5 + 10 + 1 + 1));
    CHECK(e.arity() == 3);
    CHECK(Expression::parse("2^3^2")(u) == doctest::Approx(512.0));
    CHECK(Expression::parse("-x0^2")(u) == doctest::Approx(-4.0));
    CHECK(Expression::parse("pow(x0, 3) / 4")(u) == doctest::Approx(2.0));
    CHECK(expit(0.0) == 0.5);
    CHECK(expit(-800.0) >= 0.0);
    CHECK(clamp10(-12.0) == -10.0);
    CHECK_THROWS_AS(Expression::parse("1 +"), Error);
    CHECK_THROWS_AS(Expression::parse("foo(x0)"), Error);
    CHECK_THROWS_AS(Expression::parse("x0 x1"), Error);
    const auto kinks = e.kinks();
    REQUIRE(kinks.size() == 2);
    CHECK(kinks[0].first == 2);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, -0.962542097902, 1e-300, 12345.678, 1.0 / 3.0}) {
        CHECK(parse_number(format_number(v), "v") == v);
        CHECK(parse_number(format_shortest(v), "v") == v);
    }
    CHECK(format_shortest(0.25) == "0.25");
    CHECK_THROWS_AS(parse_number("1.0x", "v"), Error);
    CHECK_THROWS_AS(parse_number("", "v"), Error);
    CHECK(split("a;b;;c", ';').size() == 4);
    CHECK(trim("  a b \t") == "a b");
}

TEST_CASE("xorshift64* is reproducible and uniform on average") {
    Xorshift64Star a(42), b(42), c(43);
    for (int i = 0; i < 5; ++i) CHECK(a.next() == b.next());
    CHECK(a.next() != c.next());
    Xorshift64Star r(7);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK_UNARY(u >= 0.0);
        CHECK_UNARY(u < 1.0);
        s += u;
        const double z = r.normal();
        s2 += z * z;
    }
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    double bsum = 0;
    for (int i = 0; i < 50000; ++i) bsum += r.beta(3.0, 5.0);
    CHECK(bsum / 50000 == doctest::Approx(0.375).epsilon(0.01));
}
