#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twospec/coefficient.hpp"
#include "twospec/errors.hpp"

using namespace twospec;
using std::numbers::pi;

namespace {

// Simpson on 4096 intervals; independent of the closed-form norm.
double l2_by_quadrature(const CoefficientFunction& c) {
    const int m = 4096;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double v = c(static_cast<double>(i) / m);
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * v * v;
    }
    return std::sqrt(s / (3.0 * m));
}

}  // namespace

TEST_CASE("series evaluates the trigonometric sum") {
    const auto c = CoefficientFunction::series(0.5, {0.2, -0.1}, {0.0, 0.3});
    for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        const double expected = 0.5 + 0.2 * std::cos(2 * pi * x) - 0.1 * std::cos(4 * pi * x) +
                                0.3 * std::sin(4 * pi * x);
        CHECK(c(x) == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(c.highest_mode() == 2);
    CHECK_FALSE(c.is_constant());
    CHECK(CoefficientFunction::constant(3.0).is_constant());
}

TEST_CASE("evaluation outside [0,1] is a domain error") {
    const auto c = CoefficientFunction::constant(1.0);
    CHECK_THROWS_AS(c(-0.01), DomainError);
    CHECK_THROWS_AS(c(1.01), DomainError);
}

TEST_CASE("non-finite coefficients are rejected") {
    CHECK_THROWS_AS(CoefficientFunction::series(NAN, {}, {}), DomainError);
    CHECK_THROWS_AS(CoefficientFunction::series(0.0, {INFINITY}, {}), DomainError);
}

TEST_CASE("l2 norm agrees with quadrature") {
    const auto c = CoefficientFunction::series(0.3, {0.05, 0.0, -0.02}, {0.01, 0.04});
    CHECK(c.l2_norm() == doctest::Approx(l2_by_quadrature(c)).epsilon(1e-12));
    CHECK(CoefficientFunction::constant(-2.0).l2_norm() == doctest::Approx(2.0));
}

TEST_CASE("sup bound dominates sampled values") {
    const auto c = CoefficientFunction::series(0.1, {0.3, -0.2}, {0.25});
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) worst = std::max(worst, std::abs(c(i / 1000.0)));
    CHECK(c.sup_bound() >= worst);
}

TEST_CASE("grid projection recovers a band-limited series") {
    const auto truth = CoefficientFunction::series(0.2, {0.05, 0.0, 0.01}, {-0.03, 0.02});
    std::vector<double> samples(257);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = truth(static_cast<double>(i) / 256);
    const auto c = CoefficientFunction::from_grid(samples, 8);
    CHECK(c.constant_part() == doctest::Approx(0.2).epsilon(1e-10));
    REQUIRE(c.highest_mode() >= 3);
    CHECK(c.cosine_coeffs()[0] == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(c.sine_coeffs()[0] == doctest::Approx(-0.03).epsilon(1e-9));
    CHECK(c.projection_residual() < 1e-10);
    CHECK(c.eval(0.5, CoefficientFunction::Eval::Grid) == doctest::Approx(truth(0.5)));
    CHECK_THROWS_AS(CoefficientFunction::from_grid({1.0}), DomainError);
}

TEST_CASE("arithmetic is coefficient-wise") {
    const auto a = CoefficientFunction::series(1.0, {0.5}, {});
    const auto b = CoefficientFunction::series(0.5, {0.0, 0.25}, {0.1});
    const auto d = a - 2.0 * b;
    for (double x : {0.1, 0.4, 0.9}) CHECK(d(x) == doctest::Approx(a(x) - 2 * b(x)));
}

TEST_CASE("JSON round trip and validation") {
    const auto c = CoefficientFunction::series(0.25, {0.1, -0.2}, {0.05});
    const auto back = coefficient_from_json(coefficient_to_json(c));
    CHECK(back == c);

    const auto g = coefficient_from_json(R"({"grid": [1, 1, 1, 1, 1], "max_modes": 1})");
    CHECK(g.constant_part() == doctest::Approx(1.0));

    CHECK_THROWS_AS(coefficient_from_json("{not json"), DomainError);
    CHECK_THROWS_AS(coefficient_from_json("[1,2]"), DomainError);
    CHECK_THROWS_AS(coefficient_from_json(R"({"constant": 1, "bogus": 2})"), DomainError);
    CHECK_THROWS_AS(coefficient_from_json(R"({"constant": 1, "grid": [1, 2]})"), DomainError);
    CHECK_THROWS_AS(coefficient_from_json(R"({"cos": ["a"]})"), DomainError);
}

TEST_CASE("pair norm, ball membership and distance") {
    const CoefficientPair p{CoefficientFunction::constant(0.6), CoefficientFunction::constant(0.8)};
    CHECK(p.norm() == doctest::Approx(1.0));
    CHECK(p.in_ball(0.0, 0.0, 1.01));
    CHECK_FALSE(p.in_ball(0.0, 0.0, 1.0));
    CHECK(p.in_ball(0.6, 0.8, 1e-12));
    const auto z = CoefficientPair::constants(0.0, 0.0);
    CHECK(pair_distance(p, z) == doctest::Approx(1.0));
}

TEST_CASE("unit_uniform covers [0,1)") {
    CHECK(unit_uniform(0) == 0.0);
    CHECK(unit_uniform(~std::uint64_t{0}) < 1.0);
    CHECK(unit_uniform(std::uint64_t{1} << 63) == doctest::Approx(0.5));
}

TEST_CASE("random series is seeded and has the requested norm") {
    const auto a = random_series(42, 4, 0.03);
    const auto b = random_series(42, 4, 0.03);
    CHECK(a == b);
    CHECK(a.l2_norm() == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(a.highest_mode() <= 4);
    CHECK_FALSE(random_series(43, 4, 0.03) == a);
    CHECK(random_series(1, 3, 0.0).l2_norm() == 0.0);
}

TEST_CASE("random pairs land inside the requested ball") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = random_pair({1.0, -2.0}, 0.05, 3, seed);
        CHECK(p.in_ball(1.0, -2.0, 0.05));
        CHECK(pair_distance(p, CoefficientPair::constants(1.0, -2.0)) >= 0.5 * 0.05 - 1e-15);
        CHECK(p == random_pair({1.0, -2.0}, 0.05, 3, seed));
    }
}
