#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twospec/errors.hpp"
#include "twospec/riesz.hpp"

using namespace twospec;
using std::numbers::pi;

namespace {

const double sqrt2 = std::sqrt(2.0);

double max_deviation(const FamilyMember& m, const std::function<double(double)>& f, int grid) {
    double worst = 0.0;
    for (int i = 0; i <= grid; ++i)
        worst = std::max(worst, std::abs(m.samples[static_cast<std::size_t>(i)] - f(static_cast<double>(i) / grid)));
    return worst;
}

CoefficientPair cos_p(double amp) { return {CoefficientFunction::series(0.0, {amp}, {}), CoefficientFunction{}}; }

}  // namespace

TEST_CASE("families at the zero pair are the cosine system") {
    const int n_max = 6, grid = 512;
    const auto z = CoefficientPair::constants(0, 0);
    for (auto which : {FamilyKind::Value, FamilyKind::Derivative}) {
        const auto f = which == FamilyKind::Value ? build_value_family(z, z, n_max, grid)
                                                  : build_derivative_family(z, z, n_max, grid);
        REQUIRE(f.size() == 2 * n_max + 1);
        CHECK(f.members[0].label == MemberLabel::Unit);
        CHECK(max_deviation(f.members[0], [](double) { return 1.0; }, grid) == 0.0);
        for (int n = 1; n <= n_max; ++n) {
            CHECK(max_deviation(f.members[2 * n], [n](double x) { return sqrt2 * std::cos(2 * n * pi * x); }, grid) <
                  1e-10);
            CHECK(max_deviation(f.members[2 * n - 1],
                                [n](double x) { return sqrt2 * std::cos((2 * n + 1) * pi * x); }, grid) < 1e-10);
        }
    }
}

TEST_CASE("families at equal constant pairs reproduce the reference exactly") {
    const auto a = CoefficientPair::constants(0.7, -0.4);
    const auto ref = reference_family(8, 512);
    for (auto which : {FamilyKind::Value, FamilyKind::Derivative}) {
        const auto f = which == FamilyKind::Value ? build_value_family(a, a, 8, 512) : build_derivative_family(a, a, 8, 512);
        CHECK(perturbation_sum(f, ref).total <= 1e-10);
    }
}

TEST_CASE("perturbation sum of identical families is zero") {
    const auto ref = reference_family(5, 256);
    const auto s = perturbation_sum(ref, ref);
    CHECK(s.total == 0.0);
    CHECK(s.terms.size() == 11);
    CHECK_THROWS_AS(perturbation_sum(ref, reference_family(5, 128)), DomainError);
    CHECK_THROWS_AS(perturbation_sum(ref, reference_family(4, 256)), DomainError);
}

TEST_CASE("reference family has unit frame bounds") {
    const auto fb = frame_bounds(reference_family(16, 1024));
    CHECK(std::abs(fb.lower - 1.0) <= 1e-8);
    CHECK(std::abs(fb.upper - 1.0) <= 1e-8);
}

TEST_CASE("duplicated member makes the Gram matrix singular") {
    auto f = reference_family(4, 256);
    f.members.push_back(f.members[3]);
    CHECK_THROWS_AS(frame_bounds(f), DegeneracyError);
}

TEST_CASE("inner product uses Simpson on the family grid") {
    const int m = 256;
    std::vector<double> a(m + 1), b(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double x = static_cast<double>(i) / m;
        a[static_cast<std::size_t>(i)] = x;
        b[static_cast<std::size_t>(i)] = x * x;
    }
    CHECK(inner_product(a, b) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(inner_product(a, std::vector<double>(5, 1.0)), DomainError);
}

TEST_CASE("perturbed families satisfy the standard frame-bound perturbation estimate") {
    const auto p1 = cos_p(0.02);
    const auto z = CoefficientPair::constants(0, 0);
    for (auto kind : {FamilyKind::Value, FamilyKind::Derivative}) {
        const auto r = riesz_check(p1, z, kind, 24);
        const double s = r.perturbation_sum;
        CHECK(s > 0.0);
        CHECK(std::isfinite(s));
        CHECK(r.passes_le3);
        CHECK(r.frame_lower > 0.0);
        CHECK(r.frame_lower <= r.frame_upper);
        CHECK(r.frame_lower >= std::pow(1 - std::sqrt(s), 2) - 1e-12);
        CHECK(r.frame_upper <= std::pow(1 + std::sqrt(s), 2) + 1e-12);
    }
}

TEST_CASE("perturbation sum depends quadratically on the perturbation size") {
    const auto z = CoefficientPair::constants(0, 0);
    for (auto kind : {FamilyKind::Value, FamilyKind::Derivative}) {
        const double big = riesz_check(cos_p(0.04), z, kind, 16).perturbation_sum;
        const double small = riesz_check(cos_p(0.02), z, kind, 16).perturbation_sum;
        CHECK(big / small == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("per-member terms decay at least like m^-1.8") {
    const auto z = CoefficientPair::constants(0, 0);
    const CoefficientPair p{CoefficientFunction::series(0.0, {0.01}, {0.005}),
                            CoefficientFunction::series(0.0, {0.01}, {})};
    const auto r = riesz_check(p, z, FamilyKind::Value, 32);
    // least-squares slope of log term vs log m over the top half
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t m = r.terms.size() / 2; m < r.terms.size(); ++m) {
        if (!(r.terms[m] > 0)) continue;
        const double x = std::log(static_cast<double>(m)), y = std::log(r.terms[m]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    REQUIRE(count >= 3);
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    CHECK(slope <= -1.8);
}

TEST_CASE("tail estimate of an exact power law") {
    std::vector<double> terms(41);
    for (std::size_t m = 1; m < terms.size(); ++m) terms[m] = 3.0 * std::pow(static_cast<double>(m), -1.8);
    // sum_{m>40} 3 m^-1.8 via the integral from 40.5 is accurate to O(m^-3.8)
    const double expected = 3.0 * std::pow(40.5, -0.8) / 0.8;
    CHECK(tail_estimate(terms) == doctest::Approx(expected).epsilon(1e-3));
    CHECK_THROWS_AS(tail_estimate(terms, 1.0), DomainError);
}

TEST_CASE("criterion at the zero pair") {
    const auto z = CoefficientPair::constants(0, 0);
    for (auto kind : {FamilyKind::Value, FamilyKind::Derivative}) {
        const auto r = riesz_check(z, z, kind, 48);
        CHECK(r.perturbation_sum <= 1e-10);
        CHECK(r.passes_le3);
        CHECK(r.frame_upper / r.frame_lower == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("grid mismatch is rejected") {
    const auto z = CoefficientPair::constants(0, 0);
    const auto a = eigenfunction_set(z, 4, 256);
    const auto b = eigenfunction_set(z, 4, 512);
    CHECK_THROWS_AS(build_value_family(a, b, 4), PreconditionError);
    CHECK_THROWS_AS(build_value_family(a, a, 5), PreconditionError);
}
