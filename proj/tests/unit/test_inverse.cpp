#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twospec/errors.hpp"
#include "twospec/inverse.hpp"
#include "twospec/spectra.hpp"

using namespace twospec;
using std::numbers::pi;

namespace {

// Targets of an explicit pair at a given Galerkin dimension.
InverseProblem problem_from(const CoefficientPair& truth, Slot unknown, int n_spec, int dimension,
                            std::array<double, 2> anchor = {0.0, 0.0}) {
    SpectrumOptions o;
    o.dimension = dimension;
    o.eigenfunctions = false;
    InverseProblem p;
    p.unknown = unknown;
    p.known = unknown == Slot::Q ? truth.p : truth.q;
    p.target_lambda = compute_spectrum(truth, BoundaryKind::Dirichlet, n_spec, o).spectrum.values;
    p.target_mu = compute_spectrum(truth, BoundaryKind::DirichletNeumann, n_spec, o).spectrum.values;
    p.anchor = anchor;
    return p;
}

}  // namespace

TEST_CASE("parameter vectors round trip through the series") {
    Eigen::VectorXd theta(5);
    theta << 0.1, 0.2, -0.3, 0.05, 0.01;
    const auto c = expand_parameters(theta, 2);
    CHECK(c.constant_part() == 0.1);
    CHECK(c.cosine_coeffs()[1] == 0.05);
    CHECK(c.sine_coeffs()[0] == -0.3);
    CHECK(parameters_of(c, 2) == theta);
    CHECK(parameters_of(c, 4).size() == 9);
    CHECK_THROWS_AS(expand_parameters(theta, 3), DomainError);
    CHECK_THROWS_AS(parameters_of(c, 1), DomainError);
    CHECK(slot_from_string("p") == Slot::P);
    CHECK_THROWS_AS(slot_from_string("r"), DomainError);
}

TEST_CASE("problem validation") {
    auto p = problem_from(CoefficientPair::constants(0, 0), Slot::Q, 4, 32);
    SolverConfig c;
    c.basis_modes = 4;
    CHECK_THROWS_AS(validate_problem(p, c), DomainError);  // 9 unknowns, 8 equations
    c.basis_modes = 2;
    CHECK_NOTHROW(validate_problem(p, c));
    c.damping = 0.0;
    CHECK_THROWS_AS(validate_problem(p, c), DomainError);
    c.damping = 1.0;
    c.forward_N = 3;
    CHECK_THROWS_AS(validate_problem(p, c), DomainError);
    c.forward_N = 0;
    auto bad = p;
    std::swap(bad.target_lambda[0], bad.target_lambda[1]);
    CHECK_THROWS_AS(validate_problem(bad, c), DomainError);
    bad = p;
    bad.target_mu.pop_back();
    CHECK_THROWS_AS(validate_problem(bad, c), DomainError);
}

TEST_CASE("anchors on exceptional lines are rejected") {
    const double a1 = -5 * pi * pi;
    CHECK_THROWS_AS(require_simple_anchor({a1, 0.0}, 4), DegeneracyError);
    CHECK_THROWS_AS(generate_synthetic_problem({a1, 0.0}, 0.01, 1, 8, Slot::Q), DegeneracyError);
    CHECK_NOTHROW(require_simple_anchor({0.0, 0.0}, 16));
    auto p = problem_from(CoefficientPair::constants(0, 0), Slot::Q, 8, 32);
    p.anchor = {-8.5 * pi * pi, 0.0};
    CHECK_THROWS_AS(recover_unknown(p), DegeneracyError);
}

TEST_CASE("constant targets are a fixed point") {
    for (auto slot : {Slot::Q, Slot::P}) {
        const auto truth = CoefficientPair::constants(0.3, -0.2);
        const auto p = problem_from(truth, slot, 12, 64, {0.3, -0.2});
        const auto r = recover_unknown(p);
        CHECK(r.converged);
        CHECK(r.iterations == 0);
        const double expected = slot == Slot::Q ? -0.2 : 0.3;
        CHECK(std::abs(r.estimate.constant_part() - expected) <= 1e-10);
    }
}

TEST_CASE("a pure spectral shift is recovered exactly in the q slot") {
    const auto p = problem_from(CoefficientPair::constants(1.0, 2.0 + 0.4), Slot::Q, 12, 64, {1.0, 2.0});
    const auto r = recover_unknown(p);
    REQUIRE(r.converged);
    CHECK(r.iterations <= 1);
    CHECK(std::abs(r.estimate.constant_part() - 2.4) <= 1e-10);
    CHECK(r.estimate.highest_mode() == 0);
}

TEST_CASE("mean identifiability: constant-mode Jacobian columns at the anchor") {
    SolverConfig c;
    c.basis_modes = 3;
    auto pq = problem_from(CoefficientPair::constants(0, 0), Slot::Q, 10, 48);
    const auto jq = forward_jacobian(pq, parameters_of(CoefficientFunction::constant(0.0), 3), c);
    for (int i = 0; i < jq.rows(); ++i) CHECK(jq(i, 0) == doctest::Approx(1.0).epsilon(1e-12));

    auto pp = problem_from(CoefficientPair::constants(0, 0), Slot::P, 10, 48);
    const auto jp = forward_jacobian(pp, parameters_of(CoefficientFunction::constant(0.0), 3), c);
    for (int n = 1; n <= 10; ++n) {
        CHECK(jp(n - 1, 0) == doctest::Approx(n * n * pi * pi).epsilon(1e-12));
        CHECK(jp(10 + n - 1, 0) == doctest::Approx((n + 0.5) * (n + 0.5) * pi * pi).epsilon(1e-12));
    }
}

TEST_CASE("Jacobian entries match finite differences of the forward map") {
    for (auto slot : {Slot::Q, Slot::P}) {
        SolverConfig c;
        c.basis_modes = 3;
        const auto p = problem_from(CoefficientPair::constants(0, 0), slot, 8, 40);
        Eigen::VectorXd theta(7);
        theta << 0.02, 0.03, -0.01, 0.02, 0.015, -0.01, 0.005;
        const auto j = forward_jacobian(p, theta, c);
        const double h = 1e-4;
        for (int col = 0; col < theta.size(); ++col) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp(col) += h;
            tm(col) -= h;
            const Eigen::VectorXd fd = (forward_spectra(p, tp, c) - forward_spectra(p, tm, c)) / (2 * h);
            for (int row = 0; row < j.rows(); ++row)
                CHECK(std::abs(j(row, col) - fd(row)) <= 1e-5 * std::max(1.0, std::abs(fd(row))));
        }
    }
}

TEST_CASE("two-mode q is recovered from spectra computed at twice the dimension") {
    const CoefficientPair truth{CoefficientFunction::constant(0.0),
                                CoefficientFunction::series(0.0, {0.05, 0.03}, {})};
    SolverConfig c;
    const int forward = truncation_dimension(16, c.basis_modes);
    const auto p = problem_from(truth, Slot::Q, 16, 2 * forward);
    const auto r = recover_unknown(p, c, &truth.q);
    REQUIRE(r.converged);
    REQUIRE(r.final_l2_error_vs_truth.has_value());
    CHECK(*r.final_l2_error_vs_truth <= 1e-3);
    CHECK(r.residual_history.back() <= r.threshold);
}

TEST_CASE("synthetic problems") {
    const auto zero = generate_synthetic_problem({0.5, -1.0}, 0.0, 9, 8, Slot::P);
    CHECK(zero.truth == CoefficientFunction::constant(0.5));
    CHECK(zero.problem.known == CoefficientFunction::constant(-1.0));

    const auto a = generate_synthetic_problem({0.0, 0.0}, 0.05, 123, 16, Slot::Q);
    const auto b = generate_synthetic_problem({0.0, 0.0}, 0.05, 123, 16, Slot::Q);
    CHECK(a.truth == b.truth);
    CHECK(a.problem.target_lambda == b.problem.target_lambda);
    CHECK(a.problem.target_mu == b.problem.target_mu);
    CHECK(a.truth.l2_norm() < 0.05);
    CHECK_FALSE(generate_synthetic_problem({0.0, 0.0}, 0.05, 124, 16, Slot::Q).truth == a.truth);
}

TEST_CASE("round trip in both slots with residual monotonicity and fast local convergence") {
    for (auto slot : {Slot::Q, Slot::P})
        for (std::uint64_t seed : {5u, 6u, 7u}) {
            const auto s = generate_synthetic_problem({0.0, 0.0}, 0.05, seed, 16, slot);
            const auto r = recover_unknown(s.problem, {}, &s.truth);
            REQUIRE(r.converged);
            CHECK(*r.final_l2_error_vs_truth <= 1e-3);
            CHECK(r.residual_history.back() <= r.threshold);
            for (std::size_t i = 2; i < r.residual_history.size(); ++i)
                CHECK(r.residual_history[i] <= r.residual_history[i - 1]);
            const std::size_t h = r.residual_history.size();
            for (std::size_t i = (h > 4 ? h - 3 : 1); i < h; ++i)
                CHECK(r.residual_history[i] * 10 <= r.residual_history[i - 1]);
        }
}

TEST_CASE("an exhausted iteration budget is reported, not thrown") {
    const auto s = generate_synthetic_problem({0.0, 0.0}, 0.05, 11, 16, Slot::Q);
    SolverConfig c;
    c.max_iter = 0;
    const auto r = recover_unknown(s.problem, c, &s.truth);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.residual_history.size() == 1);
}

TEST_CASE("spectral distance") {
    const std::vector<double> a{1, 2, 3}, b{1, 2, 4};
    CHECK(spectral_distance(a, a, b, a, Slot::Q) == doctest::Approx(1.0));
    CHECK(spectral_distance(a, a, a, a, Slot::P) == 0.0);
    CHECK_THROWS_AS(spectral_distance(a, a, {1, 2}, a, Slot::Q), DomainError);
}

TEST_CASE("uniqueness probe") {
    const auto z = CoefficientPair::constants(0, 0);
    const auto same = compare_candidates(z, z, Slot::Q, 16);
    CHECK(same.spectral_distance == 0.0);
    CHECK(same.coefficient_distance == 0.0);
    CHECK(same.spectra_agree);
    CHECK(same.coefficients_agree);

    const CoefficientPair shifted{CoefficientFunction{}, CoefficientFunction::series(0.0, {0.01}, {})};
    const auto diff = compare_candidates(z, shifted, Slot::Q, 16);
    CHECK(diff.spectral_distance > 0.0);
    CHECK_FALSE(diff.spectra_agree);

    const auto rep = uniqueness_probe({0.0, 0.0}, 0.05, 20, 2024);
    CHECK(rep.trials.size() == 20);
    CHECK(rep.min_ratio > 0.0);
    CHECK(rep.consistent);
    const auto again = uniqueness_probe({0.0, 0.0}, 0.05, 20, 2024);
    CHECK(again.min_ratio == rep.min_ratio);
    CHECK(again.max_ratio == rep.max_ratio);
    CHECK_THROWS_AS(uniqueness_probe({0.0, 0.0}, 0.0, 5, 1), DomainError);
}
