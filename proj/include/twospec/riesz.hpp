#pragma once

#include <vector>

#include <Eigen/Core>

#include "twospec/coefficient.hpp"
#include "twospec/spectra.hpp"

namespace twospec {

enum class FamilyKind { Value, Derivative };

enum class MemberLabel {
    Unit,
    PhiProduct,
    PsiProduct,
    PhiDerivativeProduct,
    PsiDerivativeProduct,
    ReferenceCosine,
};

const char* to_string(MemberLabel label) noexcept;
const char* to_string(FamilyKind kind) noexcept;

struct FamilyMember {
    int index = 0;
    MemberLabel label = MemberLabel::Unit;
    std::vector<double> samples;  // on x_i = i/M, i = 0..M
};

/// Members 0..2 n_max: 0 is the constant 1, 2n-1 comes from the
/// Dirichlet-Neumann mode n, 2n from the Dirichlet mode n.
struct Family {
    int grid_intervals = 0;
    std::vector<FamilyMember> members;

    int size() const noexcept { return static_cast<int>(members.size()); }
};

/// Normalized eigenfunctions of both boundary kinds for one coefficient pair.
struct EigenfunctionSet {
    int grid_intervals = 0;
    std::vector<EigenPair> dirichlet;
    std::vector<EigenPair> dirichlet_neumann;
};

// At least 16 n_max intervals (and never fewer than 256), even.
int default_family_grid(int n_max) noexcept;

EigenfunctionSet eigenfunction_set(const CoefficientPair& pair, int n_max, int grid_intervals);

// sqrt2 (1 - y_n(p1) y_n(p2)) for y = psi (odd members) and y = phi (even members).
Family build_value_family(const EigenfunctionSet& first, const EigenfunctionSet& second, int n_max);
Family build_value_family(const CoefficientPair& p1, const CoefficientPair& p2, int n_max, int grid_intervals = 0);

// 2 sqrt2 (y_n'(p1) y_n'(p2) / (2 k_n^2) - 1/2).
Family build_derivative_family(const EigenfunctionSet& first, const EigenfunctionSet& second, int n_max);
Family build_derivative_family(const CoefficientPair& p1, const CoefficientPair& p2, int n_max,
                               int grid_intervals = 0);

// The orthonormal cosine system the families reduce to at constant pairs:
// e_0 = 1, e_2n = sqrt2 cos(2n pi x), e_2n-1 = sqrt2 cos((2n+1) pi x).
Family reference_family(int n_max, int grid_intervals);

double inner_product(const std::vector<double>& a, const std::vector<double>& b);

struct PerturbationSum {
    double total = 0.0;
    std::vector<double> terms;  // ||d_m - e_m||^2 per member
};

PerturbationSum perturbation_sum(const Family& d, const Family& e);

// Sum over members beyond the truncation of an envelope c m^-decay fitted to
// the top half of the computed terms.
double tail_estimate(const std::vector<double>& terms, double decay_exponent = 1.8);

Eigen::MatrixXd gram_matrix(const Family& family);

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Extreme eigenvalues of the Gram matrix; throws DegeneracyError when the
// family is numerically dependent.
FrameBounds frame_bounds(const Family& family);

struct RieszReport {
    FamilyKind kind = FamilyKind::Value;
    int n_max = 0;
    int grid_intervals = 0;
    double perturbation_sum = 0.0;
    double tail_estimate = 0.0;
    double frame_lower = 0.0;
    double frame_upper = 0.0;
    double reference_lower = 1.0;
    double reference_upper = 1.0;
    bool passes_le3 = false;  // sum + tail < reference_lower^2 / reference_upper
    std::vector<double> terms;
};

RieszReport riesz_check(const CoefficientPair& p1, const CoefficientPair& p2, FamilyKind kind, int n_max,
                        int grid_intervals = 0);
RieszReport riesz_check(const EigenfunctionSet& first, const EigenfunctionSet& second, FamilyKind kind, int n_max);

}  // namespace twospec
