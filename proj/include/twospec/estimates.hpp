#pragma once

#include <array>
#include <vector>

#include "twospec/coefficient.hpp"
#include "twospec/spectra.hpp"

namespace twospec {

/// Which inequality a report measures.
///   A1/A2: sup |y(p1) y(p2) - y(p3) y(p4)|, y = phi_n / psi_n
///   B1/B2: same for the normalized derivatives y'/k_n
///   Eq1/Eq2: sup |psi_n(p1) - psi_n(p2)| and its normalized-derivative analogue
enum class EstimateId { A1, A2, B1, B2, Eq1, Eq2 };

const char* to_string(EstimateId id) noexcept;

struct IndexRange {
    int first = 8;
    int last = 48;
};

struct EstimateOptions {
    double alpha = 2.9;
    double ball_radius = 2.0;  // all pairs must lie in B(0, ball_radius)
    double degeneracy_tol = kDefaultDegeneracyTol;
    int points_per_mode = 32;
};

struct EstimateReport {
    EstimateId id = EstimateId::A1;
    double alpha = 2.9;
    double norm_factor = 0.0;
    std::vector<int> n_values;
    std::vector<double> lhs;
    std::vector<double> ratios;  // lhs * n^(alpha-2) / norm_factor
    double max_ratio = 0.0;
    double trend_slope = 0.0;  // slope of log ratio vs log n over the top half
    bool passed = false;
};

inline constexpr double kMaxTrendSlope = 0.05;

// Least-squares slope of log(ratio) against log(n) over the upper half of the
// indices; zero ratios are skipped, fewer than two usable points give 0.
double trend_slope(const std::vector<int>& n_values, const std::vector<double>& ratios);

std::array<EstimateReport, 4> verify_product_estimates(const std::array<CoefficientPair, 4>& pairs, IndexRange range,
                                                       const EstimateOptions& options = {});

std::array<EstimateReport, 2> verify_difference_estimates(const CoefficientPair& p1, const CoefficientPair& p2,
                                                          IndexRange range, const EstimateOptions& options = {});

// Eq1/Eq2 from explicit Dirichlet-Neumann eigenpairs (index n at position n-1).
// Lets callers feed eigenfunctions under any sign convention.
EstimateReport difference_report(EstimateId id, const std::vector<EigenPair>& first,
                                 const std::vector<EigenPair>& second, double norm_factor, IndexRange range,
                                 double alpha);

struct SupBoundsReport {
    std::vector<int> n_values;
    std::vector<double> sup_values;       // sup |psi_n|
    std::vector<double> sup_derivatives;  // sup |psi_n' / ((n+1/2) pi)|
    double max_value = 0.0;
    double max_derivative = 0.0;
};

SupBoundsReport verify_sup_bounds(const CoefficientPair& pair, IndexRange range, const EstimateOptions& options = {});

// Q = (2 + 2 C M N^(2-alpha))^(1/2).
double sup_bound_constant(double c, double m, int n, double alpha);

// Smallest N >= 1 with (mu_{n+1}(0) - r (n+1)^alpha) - (mu_n(0) + r n^alpha) > 0
// for every n >= N.
int disjointness_index(double r, double alpha);

struct LocalizationReport {
    double alpha = 2.9;
    double r = 4.0;
    int disjointness_index = 1;
    std::vector<int> n_values;
    std::vector<double> eigenvalues;    // mu_n(p)
    std::vector<double> distances;      // |mu_n(p) - mu_n(0)|
    std::vector<double> radii;          // r n^alpha
    std::vector<bool> in_own_disk;
    std::vector<bool> in_region;        // membership in the union of the big disk and the disks n > N
    double minimal_r = 0.0;             // max_n distance / n^alpha
    int first_contained = 0;            // every tested n >= this lies in its own disk
    bool all_in_region = false;
};

LocalizationReport verify_localization(const CoefficientPair& pair, double alpha, double r, IndexRange range);

struct FormIdentityReport {
    double eigenvalue = 0.0;
    double lhs = 0.0;  // q_{p1}[y_n(p1), y_n(p2)]
    double rhs = 0.0;  // lambda_n(p1) (y_n(p1), y_n(p2))
    double residual = 0.0;
    double subtraction_lhs = 0.0;  // ((p1-p2) y1', y2') + ((q1-q2) y1, y2)
    double subtraction_rhs = 0.0;  // (lambda_n(p1) - lambda_n(p2)) (y1, y2)
    double subtraction_residual = 0.0;
};

FormIdentityReport verify_form_identity(const CoefficientPair& p1, const CoefficientPair& p2, BoundaryKind kind,
                                        int n);

}  // namespace twospec
