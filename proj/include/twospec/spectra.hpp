#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "twospec/coefficient.hpp"
#include "twospec/operator.hpp"

namespace twospec {

/// Sorted eigenvalues, value(n) for n = 1..n_max.
struct Spectrum {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    std::vector<double> values;
    int dimension_used = 0;

    int n_max() const noexcept { return static_cast<int>(values.size()); }
    double value(int n) const;
};

/// A normalized, sign-fixed eigenfunction. Samples live on the uniform grid
/// x_i = i/M, i = 0..M (M = grid_intervals, even).
struct EigenPair {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    int n = 0;
    double value = 0.0;
    Eigen::VectorXd coeffs;
    int grid_intervals = 0;
    std::vector<double> samples;
    std::vector<double> derivative_samples;
    double residual = 0.0;  // ||A c - value c||

    double eval(double x) const;
    double derivative(double x) const;
    double grid_x(int i) const { return static_cast<double>(i) / grid_intervals; }
};

struct SpectrumOptions {
    int dimension = 0;       // 0: truncation rule
    int grid_intervals = 0;  // 0: max(1024, 64 n_max)
    bool eigenfunctions = true;
};

struct SpectrumResult {
    Spectrum spectrum;
    std::vector<EigenPair> pairs;  // empty unless eigenfunctions were requested
};

// N = max(2 n_max + L + 8, 32).
int truncation_dimension(int n_max, int series_length) noexcept;
int default_grid_intervals(int n_max) noexcept;

// Point where the sign of eigenfunction n is fixed positive: 1/(2n) for
// Dirichlet, 1/(4n+2) for Dirichlet-Neumann.
double sign_point(BoundaryKind kind, int n);

SpectrumResult compute_spectrum(const CoefficientPair& pair, BoundaryKind kind, int n_max,
                                const SpectrumOptions& options = {});

// Closed-form k_n^4 + a1 k_n^2 + a2 labelled by mode n.
double unperturbed_eigenvalue(double a1, double a2, BoundaryKind kind, int n);

// The first n_max closed-form values, sorted ascending.
Spectrum unperturbed_spectrum(double a1, double a2, BoundaryKind kind, int n_max);

/// A constant a1 on one of the exceptional lines where two unperturbed modes
/// (first, second) of the given kind coincide.
struct ExceptionalMatch {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    int k = 0;  // line parameters: a1 = -pi^2 (((k+1)/2)^2 + ((k+1)/2 + t)^2)
    int t = 0;
    int first = 0;
    int second = 0;
    double a1 = 0.0;
};

double exceptional_a1(int k, int t);
std::optional<ExceptionalMatch> match_exceptional_constant(double a1, int index_limit, double rel_tol = 1e-12);
std::vector<ExceptionalMatch> exceptional_lines(double lo, double hi, int index_limit);

struct DegeneracyReport {
    std::vector<std::vector<int>> dirichlet_clusters;
    std::vector<std::vector<int>> dirichlet_neumann_clusters;
    bool in_W = true;
    std::optional<ExceptionalMatch> exceptional_constant;
};

inline constexpr double kDefaultDegeneracyTol = 1e-6;

// Clusters: maximal runs of consecutive indices with gap < tol (1 + |lambda|).
std::vector<std::vector<int>> find_clusters(const Spectrum& spectrum, double tol);

DegeneracyReport detect_degeneracy(const Spectrum& dirichlet, const Spectrum& dirichlet_neumann,
                                   double tol = kDefaultDegeneracyTol,
                                   std::optional<std::array<double, 2>> constant = std::nullopt);

struct AsymptoticFit {
    double slope = 0.0;      // coefficient of k_n^2, estimates the mean of p
    double intercept = 0.0;  // constant term
    int modes_used = 0;
};

// Least squares of lambda_n - k_n^4 = c1 k_n^2 + c2 over the top half of the spectrum.
AsymptoticFit asymptotic_fit(const Spectrum& spectrum);
double asymptotic_mean_estimate(const Spectrum& spectrum);

// integral delta_p (y')^2 + integral delta_q y^2 on the stored samples.
double frechet_eigenvalue_derivative(const EigenPair& eig, const CoefficientPair& delta);

// Composite Simpson over samples on a uniform grid of M (even) intervals of [0,1].
double simpson(const std::vector<double>& samples);

}  // namespace twospec
