#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "twospec/coefficient.hpp"

namespace twospec {

/// Which coefficient is recovered; the other one is known.
enum class Slot { P, Q };

const char* to_string(Slot slot) noexcept;
Slot slot_from_string(const std::string& name);

struct InverseProblem {
    Slot unknown = Slot::Q;
    CoefficientFunction known;
    std::vector<double> target_lambda;  // Dirichlet eigenvalues, n = 1..n_spec
    std::vector<double> target_mu;      // Dirichlet-Neumann eigenvalues, n = 1..n_spec
    std::array<double, 2> anchor{0.0, 0.0};

    int n_spec() const noexcept { return static_cast<int>(target_lambda.size()); }
};

struct SolverConfig {
    int basis_modes = 6;      // K: unknown = c0 + sum_{k<=K} a_k cos(2k pi x) + b_k sin(2k pi x)
    double tikhonov = 1e-8;   // relative to ||J||^2
    double damping = 1.0;     // initial step fraction in (0,1]
    int max_iter = 30;
    double tol = 1e-12;       // stop at ||r|| <= tol (1 + ||target||)
    int forward_N = 0;        // 0: truncation_dimension(n_spec, modes)
    int oracle_N = 0;         // 0: 2 forward_N
    int max_halvings = 8;
};

struct ReconstructionResult {
    CoefficientFunction estimate;
    Eigen::VectorXd parameters;          // c0, a_1, b_1, ..., a_K, b_K
    std::vector<double> residual_history;  // unweighted ||r||, one entry per iterate
    int iterations = 0;                  // accepted Newton steps
    bool converged = false;
    double threshold = 0.0;              // tol (1 + ||target||)
    std::optional<double> final_l2_error_vs_truth;
};

// Checks the problem and configuration; throws DomainError or DegeneracyError.
void validate_problem(const InverseProblem& problem, const SolverConfig& config);

// Throws DegeneracyError when the constant pair lies on an exceptional line or
// has a multiple eigenvalue among the first n modes of either kind.
void require_simple_anchor(const std::array<double, 2>& anchor, int n);

int resolved_forward_dimension(const InverseProblem& problem, const SolverConfig& config);

// Parameter vector <-> trigonometric series with K modes.
CoefficientFunction expand_parameters(const Eigen::VectorXd& theta, int basis_modes);
Eigen::VectorXd parameters_of(const CoefficientFunction& c, int basis_modes);

// Stacked (lambda_1..n_spec, mu_1..n_spec) of the pair built from theta.
Eigen::VectorXd forward_spectra(const InverseProblem& problem, const Eigen::VectorXd& theta, const SolverConfig& config);

// d(stacked spectra)/d(theta), rows ordered as forward_spectra.
Eigen::MatrixXd forward_jacobian(const InverseProblem& problem, const Eigen::VectorXd& theta,
                                 const SolverConfig& config);

// Initial parameters: a constant. For the p slot it is the k^2 coefficient of
// the asymptotic fit of both target spectra; for the q slot it is the mean
// shift of the lowest target eigenvalues against the known-p operator.
Eigen::VectorXd initial_guess(const InverseProblem& problem, const SolverConfig& config);

ReconstructionResult recover_unknown(const InverseProblem& problem, const SolverConfig& config = {},
                                     const CoefficientFunction* truth = nullptr);

struct SyntheticProblem {
    InverseProblem problem;
    CoefficientFunction truth;
};

// Truth = anchor slot + random series with modes <= `modes` and L2 norm in
// [0.5, 0.9) epsilon; the known slot is the anchor constant. Targets are
// computed at dimension oracle_N (0: twice the default forward dimension).
SyntheticProblem generate_synthetic_problem(const std::array<double, 2>& anchor, double epsilon, std::uint64_t seed,
                                            int n_spec, Slot unknown, int oracle_N = 0, int modes = 6);

// ||r|| of the stacked eigenvalue differences; rows divided by k_n^2 for the p slot.
double spectral_distance(const std::vector<double>& lambda_a, const std::vector<double>& mu_a,
                         const std::vector<double>& lambda_b, const std::vector<double>& mu_b, Slot unknown);

struct ProbeTrial {
    double spectral_distance = 0.0;
    double coefficient_distance = 0.0;
    double ratio = 0.0;  // spectral / coefficient distance (0 when both vanish)
    bool spectra_agree = false;
    bool coefficients_agree = false;
};

struct ProbeReport {
    Slot unknown = Slot::Q;
    double epsilon = 0.0;
    int n_spec = 16;
    std::uint64_t seed = 0;
    std::vector<ProbeTrial> trials;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    bool consistent = true;  // agreeing spectra always came with agreeing coefficients
};

struct ProbeOptions {
    Slot unknown = Slot::Q;
    int n_spec = 16;
    int modes = 6;
    double agreement_tol = 1e-9;
};

ProbeReport uniqueness_probe(const std::array<double, 2>& anchor, double epsilon, int trials, std::uint64_t seed,
                             const ProbeOptions& options = {});

// Spectral and coefficient distance for two explicit candidates.
ProbeTrial compare_candidates(const CoefficientPair& a, const CoefficientPair& b, Slot unknown, int n_spec,
                              double agreement_tol = 1e-9);

}  // namespace twospec
