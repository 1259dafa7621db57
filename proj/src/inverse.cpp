#include "twospec/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "twospec/errors.hpp"
#include "twospec/parallel.hpp"
#include "twospec/spectra.hpp"

namespace twospec {

namespace {

constexpr double kPi = std::numbers::pi;

CoefficientPair make_pair(Slot unknown, const CoefficientFunction& known, const CoefficientFunction& u) {
    return unknown == Slot::P ? CoefficientPair{u, known} : CoefficientPair{known, u};
}

const CoefficientFunction& unknown_of(const CoefficientPair& pair, Slot slot) {
    return slot == Slot::P ? pair.p : pair.q;
}

Eigen::VectorXd stacked_targets(const InverseProblem& problem) {
    const int n = problem.n_spec();
    Eigen::VectorXd t(2 * n);
    for (int i = 0; i < n; ++i) {
        t(i) = problem.target_lambda[static_cast<std::size_t>(i)];
        t(n + i) = problem.target_mu[static_cast<std::size_t>(i)];
    }
    return t;
}

Eigen::VectorXd row_weights(Slot unknown, int n_spec) {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(2 * n_spec);
    if (unknown == Slot::P) {
        for (int n = 1; n <= n_spec; ++n) {
            const double kd = wavenumber(BoundaryKind::Dirichlet, n);
            const double kn = wavenumber(BoundaryKind::DirichletNeumann, n);
            w(n - 1) = 1.0 / (kd * kd);
            w(n_spec + n - 1) = 1.0 / (kn * kn);
        }
    }
    return w;
}

std::array<Spectrum, 2> both_spectra(const CoefficientPair& pair, int n_spec, int dim) {
    SpectrumOptions opt;
    opt.dimension = dim;
    opt.eigenfunctions = false;
    std::array<Spectrum, 2> out;
    parallel_for(2, [&](int i) {
        const BoundaryKind kind = i == 0 ? BoundaryKind::Dirichlet : BoundaryKind::DirichletNeumann;
        out[static_cast<std::size_t>(i)] = compute_spectrum(pair, kind, n_spec, opt).spectrum;
    });
    return out;
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return false;
        if (i > 0 && !(v[i] > v[i - 1])) return false;
    }
    return true;
}

}  // namespace

const char* to_string(Slot slot) noexcept { return slot == Slot::P ? "p" : "q"; }

Slot slot_from_string(const std::string& name) {
    if (name == "p") return Slot::P;
    if (name == "q") return Slot::Q;
    throw DomainError("unknown slot '" + name + "' (expected p or q)");
}

void require_simple_anchor(const std::array<double, 2>& anchor, int n) {
    if (!std::isfinite(anchor[0]) || !std::isfinite(anchor[1])) throw DomainError("anchor must be finite");
    const int limit = std::max(n, static_cast<int>(std::sqrt(std::abs(anchor[0])) / kPi) + 2);
    const DegeneracyReport rep =
        detect_degeneracy(unperturbed_spectrum(anchor[0], anchor[1], BoundaryKind::Dirichlet, n),
                          unperturbed_spectrum(anchor[0], anchor[1], BoundaryKind::DirichletNeumann, n),
                          kDefaultDegeneracyTol);
    if (!rep.in_W || match_exceptional_constant(anchor[0], limit))
        throw DegeneracyError("anchor lies on an exceptional line (multiple eigenvalues)");
}

void validate_problem(const InverseProblem& problem, const SolverConfig& config) {
    const int n = problem.n_spec();
    if (n < 1) throw DomainError("target spectra are empty");
    if (problem.target_mu.size() != problem.target_lambda.size())
        throw DomainError("target spectra must have the same length");
    if (!strictly_increasing(problem.target_lambda) || !strictly_increasing(problem.target_mu))
        throw DomainError("target spectra must be finite and strictly increasing");
    if (config.basis_modes < 0) throw DomainError("basis_modes must be nonnegative");
    if (2 * config.basis_modes + 1 > 2 * n) throw DomainError("more unknowns than residual equations (2K+1 > 2 n_spec)");
    if (!(config.tikhonov >= 0.0)) throw DomainError("tikhonov must be >= 0");
    if (!(config.damping > 0.0 && config.damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
    if (config.max_iter < 0) throw DomainError("max_iter must be >= 0");
    if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
    if (config.forward_N < 0 || config.oracle_N < 0) throw DomainError("dimensions must be nonnegative");
    if (config.forward_N > 0 && config.forward_N < n) throw DomainError("forward_N smaller than n_spec");
    if (config.max_halvings < 0) throw DomainError("max_halvings must be >= 0");
    require_simple_anchor(problem.anchor, n);
}

int resolved_forward_dimension(const InverseProblem& problem, const SolverConfig& config) {
    if (config.forward_N > 0) return config.forward_N;
    return truncation_dimension(problem.n_spec(), std::max(problem.known.highest_mode(), config.basis_modes));
}

CoefficientFunction expand_parameters(const Eigen::VectorXd& theta, int basis_modes) {
    if (theta.size() != 2 * basis_modes + 1) throw DomainError("parameter vector has the wrong length");
    std::vector<double> a(static_cast<std::size_t>(basis_modes)), b(static_cast<std::size_t>(basis_modes));
    for (int k = 1; k <= basis_modes; ++k) {
        a[static_cast<std::size_t>(k - 1)] = theta(2 * k - 1);
        b[static_cast<std::size_t>(k - 1)] = theta(2 * k);
    }
    return CoefficientFunction::series(theta(0), std::move(a), std::move(b));
}

Eigen::VectorXd parameters_of(const CoefficientFunction& c, int basis_modes) {
    if (c.highest_mode() > basis_modes) throw DomainError("coefficient has modes beyond the basis");
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2 * basis_modes + 1);
    theta(0) = c.constant_part();
    const auto a = c.cosine_coeffs();
    const auto b = c.sine_coeffs();
    for (int k = 1; k <= basis_modes; ++k) {
        if (static_cast<std::size_t>(k) <= a.size()) theta(2 * k - 1) = a[static_cast<std::size_t>(k - 1)];
        if (static_cast<std::size_t>(k) <= b.size()) theta(2 * k) = b[static_cast<std::size_t>(k - 1)];
    }
    return theta;
}

Eigen::VectorXd forward_spectra(const InverseProblem& problem, const Eigen::VectorXd& theta,
                                const SolverConfig& config) {
    const int n = problem.n_spec();
    const auto pair = make_pair(problem.unknown, problem.known, expand_parameters(theta, config.basis_modes));
    const auto s = both_spectra(pair, n, resolved_forward_dimension(problem, config));
    Eigen::VectorXd out(2 * n);
    for (int i = 0; i < n; ++i) {
        out(i) = s[0].values[static_cast<std::size_t>(i)];
        out(n + i) = s[1].values[static_cast<std::size_t>(i)];
    }
    return out;
}

Eigen::MatrixXd forward_jacobian(const InverseProblem& problem, const Eigen::VectorXd& theta,
                                 const SolverConfig& config) {
    const int n = problem.n_spec();
    const int K = config.basis_modes;
    const auto pair = make_pair(problem.unknown, problem.known, expand_parameters(theta, K));
    SpectrumOptions opt;
    opt.dimension = resolved_forward_dimension(problem, config);
    // The integrands are cosine series with integer frequencies below 2(N+K+1);
    // Simpson on more intervals than that integrates them exactly.
    const int grid = std::max(1024, 4 * (opt.dimension + K + 1));
    opt.grid_intervals = grid;

    std::vector<std::vector<double>> beta(static_cast<std::size_t>(2 * K + 1),
                                          std::vector<double>(static_cast<std::size_t>(grid) + 1));
    for (int i = 0; i <= grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        beta[0][static_cast<std::size_t>(i)] = 1.0;
        for (int k = 1; k <= K; ++k) {
            beta[static_cast<std::size_t>(2 * k - 1)][static_cast<std::size_t>(i)] = std::cos(2.0 * k * kPi * x);
            beta[static_cast<std::size_t>(2 * k)][static_cast<std::size_t>(i)] = std::sin(2.0 * k * kPi * x);
        }
    }

    Eigen::MatrixXd J(2 * n, 2 * K + 1);
    parallel_for(2, [&](int which) {
        const BoundaryKind kind = which == 0 ? BoundaryKind::Dirichlet : BoundaryKind::DirichletNeumann;
        const auto res = compute_spectrum(pair, kind, n, opt);
        std::vector<double> w(static_cast<std::size_t>(grid) + 1), f(w.size());
        for (int m = 0; m < n; ++m) {
            const EigenPair& e = res.pairs[static_cast<std::size_t>(m)];
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double y = problem.unknown == Slot::P ? e.derivative_samples[i] : e.samples[i];
                w[i] = y * y;
            }
            for (int j = 0; j <= 2 * K; ++j) {
                const auto& b = beta[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < w.size(); ++i) f[i] = b[i] * w[i];
                J(which * n + m, j) = simpson(f);
            }
        }
    });
    return J;
}

Eigen::VectorXd initial_guess(const InverseProblem& problem, const SolverConfig& config) {
    const int n = problem.n_spec();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2 * config.basis_modes + 1);
    if (problem.unknown == Slot::P) {
        Spectrum lam{BoundaryKind::Dirichlet, problem.target_lambda, 0};
        Spectrum mu{BoundaryKind::DirichletNeumann, problem.target_mu, 0};
        if (n >= 6) {
            theta(0) = 0.5 * (asymptotic_mean_estimate(lam) + asymptotic_mean_estimate(mu));
        } else {
            theta(0) = problem.anchor[0];
        }
        return theta;
    }
    const int low = std::min(n, 2);
    const auto base = make_pair(Slot::Q, problem.known, CoefficientFunction::constant(0.0));
    const auto s = both_spectra(base, low, resolved_forward_dimension(problem, config));
    double shift = 0.0;
    for (int i = 0; i < low; ++i)
        shift += (problem.target_lambda[static_cast<std::size_t>(i)] - s[0].values[static_cast<std::size_t>(i)]) +
                 (problem.target_mu[static_cast<std::size_t>(i)] - s[1].values[static_cast<std::size_t>(i)]);
    theta(0) = shift / (2.0 * low);
    return theta;
}

ReconstructionResult recover_unknown(const InverseProblem& problem, const SolverConfig& config,
                                     const CoefficientFunction* truth) {
    validate_problem(problem, config);
    const int n = problem.n_spec();
    const Eigen::VectorXd target = stacked_targets(problem);
    const Eigen::VectorXd weights = row_weights(problem.unknown, n);

    ReconstructionResult out;
    out.threshold = config.tol * (1.0 + target.norm());

    Eigen::VectorXd theta = initial_guess(problem, config);
    Eigen::VectorXd r = forward_spectra(problem, theta, config) - target;
    double rnorm = r.norm();
    out.residual_history.push_back(rnorm);

    double tikhonov = config.tikhonov;
    int failures = 0;
    bool stalled = false;
    for (int it = 0; it < config.max_iter && rnorm > out.threshold; ++it) {
        const Eigen::MatrixXd J = weights.asDiagonal() * forward_jacobian(problem, theta, config);
        const Eigen::VectorXd rw = weights.asDiagonal() * r;
        const Eigen::MatrixXd normal = J.transpose() * J;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal, Eigen::EigenvaluesOnly);
        const double tau = tikhonov * es.eigenvalues().maxCoeff();
        const Eigen::MatrixXd lhs = normal + tau * Eigen::MatrixXd::Identity(normal.rows(), normal.cols());
        const Eigen::VectorXd step = -lhs.ldlt().solve(J.transpose() * rw);
        if (!step.allFinite()) throw NumericError("Newton step is not finite");

        double scale = config.damping;
        bool accepted = false;
        for (int h = 0; h <= config.max_halvings; ++h, scale *= 0.5) {
            const Eigen::VectorXd trial = theta + scale * step;
            const Eigen::VectorXd rt = forward_spectra(problem, trial, config) - target;
            if (rt.allFinite() && rt.norm() < rnorm) {
                theta = trial;
                r = rt;
                rnorm = rt.norm();
                accepted = true;
                break;
            }
        }
        if (accepted) {
            failures = 0;
            tikhonov = config.tikhonov;
            ++out.iterations;
            out.residual_history.push_back(rnorm);
        } else {
            // No damped step decreased the residual: fall back towards gradient steps.
            tikhonov = std::max(100.0 * tikhonov, 1e-10);
            if (++failures >= 3) {
                stalled = true;
                break;
            }
        }
    }

    out.converged = !stalled && rnorm <= out.threshold;
    out.parameters = theta;
    out.estimate = expand_parameters(theta, config.basis_modes);
    if (truth) out.final_l2_error_vs_truth = (out.estimate - *truth).l2_norm();
    return out;
}

SyntheticProblem generate_synthetic_problem(const std::array<double, 2>& anchor, double epsilon, std::uint64_t seed,
                                            int n_spec, Slot unknown, int oracle_N, int modes) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be >= 0");
    if (n_spec < 1) throw DomainError("n_spec must be >= 1");
    if (modes < 0) throw DomainError("modes must be >= 0");
    if (oracle_N < 0) throw DomainError("oracle_N must be >= 0");
    require_simple_anchor(anchor, n_spec);

    std::mt19937_64 rng(seed);
    const double norm = epsilon * (0.5 + 0.4 * unit_uniform(rng()));
    const CoefficientFunction perturbation = random_series(rng(), modes, norm);

    const double anchor_unknown = unknown == Slot::P ? anchor[0] : anchor[1];
    const double anchor_known = unknown == Slot::P ? anchor[1] : anchor[0];

    SyntheticProblem sp;
    sp.truth = epsilon == 0.0 ? CoefficientFunction::constant(anchor_unknown)
                              : CoefficientFunction::constant(anchor_unknown) + perturbation;
    sp.problem.unknown = unknown;
    sp.problem.known = CoefficientFunction::constant(anchor_known);
    sp.problem.anchor = anchor;

    const int dim = oracle_N > 0 ? oracle_N : 2 * truncation_dimension(n_spec, modes);
    if (dim < n_spec) throw DomainError("oracle_N smaller than n_spec");
    const auto s = both_spectra(make_pair(unknown, sp.problem.known, sp.truth), n_spec, dim);
    sp.problem.target_lambda = s[0].values;
    sp.problem.target_mu = s[1].values;
    return sp;
}

double spectral_distance(const std::vector<double>& lambda_a, const std::vector<double>& mu_a,
                         const std::vector<double>& lambda_b, const std::vector<double>& mu_b, Slot unknown) {
    const std::size_t n = lambda_a.size();
    if (mu_a.size() != n || lambda_b.size() != n || mu_b.size() != n)
        throw DomainError("spectral_distance: sequences of different lengths");
    const Eigen::VectorXd w = row_weights(unknown, static_cast<int>(n));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dl = w(static_cast<Eigen::Index>(i)) * (lambda_a[i] - lambda_b[i]);
        const double dm = w(static_cast<Eigen::Index>(n + i)) * (mu_a[i] - mu_b[i]);
        s += dl * dl + dm * dm;
    }
    return std::sqrt(s);
}

ProbeTrial compare_candidates(const CoefficientPair& a, const CoefficientPair& b, Slot unknown, int n_spec,
                              double agreement_tol) {
    if (n_spec < 1) throw DomainError("n_spec must be >= 1");
    const int dim = truncation_dimension(n_spec, std::max(a.highest_mode(), b.highest_mode()));
    const auto sa = both_spectra(a, n_spec, dim);
    const auto sb = both_spectra(b, n_spec, dim);
    ProbeTrial t;
    t.spectral_distance = spectral_distance(sa[0].values, sa[1].values, sb[0].values, sb[1].values, unknown);
    t.coefficient_distance = (unknown_of(a, unknown) - unknown_of(b, unknown)).l2_norm();
    t.ratio = t.coefficient_distance > 0.0 ? t.spectral_distance / t.coefficient_distance : 0.0;
    t.spectra_agree = t.spectral_distance <= agreement_tol;
    // Agreement threshold for coefficients: the square root of the spectral one.
    t.coefficients_agree = t.coefficient_distance <= std::sqrt(agreement_tol);
    return t;
}

ProbeReport uniqueness_probe(const std::array<double, 2>& anchor, double epsilon, int trials, std::uint64_t seed,
                             const ProbeOptions& options) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    require_simple_anchor(anchor, options.n_spec);

    ProbeReport rep;
    rep.unknown = options.unknown;
    rep.epsilon = epsilon;
    rep.n_spec = options.n_spec;
    rep.seed = seed;
    rep.trials.resize(static_cast<std::size_t>(trials));

    const double known = options.unknown == Slot::P ? anchor[1] : anchor[0];
    const double base = options.unknown == Slot::P ? anchor[0] : anchor[1];
    parallel_for(trials, [&](int i) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1));
        auto draw = [&] {
            const double norm = epsilon * (0.5 + 0.4 * unit_uniform(rng()));
            return CoefficientFunction::constant(base) + random_series(rng(), options.modes, norm);
        };
        const CoefficientFunction k = CoefficientFunction::constant(known);
        const CoefficientFunction u1 = draw();
        const CoefficientFunction u2 = draw();
        rep.trials[static_cast<std::size_t>(i)] = compare_candidates(
            make_pair(options.unknown, k, u1), make_pair(options.unknown, k, u2), options.unknown, options.n_spec,
            options.agreement_tol);
    });

    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = 0.0;
    for (const auto& t : rep.trials) {
        if (t.coefficient_distance > 0.0) {
            rep.min_ratio = std::min(rep.min_ratio, t.ratio);
            rep.max_ratio = std::max(rep.max_ratio, t.ratio);
        }
        if (t.spectra_agree && !t.coefficients_agree) rep.consistent = false;
    }
    if (!std::isfinite(rep.min_ratio)) rep.min_ratio = 0.0;
    return rep;
}

}  // namespace twospec
