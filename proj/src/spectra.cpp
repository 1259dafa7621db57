#include "twospec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "twospec/errors.hpp"
#include "twospec/jacobi_eigen.hpp"

namespace twospec {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

double expansion(BoundaryKind kind, const Eigen::VectorXd& c, double x, bool derivative) {
    double s = 0.0;
    for (Eigen::Index m = 0; m < c.size(); ++m) {
        const double k = wavenumber(kind, static_cast<int>(m) + 1);
        s += c(m) * (derivative ? k * std::cos(k * x) : std::sin(k * x));
    }
    return kSqrt2 * s;
}

}  // namespace

double Spectrum::value(int n) const {
    if (n < 1 || n > n_max()) throw DomainError("spectrum index " + std::to_string(n) + " out of range");
    return values[static_cast<std::size_t>(n - 1)];
}

double EigenPair::eval(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eigenfunction evaluated outside [0,1]");
    return expansion(kind, coeffs, x, false);
}

double EigenPair::derivative(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eigenfunction evaluated outside [0,1]");
    return expansion(kind, coeffs, x, true);
}

int truncation_dimension(int n_max, int series_length) noexcept {
    return std::max(2 * n_max + series_length + 8, 32);
}

int default_grid_intervals(int n_max) noexcept {
    const int m = std::max(1024, 64 * n_max);
    return m + (m % 2);
}

double sign_point(BoundaryKind kind, int n) {
    if (n < 1) throw DomainError("mode index must be >= 1");
    return kind == BoundaryKind::Dirichlet ? 1.0 / (2.0 * n) : 1.0 / (4.0 * n + 2.0);
}

SpectrumResult compute_spectrum(const CoefficientPair& pair, BoundaryKind kind, int n_max,
                                const SpectrumOptions& options) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    const int dim = options.dimension > 0 ? options.dimension : truncation_dimension(n_max, pair.highest_mode());
    if (n_max > dim) throw DomainError("n_max exceeds the Galerkin dimension");

    const GalerkinSystem sys = assemble_form_matrix(pair, kind, dim);
    const SymmetricEigen eig = jacobi_eigen(sys.matrix);

    SpectrumResult out;
    out.spectrum.kind = kind;
    out.spectrum.dimension_used = dim;
    out.spectrum.values.assign(eig.values.data(), eig.values.data() + n_max);
    for (double v : out.spectrum.values)
        if (!std::isfinite(v)) throw NumericError("non-finite eigenvalue");
    if (!options.eigenfunctions) return out;

    const int grid = options.grid_intervals > 0 ? options.grid_intervals : default_grid_intervals(n_max);
    if (grid % 2 != 0) throw DomainError("eigenfunction grid needs an even number of intervals");

    Eigen::MatrixXd coeffs = eig.vectors.leftCols(n_max);
    for (int n = 1; n <= n_max; ++n) {
        auto col = coeffs.col(n - 1);
        col.normalize();
        double at = expansion(kind, col, sign_point(kind, n), false);
        if (at == 0.0) {
            Eigen::Index imax = 0;
            col.cwiseAbs().maxCoeff(&imax);
            at = col(imax);
        }
        if (at < 0.0) col = -col;
    }

    Eigen::MatrixXd values(dim, grid + 1), derivs(dim, grid + 1);
    for (int m = 1; m <= dim; ++m) {
        const double k = wavenumber(kind, m);
        for (int i = 0; i <= grid; ++i) {
            const double kx = k * (static_cast<double>(i) / grid);
            values(m - 1, i) = kSqrt2 * std::sin(kx);
            derivs(m - 1, i) = kSqrt2 * k * std::cos(kx);
        }
    }
    const Eigen::MatrixXd f = coeffs.transpose() * values;
    const Eigen::MatrixXd df = coeffs.transpose() * derivs;

    out.pairs.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        EigenPair ep;
        ep.kind = kind;
        ep.n = n;
        ep.value = eig.values(n - 1);
        ep.coeffs = coeffs.col(n - 1);
        ep.grid_intervals = grid;
        ep.samples.resize(static_cast<std::size_t>(grid) + 1);
        ep.derivative_samples.resize(static_cast<std::size_t>(grid) + 1);
        for (int i = 0; i <= grid; ++i) {
            ep.samples[static_cast<std::size_t>(i)] = f(n - 1, i);
            ep.derivative_samples[static_cast<std::size_t>(i)] = df(n - 1, i);
        }
        ep.residual = (sys.matrix * ep.coeffs - ep.value * ep.coeffs).norm();
        out.pairs.push_back(std::move(ep));
    }
    return out;
}

double unperturbed_eigenvalue(double a1, double a2, BoundaryKind kind, int n) {
    const double k2 = wavenumber(kind, n) * wavenumber(kind, n);
    return k2 * k2 + a1 * k2 + a2;
}

Spectrum unperturbed_spectrum(double a1, double a2, BoundaryKind kind, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    Spectrum s;
    s.kind = kind;
    s.values.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) s.values.push_back(unperturbed_eigenvalue(a1, a2, kind, n));
    std::sort(s.values.begin(), s.values.end());
    return s;
}

double exceptional_a1(int k, int t) {
    const double h = 0.5 * (k + 1);
    return -kPi * kPi * (h * h + (h + t) * (h + t));
}

namespace {

ExceptionalMatch make_match(int k, int t) {
    ExceptionalMatch m;
    m.k = k;
    m.t = t;
    m.a1 = exceptional_a1(k, t);
    if (k % 2 == 1) {
        m.kind = BoundaryKind::Dirichlet;
        m.first = (k + 1) / 2;
    } else {
        m.kind = BoundaryKind::DirichletNeumann;
        m.first = k / 2;
    }
    m.second = m.first + t;
    return m;
}

}  // namespace

std::optional<ExceptionalMatch> match_exceptional_constant(double a1, int index_limit, double rel_tol) {
    for (int k = 1; k <= index_limit; ++k)
        for (int t = 1; t <= index_limit; ++t) {
            const double line = exceptional_a1(k, t);
            if (std::abs(a1 - line) <= rel_tol * std::abs(line)) return make_match(k, t);
        }
    return std::nullopt;
}

std::vector<ExceptionalMatch> exceptional_lines(double lo, double hi, int index_limit) {
    std::vector<ExceptionalMatch> out;
    for (int k = 1; k <= index_limit; ++k)
        for (int t = 1; t <= index_limit; ++t) {
            const double line = exceptional_a1(k, t);
            if (line >= lo && line <= hi) out.push_back(make_match(k, t));
        }
    std::stable_sort(out.begin(), out.end(),
                     [](const ExceptionalMatch& a, const ExceptionalMatch& b) { return a.a1 < b.a1; });
    return out;
}

std::vector<std::vector<int>> find_clusters(const Spectrum& spectrum, double tol) {
    if (!(tol > 0.0)) throw DomainError("degeneracy tolerance must be positive");
    std::vector<std::vector<int>> clusters;
    std::vector<int> run{1};
    for (int n = 2; n <= spectrum.n_max(); ++n) {
        const double prev = spectrum.value(n - 1);
        const double cur = spectrum.value(n);
        if (std::abs(cur - prev) < tol * (1.0 + std::max(std::abs(prev), std::abs(cur)))) {
            run.push_back(n);
        } else {
            if (run.size() >= 2) clusters.push_back(run);
            run = {n};
        }
    }
    if (run.size() >= 2) clusters.push_back(run);
    return clusters;
}

DegeneracyReport detect_degeneracy(const Spectrum& dirichlet, const Spectrum& dirichlet_neumann, double tol,
                                   std::optional<std::array<double, 2>> constant) {
    if (!(tol > 0.0)) throw DomainError("degeneracy tolerance must be positive");
    DegeneracyReport r;
    r.dirichlet_clusters = find_clusters(dirichlet, tol);
    r.dirichlet_neumann_clusters = find_clusters(dirichlet_neumann, tol);
    r.in_W = r.dirichlet_clusters.empty() && r.dirichlet_neumann_clusters.empty();
    if (constant) {
        const int limit = std::max(dirichlet.n_max(), dirichlet_neumann.n_max());
        r.exceptional_constant = match_exceptional_constant((*constant)[0], limit);
    }
    return r;
}

AsymptoticFit asymptotic_fit(const Spectrum& spectrum) {
    const int n_max = spectrum.n_max();
    const int first = n_max / 2 + 1;
    const int count = n_max - first + 1;
    if (count < 3) throw DomainError("asymptotic fit needs at least 3 modes in the top half of the spectrum");

    Eigen::MatrixXd design(count, 2);
    Eigen::VectorXd rhs(count);
    for (int n = first; n <= n_max; ++n) {
        const double k2 = wavenumber(spectrum.kind, n) * wavenumber(spectrum.kind, n);
        // Columns scaled to O(1) so the QR sees a well-conditioned system.
        design(n - first, 0) = 1.0;
        design(n - first, 1) = 1.0 / k2;
        rhs(n - first) = (spectrum.value(n) - k2 * k2) / k2;
    }
    const Eigen::Vector2d sol = design.colPivHouseholderQr().solve(rhs);
    return AsymptoticFit{sol(0), sol(1), count};
}

double asymptotic_mean_estimate(const Spectrum& spectrum) {
    return asymptotic_fit(spectrum).slope;
}

double simpson(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 3 || n % 2 == 0) throw DomainError("Simpson rule needs an even number of intervals");
    const double h = 1.0 / static_cast<double>(n - 1);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 == 1 ? odd : even) += samples[i];
    return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

double frechet_eigenvalue_derivative(const EigenPair& eig, const CoefficientPair& delta) {
    if (eig.samples.empty() || eig.samples.size() != eig.derivative_samples.size())
        throw PreconditionError("eigenpair carries no eigenfunction samples");
    if (std::abs(eig.coeffs.norm() - 1.0) > 1e-8) throw PreconditionError("eigenfunction is not normalized");

    std::vector<double> integrand(eig.samples.size());
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(integrand.size() - 1);
        const double d = eig.derivative_samples[i];
        const double f = eig.samples[i];
        integrand[i] = delta.p(x) * d * d + delta.q(x) * f * f;
    }
    return simpson(integrand);
}

}  // namespace twospec
