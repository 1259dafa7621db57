#include "twospec/operator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "twospec/errors.hpp"

namespace twospec {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace

std::string_view to_string(BoundaryKind kind) noexcept {
    return kind == BoundaryKind::Dirichlet ? "dirichlet" : "dirichlet_neumann";
}

BoundaryKind boundary_kind_from_string(std::string_view s) {
    if (s == "dirichlet" || s == "D") return BoundaryKind::Dirichlet;
    if (s == "dirichlet_neumann" || s == "dirichlet-neumann" || s == "DN") return BoundaryKind::DirichletNeumann;
    throw DomainError("unknown boundary kind '" + std::string(s) + "'");
}

double wavenumber(BoundaryKind kind, int n) {
    if (n < 1) throw DomainError("mode index must be >= 1");
    return kind == BoundaryKind::Dirichlet ? n * kPi : (n + 0.5) * kPi;
}

double basis_function(BoundaryKind kind, int n, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("basis function evaluated outside [0,1]");
    return kSqrt2 * std::sin(wavenumber(kind, n) * x);
}

double basis_derivative(BoundaryKind kind, int n, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("basis derivative evaluated outside [0,1]");
    const double k = wavenumber(kind, n);
    return kSqrt2 * k * std::cos(k * x);
}

QuadratureRule composite_gauss_legendre(int panels, int points_per_panel) {
    if (panels < 1 || points_per_panel < 1) throw DomainError("quadrature needs at least one panel and node");
    std::vector<double> gx, gw;
    gauss_legendre(points_per_panel, gx, gw);
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * points_per_panel);
    rule.weights.reserve(rule.nodes.capacity());
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (int j = 0; j < points_per_panel; ++j) {
            rule.nodes.push_back(mid + 0.5 * h * gx[j]);
            rule.weights.push_back(0.5 * h * gw[j]);
        }
    }
    return rule;
}

int min_quadrature_panels(int dimension, int series_length) noexcept {
    return 4 * (dimension + series_length);
}

GalerkinSystem assemble_form_matrix(const CoefficientPair& pair, BoundaryKind kind, int dimension,
                                    int quadrature_panels) {
    if (dimension < 1) throw DomainError("Galerkin dimension must be >= 1");
    const int needed = min_quadrature_panels(dimension, pair.highest_mode());
    if (quadrature_panels < needed)
        throw DomainError("quadrature panels " + std::to_string(quadrature_panels) + " below anti-aliasing minimum " +
                          std::to_string(needed));

    const QuadratureRule rule = composite_gauss_legendre(quadrature_panels);
    const auto nq = static_cast<Eigen::Index>(rule.nodes.size());

    Eigen::VectorXd wp(nq), wq(nq);
    for (Eigen::Index j = 0; j < nq; ++j) {
        const double x = rule.nodes[j];
        const double pv = pair.p(x);
        const double qv = pair.q(x);
        if (!std::isfinite(pv) || !std::isfinite(qv)) throw AssemblyError("non-finite coefficient value at a quadrature node");
        wp(j) = rule.weights[j] * pv;
        wq(j) = rule.weights[j] * qv;
    }

    Eigen::MatrixXd values(dimension, nq), derivs(dimension, nq);
    for (int n = 1; n <= dimension; ++n) {
        const double k = wavenumber(kind, n);
        for (Eigen::Index j = 0; j < nq; ++j) {
            const double kx = k * rule.nodes[j];
            values(n - 1, j) = kSqrt2 * std::sin(kx);
            derivs(n - 1, j) = kSqrt2 * k * std::cos(kx);
        }
    }

    Eigen::MatrixXd a = derivs * wp.asDiagonal() * derivs.transpose();
    a.noalias() += values * wq.asDiagonal() * values.transpose();
    for (int n = 1; n <= dimension; ++n) {
        const double k2 = wavenumber(kind, n) * wavenumber(kind, n);
        a(n - 1, n - 1) += k2 * k2;
    }
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    if (!sym.allFinite()) throw AssemblyError("assembled form matrix is not finite");

    return GalerkinSystem{kind, dimension, quadrature_panels, sym};
}

GalerkinSystem assemble_form_matrix(const CoefficientPair& pair, BoundaryKind kind, int dimension) {
    return assemble_form_matrix(pair, kind, dimension, min_quadrature_panels(dimension, pair.highest_mode()));
}

double positivity_shift_bound(const CoefficientPair& pair) noexcept {
    const double p_sup = pair.p.sup_bound();
    return 0.25 * p_sup * p_sup + pair.q.sup_bound();
}

}  // namespace twospec
