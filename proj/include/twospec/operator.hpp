#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "twospec/coefficient.hpp"

namespace twospec {

/// Dirichlet:          y(0)=y''(0)=y(1)=y''(1)=0,  basis sqrt2 sin(n pi x)
/// DirichletNeumann:   y(0)=y''(0)=y'(1)=y'''(1)=0, basis sqrt2 sin((n+1/2) pi x)
enum class BoundaryKind { Dirichlet, DirichletNeumann };

std::string_view to_string(BoundaryKind kind) noexcept;
BoundaryKind boundary_kind_from_string(std::string_view s);

// k_n = n pi (Dirichlet) or (n + 1/2) pi (Dirichlet-Neumann), n >= 1.
double wavenumber(BoundaryKind kind, int n);

double basis_function(BoundaryKind kind, int n, double x);
double basis_derivative(BoundaryKind kind, int n, double x);

/// Composite Gauss-Legendre rule on [0,1] with equal panels.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kGaussPointsPerPanel = 8;

QuadratureRule composite_gauss_legendre(int panels, int points_per_panel = kGaussPointsPerPanel);

// Smallest admissible panel count: 4 (N + L), L the highest coefficient mode.
int min_quadrature_panels(int dimension, int series_length) noexcept;

/// Matrix of the energy form (y'',z'') + (p y',z') + (q y,z) in the first N
/// basis functions of the given boundary kind.
struct GalerkinSystem {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    int dimension = 0;
    int quadrature_panels = 0;
    Eigen::MatrixXd matrix;
};

GalerkinSystem assemble_form_matrix(const CoefficientPair& pair, BoundaryKind kind, int dimension,
                                    int quadrature_panels);

// Uses min_quadrature_panels.
GalerkinSystem assemble_form_matrix(const CoefficientPair& pair, BoundaryKind kind, int dimension);

// c such that A + cI is positive definite for every dimension: for y in the
// sine span, k^4 - P k^2 - Q >= -(P^2/4 + Q) with P, Q sup bounds of p and -q.
double positivity_shift_bound(const CoefficientPair& pair) noexcept;

}  // namespace twospec
