#pragma once

#include <Eigen/Core>

namespace twospec {

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column i belongs to values(i)
    int sweeps = 0;
};

// Cyclic Jacobi with the relative off-diagonal threshold
// |a_pq| <= eps * sqrt(|a_pp a_qq|). On graded matrices (the Galerkin matrix
// is diag(k^4) plus a small relative perturbation) this keeps each eigenvalue
// accurate relative to its own size, not to ||A||.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& matrix, int max_sweeps = 60);

}  // namespace twospec
