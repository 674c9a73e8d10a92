#pragma once

/// Sparse symmetric generalized eigenvalue solver.
///
/// Computes the smallest eigenvalue of K x = lambda M x for sparse symmetric
/// K and symmetric positive definite M.  The algorithm brackets the smallest
/// eigenvalue by counting matrix inertia of (K - sigma M) with a sparse LDL^T
/// factorization (Sylvester's law of inertia), bisects the bracket to modest
/// accuracy, and then polishes the eigenpair with shifted inverse iteration.
/// This is robust for the stiffness/mass pencils produced by the quadratic
/// form assembly in this project, including indefinite K.

#include <Eigen/Sparse>

namespace finsler {

using SpMat = Eigen::SparseMatrix<double>;

/// Result of a generalized eigenvalue computation.
struct EigResult {
    double value = 0.0;           ///< smallest eigenvalue of K x = lambda M x
    Eigen::VectorXd vector;       ///< eigenvector, normalized so x^T M x = 1
    int iterations = 0;           ///< inverse-iteration steps used
    double residual = 0.0;        ///< ||K x - lambda M x||_inf / ||K x||_inf scale
};

/// Smallest eigenpair of the symmetric pencil (K, M), M positive definite.
///
/// `tol` is the relative tolerance on the eigenvalue.  Throws
/// std::runtime_error if the factorization repeatedly fails or the
/// iteration stagnates.
EigResult smallest_generalized_eigenpair(const SpMat& K, const SpMat& M,
                                         double tol = 1e-11);

}  // namespace finsler
