#include "finsler/eig.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>

namespace finsler {

namespace {

/// Number of eigenvalues of (K - sigma M) below zero, by Sylvester's law:
/// equals the count of negative pivots in an LDL^T factorization.
/// Returns -1 if the factorization fails (sigma too close to an eigenvalue).
int inertia_below(const SpMat& K, const SpMat& M, double sigma) {
    SpMat A = K - sigma * M;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) return -1;
    const auto& D = ldlt.vectorD();
    int count = 0;
    for (Eigen::Index i = 0; i < D.size(); ++i) {
        if (!(D[i] > 0.0) && !(D[i] < 0.0)) return -1;  // zero or NaN pivot
        if (D[i] < 0.0) ++count;
    }
    return count;
}

/// Inertia count with a small shift retry when the factorization breaks down.
int inertia_below_robust(const SpMat& K, const SpMat& M, double sigma,
                         double scale) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        const double jitter = attempt == 0 ? 0.0
                                           : scale * 1e-12 * std::pow(10.0, attempt) *
                                                 (attempt % 2 == 0 ? 1.0 : -1.0);
        const int n = inertia_below(K, M, sigma + jitter);
        if (n >= 0) return n;
    }
    throw std::runtime_error("eig: LDLT factorization failed near shift");
}

double max_abs(const SpMat& A) {
    double m = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

}  // namespace

EigResult smallest_generalized_eigenpair(const SpMat& K, const SpMat& M,
                                         double tol) {
    if (K.rows() != K.cols() || M.rows() != M.cols() || K.rows() != M.rows())
        throw std::invalid_argument("eig: matrix dimensions must agree");
    const Eigen::Index n = K.rows();
    if (n == 0) throw std::invalid_argument("eig: empty pencil");

    // Scale used to pick bracketing shifts and jitters.
    const double kk = max_abs(K);
    const double mm = max_abs(M);
    if (mm == 0.0) throw std::invalid_argument("eig: mass matrix is zero");
    const double scale = std::max(1.0, kk / mm);

    // Bracket the smallest eigenvalue: find lo with inertia 0 (no eigenvalue
    // below lo) and hi with inertia >= 1.
    double lo = 0.0, hi = 0.0;
    {
        double s = scale;
        bool have_lo = false, have_hi = false;
        for (int attempt = 0; attempt < 80 && !(have_lo && have_hi); ++attempt) {
            if (!have_hi) {
                const int c = inertia_below_robust(K, M, s, scale);
                if (c >= 1) { hi = s; have_hi = true; }
            }
            if (!have_lo) {
                const int c = inertia_below_robust(K, M, -s, scale);
                if (c == 0) { lo = -s; have_lo = true; }
            }
            s *= 2.0;
        }
        if (!have_lo || !have_hi)
            throw std::runtime_error("eig: failed to bracket smallest eigenvalue");
    }

    // Bisect until the bracket is tight relative to its magnitude.
    for (int it = 0; it < 200 && hi - lo > 1e-8 * (std::abs(lo) + std::abs(hi) + 1.0);
         ++it) {
        const double mid = 0.5 * (lo + hi);
        const int c = inertia_below_robust(K, M, mid, scale);
        if (c == 0)
            lo = mid;
        else
            hi = mid;
    }

    // Shifted inverse iteration from just below the eigenvalue.  The shifted
    // matrix is symmetric but possibly indefinite, so factor with SparseLU.
    const double width = hi - lo;
    double sigma = lo - std::max(width, 1e-10 * (std::abs(lo) + 1.0));

    Eigen::SparseLU<SpMat> lu;
    {
        SpMat A = K - sigma * M;
        A.makeCompressed();
        lu.compute(A);
        for (int attempt = 1; lu.info() != Eigen::Success && attempt < 6; ++attempt) {
            sigma -= std::max(width, 1e-8 * scale) * attempt;
            A = K - sigma * M;
            A.makeCompressed();
            lu.compute(A);
        }
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("eig: LU factorization for inverse iteration failed");
    }

    // Deterministic start vector with no special symmetry.
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x[i] = 1.0 + 0.001 * std::sin(3.0 * static_cast<double>(i) + 1.0);
    x /= std::sqrt(x.dot(M * x));

    double lambda = 0.5 * (lo + hi);
    int iters = 0;
    for (; iters < 500; ++iters) {
        Eigen::VectorXd y = lu.solve(M * x);
        const double norm = std::sqrt(y.dot(M * y));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw std::runtime_error("eig: inverse iteration produced invalid vector");
        y /= norm;
        const double rq = y.dot(K * y) / y.dot(M * y);
        const bool converged =
            std::abs(rq - lambda) <= tol * (std::abs(rq) + std::abs(lambda) + 1e-30);
        lambda = rq;
        x = y;
        if (converged && iters >= 1) break;
    }

    EigResult out;
    out.value = lambda;
    out.vector = x / std::sqrt(x.dot(M * x));
    out.iterations = iters;
    const Eigen::VectorXd r = K * out.vector - lambda * (M * out.vector);
    const double denom = std::max(1.0, (K * out.vector).cwiseAbs().maxCoeff());
    out.residual = r.cwiseAbs().maxCoeff() / denom;
    return out;
}

}  // namespace finsler
