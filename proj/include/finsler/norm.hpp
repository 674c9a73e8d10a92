#pragma once

/**
 * @file norm.hpp
 * @brief Anisotropic norm calculus: F, its gradient/Hessian, the dual norm
 *        F0, and Wulff-ball geometry.
 *
 * A Norm models a convex, positively 1-homogeneous, even function F on R^N
 * that is C^2 away from the origin and positive on nonzero vectors.  The
 * dual norm is the support function of the unit ball K = {F < 1},
 *
 *     F0(x) = sup_{xi in K} <x, xi>,
 *
 * and the Wulff ball of radius r centred at x0 is {x : F0(x - x0) < r},
 * with kappa0 denoting the volume of the unit Wulff ball.
 *
 * Three families are provided:
 *   - euclidean: F = |xi| (self-dual);
 *   - ellipsoidal: F = sqrt(xi' A xi) with A symmetric positive definite,
 *     dual F0 = sqrt(x' A^{-1} x), all calculus in closed form;
 *   - perturbed (dimension 2): F = |xi| (1 + eps cos(k theta)), a smooth
 *     angular perturbation of the Euclidean norm.  It satisfies all the
 *     structural identities of a Finsler norm but deliberately violates the
 *     gradient-pairing identity <F_xi(x), F0_xi(y)> = <x,y>/(F(x) F0(y)),
 *     which characterises ellipsoidal norms; its dual is evaluated by a
 *     multi-start golden-section ascent.
 */

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace finsler {

enum class NormKind { Euclidean, Ellipsoidal, Perturbed };

std::string to_string(NormKind kind);

/// Parameter pack describing a norm; validated by Norm's constructor.
struct NormSpec {
    NormKind kind = NormKind::Euclidean;
    int dim = 2;
    Eigen::MatrixXd A;   ///< ellipsoidal matrix (SPD), ignored otherwise
    double eps = 0.0;    ///< perturbation amplitude
    int harmonic = 4;    ///< perturbation angular frequency (even)

    static NormSpec euclidean(int dim);
    static NormSpec ellipsoidal(Eigen::MatrixXd A);
    static NormSpec perturbed(double eps, int harmonic = 4);
};

/// Error raised when an iterative evaluation fails to meet its tolerance;
/// carries the best value found so callers can still inspect it.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double best_value)
        : std::runtime_error(what), best(best_value) {}
    double best;
};

class Norm {
public:
    explicit Norm(NormSpec spec);

    const NormSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }
    NormKind kind() const { return spec_.kind; }
    bool closed_form() const { return spec_.kind != NormKind::Perturbed; }

    /// F(xi); 0 iff xi = 0, positively 1-homogeneous, even.
    double eval(const Eigen::VectorXd& xi) const;

    /// F_xi(xi).  Throws std::domain_error at xi = 0 (F is not
    /// differentiable there).
    Eigen::VectorXd grad(const Eigen::VectorXd& xi) const;

    /// F_{xi xi}(xi).  Symmetric, annihilates xi, (-1)-homogeneous.
    /// Throws std::domain_error at xi = 0.
    Eigen::MatrixXd hess(const Eigen::VectorXd& xi) const;

    /// Dual norm F0(x).  Closed form for euclidean/ellipsoidal; golden
    /// section multi-start ascent otherwise (throws NumericError if the
    /// stationarity residual stays above tolerance).
    double dual(const Eigen::VectorXd& x) const;

    /// F0_xi(x) = the maximiser xi* of <x, .> over {F = 1} (envelope
    /// theorem).  Throws std::domain_error at x = 0.
    Eigen::VectorXd dual_grad(const Eigen::VectorXd& x) const;

    /// Volume of the Wulff ball of radius r: kappa0 * r^N.
    double wulff_volume(double r) const;

    /// kappa0 = |{F0 < 1}|.  Closed form omega_N sqrt(det A) for the
    /// ellipsoidal family; polar-slice quadrature otherwise.
    double kappa0() const { return kappa0_; }
    /// Estimated absolute error of kappa0 (0 for closed forms).
    double kappa0_error() const { return kappa0_err_; }

    /// Norm-equivalence bounds a|xi| <= F(xi) <= b|xi|.
    double a() const { return a_; }
    double b() const { return b_; }

    /// sqrt(det A) (1 for euclidean); the Jacobian of the linear map that
    /// turns Wulff balls of the ellipsoidal family into Euclidean balls.
    double sqrt_det_A() const { return sqrt_det_A_; }
    const Eigen::MatrixXd& A_inverse() const { return A_inv_; }

    /// Euclidean unit-ball volume omega_N.
    static double euclidean_ball_volume(int N);
    /// Surface measure of the Euclidean unit sphere S^{N-1} (= N omega_N).
    static double euclidean_sphere_area(int N);

private:
    NormSpec spec_;
    Eigen::MatrixXd A_inv_;
    double a_ = 1.0, b_ = 1.0;
    double kappa0_ = 0.0, kappa0_err_ = 0.0;
    double sqrt_det_A_ = 1.0;

    // Perturbation profile rho(theta) = 1 + eps cos(k theta) and derivatives.
    double rho(double theta) const;
    double drho(double theta) const;
    double d2rho(double theta) const;
    double dual_generic(const Eigen::VectorXd& x, Eigen::VectorXd* maximiser) const;
};

} // namespace finsler
