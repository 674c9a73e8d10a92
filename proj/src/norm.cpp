#include "finsler/norm.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "finsler/quadrature.hpp"

namespace finsler {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
} // namespace

std::string to_string(NormKind kind) {
    switch (kind) {
        case NormKind::Euclidean: return "euclidean";
        case NormKind::Ellipsoidal: return "ellipsoidal";
        case NormKind::Perturbed: return "perturbed";
    }
    return "unknown";
}

NormSpec NormSpec::euclidean(int dim) {
    NormSpec s;
    s.kind = NormKind::Euclidean;
    s.dim = dim;
    return s;
}

NormSpec NormSpec::ellipsoidal(Eigen::MatrixXd A) {
    NormSpec s;
    s.kind = NormKind::Ellipsoidal;
    s.dim = static_cast<int>(A.rows());
    s.A = std::move(A);
    return s;
}

NormSpec NormSpec::perturbed(double eps, int harmonic) {
    NormSpec s;
    s.kind = NormKind::Perturbed;
    s.dim = 2;
    s.eps = eps;
    s.harmonic = harmonic;
    return s;
}

double Norm::euclidean_ball_volume(int N) {
    return std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

double Norm::euclidean_sphere_area(int N) {
    return N * euclidean_ball_volume(N);
}

Norm::Norm(NormSpec spec) : spec_(std::move(spec)) {
    if (spec_.dim < 2) throw std::domain_error("Norm: dimension must be >= 2");
    switch (spec_.kind) {
        case NormKind::Euclidean: {
            a_ = b_ = 1.0;
            kappa0_ = euclidean_ball_volume(spec_.dim);
            A_inv_ = Eigen::MatrixXd::Identity(spec_.dim, spec_.dim);
            spec_.A = A_inv_;
            break;
        }
        case NormKind::Ellipsoidal: {
            const Eigen::MatrixXd& A = spec_.A;
            if (A.rows() != spec_.dim || A.cols() != spec_.dim)
                throw std::domain_error("Norm: ellipsoidal matrix must be N x N");
            if ((A - A.transpose()).cwiseAbs().maxCoeff() >
                1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
                throw std::domain_error("Norm: ellipsoidal matrix must be symmetric");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
            const double min_ev = es.eigenvalues().minCoeff();
            const double max_ev = es.eigenvalues().maxCoeff();
            if (min_ev <= 0.0)
                throw std::domain_error("Norm: ellipsoidal matrix must be positive definite");
            a_ = std::sqrt(min_ev);
            b_ = std::sqrt(max_ev);
            A_inv_ = A.inverse();
            double det = 1.0;
            for (int i = 0; i < es.eigenvalues().size(); ++i) det *= es.eigenvalues()[i];
            sqrt_det_A_ = std::sqrt(det);
            kappa0_ = euclidean_ball_volume(spec_.dim) * sqrt_det_A_;
            break;
        }
        case NormKind::Perturbed: {
            if (spec_.dim != 2)
                throw std::domain_error("Norm: the perturbed family is two-dimensional");
            if (spec_.harmonic < 2 || spec_.harmonic % 2 != 0)
                throw std::domain_error("Norm: perturbation harmonic must be even and >= 2");
            const double k2 = static_cast<double>(spec_.harmonic) * spec_.harmonic;
            // Convexity of F = r rho(theta) requires rho + rho'' > 0, i.e.
            // 1 - eps (k^2 - 1) > 0; amplitudes at or beyond the threshold
            // produce a non-convex "norm" and are rejected.
            const double threshold = 1.0 / (k2 - 1.0);
            if (spec_.eps < 0.0 || spec_.eps >= threshold)
                throw std::domain_error(
                    "Norm: perturbation amplitude breaks convexity (needs eps < 1/(k^2-1) = " +
                    std::to_string(threshold) + ")");
            a_ = 1.0 - spec_.eps;
            b_ = 1.0 + spec_.eps;
            A_inv_ = Eigen::MatrixXd::Identity(2, 2);
            // kappa0 by the polar slice formula |{F0<1}| = 1/2 int R(alpha)^2,
            // R(alpha) = 1/F0(e(alpha)); error estimated by panel doubling.
            auto slice = [this](double alpha) {
                Eigen::Vector2d e(std::cos(alpha), std::sin(alpha));
                const double r = dual(e);
                return 0.5 / (r * r);
            };
            const double coarse = integrate(slice, 0.0, kTwoPi, 256, 4);
            const double fine = integrate(slice, 0.0, kTwoPi, 512, 4);
            kappa0_ = fine;
            kappa0_err_ = std::abs(fine - coarse);
            break;
        }
    }
}

double Norm::rho(double theta) const {
    return 1.0 + spec_.eps * std::cos(spec_.harmonic * theta);
}
double Norm::drho(double theta) const {
    return -spec_.eps * spec_.harmonic * std::sin(spec_.harmonic * theta);
}
double Norm::d2rho(double theta) const {
    const double k2 = static_cast<double>(spec_.harmonic) * spec_.harmonic;
    return -spec_.eps * k2 * std::cos(spec_.harmonic * theta);
}

double Norm::eval(const Eigen::VectorXd& xi) const {
    switch (spec_.kind) {
        case NormKind::Euclidean: return xi.norm();
        case NormKind::Ellipsoidal: return std::sqrt(xi.dot(spec_.A * xi));
        case NormKind::Perturbed: {
            const double r = xi.norm();
            if (r == 0.0) return 0.0;
            return r * rho(std::atan2(xi[1], xi[0]));
        }
    }
    return 0.0;
}

Eigen::VectorXd Norm::grad(const Eigen::VectorXd& xi) const {
    if (xi.norm() == 0.0)
        throw std::domain_error("Norm::grad: F is not differentiable at the origin");
    switch (spec_.kind) {
        case NormKind::Euclidean: return xi / xi.norm();
        case NormKind::Ellipsoidal: {
            Eigen::VectorXd Axi = spec_.A * xi;
            return Axi / std::sqrt(xi.dot(Axi));
        }
        case NormKind::Perturbed: {
            const double theta = std::atan2(xi[1], xi[0]);
            const Eigen::Vector2d er(std::cos(theta), std::sin(theta));
            const Eigen::Vector2d et(-std::sin(theta), std::cos(theta));
            return rho(theta) * er + drho(theta) * et;
        }
    }
    return xi;
}

Eigen::MatrixXd Norm::hess(const Eigen::VectorXd& xi) const {
    const double r = xi.norm();
    if (r == 0.0)
        throw std::domain_error("Norm::hess: F is not twice differentiable at the origin");
    switch (spec_.kind) {
        case NormKind::Euclidean: {
            const int n = dim();
            Eigen::VectorXd u = xi / r;
            return (Eigen::MatrixXd::Identity(n, n) - u * u.transpose()) / r;
        }
        case NormKind::Ellipsoidal: {
            const Eigen::MatrixXd& A = spec_.A;
            Eigen::VectorXd Axi = A * xi;
            const double F = std::sqrt(xi.dot(Axi));
            return A / F - (Axi * Axi.transpose()) / (F * F * F);
        }
        case NormKind::Perturbed: {
            const double theta = std::atan2(xi[1], xi[0]);
            const Eigen::Vector2d et(-std::sin(theta), std::cos(theta));
            // 1-homogeneity forces the rank-one tangential form
            // F_xixi = (rho + rho'')/|xi| e_theta e_theta'.
            return ((rho(theta) + d2rho(theta)) / r) * (et * et.transpose());
        }
    }
    return Eigen::MatrixXd();
}

double Norm::dual(const Eigen::VectorXd& x) const {
    switch (spec_.kind) {
        case NormKind::Euclidean: return x.norm();
        case NormKind::Ellipsoidal: return std::sqrt(x.dot(A_inv_ * x));
        case NormKind::Perturbed: {
            if (x.norm() == 0.0) return 0.0;
            return dual_generic(x, nullptr);
        }
    }
    return 0.0;
}

Eigen::VectorXd Norm::dual_grad(const Eigen::VectorXd& x) const {
    if (x.norm() == 0.0)
        throw std::domain_error("Norm::dual_grad: F0 is not differentiable at the origin");
    switch (spec_.kind) {
        case NormKind::Euclidean: return x / x.norm();
        case NormKind::Ellipsoidal: {
            Eigen::VectorXd Ax = A_inv_ * x;
            return Ax / std::sqrt(x.dot(Ax));
        }
        case NormKind::Perturbed: {
            Eigen::VectorXd maximiser;
            dual_generic(x, &maximiser);
            return maximiser;
        }
    }
    return x;
}

double Norm::dual_generic(const Eigen::VectorXd& x, Eigen::VectorXd* maximiser) const {
    // Maximise g(alpha) = <x, e(alpha)> / F(e(alpha)) over the circle.
    // The objective is smooth and the feasible set is the boundary of a
    // convex body, so the global maximum is found by golden-section ascent
    // from 32 equispaced starts.
    auto value = [this, &x](double alpha) {
        Eigen::Vector2d e(std::cos(alpha), std::sin(alpha));
        return (x[0] * e[0] + x[1] * e[1]) / eval(e);
    };
    const int starts = 32;
    double best_val = -1e300;
    double best_alpha = 0.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int s = 0; s < starts; ++s) {
        // Bracket around each start with the neighbouring starts.
        double lo = kTwoPi * (s - 1.0) / starts;
        double hi = kTwoPi * (s + 1.0) / starts;
        double c = hi - gr * (hi - lo);
        double d = lo + gr * (hi - lo);
        double fc = value(c), fd = value(d);
        for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
            if (fc > fd) {
                hi = d; d = c; fd = fc;
                c = hi - gr * (hi - lo);
                fc = value(c);
            } else {
                lo = c; c = d; fc = fd;
                d = lo + gr * (hi - lo);
                fd = value(d);
            }
        }
        const double alpha = 0.5 * (lo + hi);
        const double v = value(alpha);
        if (v > best_val) {
            best_val = v;
            best_alpha = alpha;
        }
    }
    // Stationarity residual of the angular derivative at the winner.
    const double h = 1e-6;
    const double stat = std::abs(value(best_alpha + h) - value(best_alpha - h)) / (2.0 * h);
    if (stat > 1e-10 * (1.0 + std::abs(best_val)) * 1e4) {
        // Residual far above the golden-section floor: report non-convergence
        // but carry the best value found.
        throw NumericError("Norm::dual: support maximisation did not reach stationarity",
                           best_val);
    }
    if (maximiser != nullptr) {
        Eigen::Vector2d e(std::cos(best_alpha), std::sin(best_alpha));
        *maximiser = e / eval(e);
    }
    return best_val;
}

double Norm::wulff_volume(double r) const {
    if (r <= 0.0) throw std::domain_error("Norm::wulff_volume: radius must be > 0");
    return kappa0_ * std::pow(r, dim());
}

} // namespace finsler
