#include "finsler/norm_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finsler/rng.hpp"

namespace finsler {

bool NormPropertyReport::all_pass() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.pass; });
}

const PropertyResult* NormPropertyReport::find(const std::string& name) const {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

double default_norm_tol(const Norm& norm) {
    return norm.closed_form() ? 1e-8 : 1e-6;
}

namespace {

struct Accumulator {
    double max_residual = -1.0;
    Eigen::VectorXd worst;

    void feed(double residual, const Eigen::VectorXd& sample) {
        if (residual > max_residual) {
            max_residual = residual;
            worst = sample;
        }
    }

    PropertyResult result(std::string name, double tol) const {
        PropertyResult r;
        r.name = std::move(name);
        r.max_residual = std::max(max_residual, 0.0);
        r.tol = tol;
        r.pass = r.max_residual <= tol;
        r.worst_sample = worst;
        return r;
    }
};

} // namespace

NormPropertyReport verify_properties(const Norm& norm, int samples,
                                     std::uint64_t seed, double tol) {
    if (samples < 1) throw std::domain_error("verify_properties: samples must be >= 1");
    if (tol <= 0.0) throw std::domain_error("verify_properties: tol must be > 0");

    const int n = norm.dim();
    Rng rng(seed);

    Accumulator triangle, grad_bound, euler, hess_kernel, dual_unit, grad_sign,
        dual_recon, bounds, tangential, pairing;

    double a_emp = std::numeric_limits<double>::infinity();
    double b_emp = 0.0;
    double lam2 = std::numeric_limits<double>::infinity();
    double Lam = 0.0;

    for (int s = 0; s < samples; ++s) {
        // Samples are drawn with |.| of order 1 so absolute residual
        // tolerances discriminate uniformly across identities.
        Eigen::VectorXd x = rng.nonzero_vector(n);
        Eigen::VectorXd y = rng.nonzero_vector(n);
        double t = rng.uniform(-2.0, 2.0);
        if (std::abs(t) < 1e-2) t = (t >= 0.0 ? 1e-2 : -1e-2);

        const double Fx = norm.eval(x);
        const double Fy = norm.eval(y);
        const double Fxy = norm.eval(x + y);

        // triangle: |F(x)-F(y)| <= F(x+y) <= F(x)+F(y)
        triangle.feed(std::max({0.0, std::abs(Fx - Fy) - Fxy, Fxy - Fx - Fy}), x);

        const Eigen::VectorXd gx = norm.grad(x);

        // gradient-bound with C identified as b
        grad_bound.feed(std::max(0.0, gx.norm() - norm.b()), x);

        // euler: <x, F_xi(x)> = F(x) and the dual counterpart
        const Eigen::VectorXd dgx = norm.dual_grad(x);
        const double F0x = norm.dual(x);
        euler.feed(std::max(std::abs(x.dot(gx) - Fx), std::abs(x.dot(dgx) - F0x)), x);

        // hessian-kernel: F_xixi(x) x = 0 (scaled by the Hessian magnitude)
        const Eigen::MatrixXd Hx = norm.hess(x);
        const double hscale = 1.0 + Hx.cwiseAbs().maxCoeff();
        hess_kernel.feed((Hx * x).cwiseAbs().maxCoeff() / hscale, x);

        // dual-unit: F(F0_xi(x)) = 1, F0(F_xi(x)) = 1
        dual_unit.feed(std::max(std::abs(norm.eval(dgx) - 1.0),
                                std::abs(norm.dual(gx) - 1.0)),
                       x);

        // gradient-sign: F_xi(t x) = sgn(t) F_xi(x)
        const double sgn = (t > 0.0) ? 1.0 : -1.0;
        grad_sign.feed((norm.grad(t * x) - sgn * gx).cwiseAbs().maxCoeff(), x);

        // dual-reconstruction: F0(x) F_xi(F0_xi(x)) = x
        dual_recon.feed((F0x * norm.grad(dgx) - x).cwiseAbs().maxCoeff(), x);

        // norm-bounds (and the empirical constants)
        const double ratio = Fx / x.norm();
        a_emp = std::min(a_emp, ratio);
        b_emp = std::max(b_emp, ratio);
        bounds.feed(std::max({0.0, norm.a() * x.norm() - Fx, Fx - norm.b() * x.norm()}), x);

        // tangential-hessian on |xi| = 1: quotient of the Hessian on xi-perp.
        Eigen::VectorXd u = x / x.norm();
        Eigen::VectorXd v = rng.nonzero_vector(n);
        v -= v.dot(u) * u;
        if (v.norm() > 1e-8) {
            v /= v.norm();
            const double q = v.dot(norm.hess(u) * v);
            lam2 = std::min(lam2, q);
            Lam = std::max(Lam, q);
            tangential.feed(std::max(0.0, -q), u);
        }

        // gradient-pairing: <F_xi(x), F0_xi(y)> = <x,y>/(F(x) F0(y))
        const double lhs = gx.dot(norm.dual_grad(y));
        const double rhs = x.dot(y) / (Fx * norm.dual(y));
        pairing.feed(std::abs(lhs - rhs), x);
    }

    NormPropertyReport report;
    report.samples = samples;
    report.seed = seed;
    report.tol = tol;
    report.a_empirical = a_emp;
    report.b_empirical = b_emp;
    report.lambda2_empirical = lam2;
    report.Lambda_empirical = Lam;
    report.properties.push_back(triangle.result("triangle", tol));
    report.properties.push_back(grad_bound.result("gradient-bound", tol));
    report.properties.push_back(euler.result("euler", tol));
    report.properties.push_back(hess_kernel.result("hessian-kernel", tol));
    report.properties.push_back(dual_unit.result("dual-unit", tol));
    report.properties.push_back(grad_sign.result("gradient-sign", tol));
    report.properties.push_back(dual_recon.result("dual-reconstruction", tol));
    report.properties.push_back(bounds.result("norm-bounds", tol));
    report.properties.push_back(tangential.result("tangential-hessian", tol));
    report.properties.push_back(pairing.result("gradient-pairing", tol));
    return report;
}

} // namespace finsler
