#pragma once

/**
 * @file norm_checks.hpp
 * @brief Structural-identity verifier for anisotropic norms.
 *
 * Samples pseudo-random points (deterministic for a given seed) and measures
 * the worst residual of every identity the rest of the toolkit relies on:
 *
 *   triangle                 |F(x)-F(y)| <= F(x+y) <= F(x)+F(y)
 *   gradient-bound           |F_xi(xi)| <= b
 *   euler                    <xi, F_xi(xi)> = F(xi),  <x, F0_xi(x)> = F0(x)
 *   hessian-kernel           F_xixi(xi) xi = 0
 *   dual-unit                F(F0_xi(x)) = 1,  F0(F_xi(xi)) = 1
 *   gradient-sign            F_xi(t xi) = sgn(t) F_xi(xi)
 *   dual-reconstruction      F0(x) F_xi(F0_xi(x)) = x
 *   norm-bounds              a|xi| <= F(xi) <= b|xi|
 *   tangential-hessian       V' F_xixi(xi) V in [lambda^2, Lambda] |V|^2
 *                            for V orthogonal to xi, |xi| = 1 (empirical
 *                            lambda^2 / Lambda are reported, not assumed)
 *   gradient-pairing         <F_xi(x), F0_xi(y)> = <x,y>/(F(x) F0(y))
 *
 * The gradient-pairing identity holds exactly for the ellipsoidal family and
 * fails for genuinely non-ellipsoidal norms; the verifier exists to measure
 * that, so failures are reported as data rather than thrown.
 */

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "finsler/norm.hpp"

namespace finsler {

struct PropertyResult {
    std::string name;
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    Eigen::VectorXd worst_sample;   ///< sample point achieving max_residual
};

struct NormPropertyReport {
    std::vector<PropertyResult> properties;
    int samples = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    // Empirical constants measured on the sample set.
    double a_empirical = 0.0;        ///< min F(xi)/|xi|
    double b_empirical = 0.0;        ///< max F(xi)/|xi|
    double lambda2_empirical = 0.0;  ///< min tangential Hessian quotient at |xi|=1
    double Lambda_empirical = 0.0;   ///< max tangential Hessian quotient at |xi|=1

    bool all_pass() const;
    const PropertyResult* find(const std::string& name) const;
};

/// Default identity tolerance: 1e-8 for closed-form norms, 1e-6 when the
/// generic dual-norm optimizer is involved.
double default_norm_tol(const Norm& norm);

/// Evaluate every identity at `samples` seeded points.
NormPropertyReport verify_properties(const Norm& norm, int samples,
                                     std::uint64_t seed, double tol);

} // namespace finsler
