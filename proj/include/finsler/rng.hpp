#pragma once

/**
 * @file rng.hpp
 * @brief Deterministic, seedable random sampling used by all property sweeps.
 *
 * Every stochastic check in the toolkit draws from this generator so that a
 * (config, seed) pair reproduces byte-identical results.  The uniform and
 * normal transforms are written out explicitly (rather than relying on
 * std::uniform_real_distribution, whose output is implementation-defined)
 * to keep sequences stable across standard libraries.
 */

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace finsler {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        const std::uint64_t bits = engine_();
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (always consumes two uniforms).
    double normal() {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return radius * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Standard normal vector of length n.
    Eigen::VectorXd normal_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    /// Nonzero sample with Euclidean length bounded away from 0 (resampled).
    Eigen::VectorXd nonzero_vector(int n, double min_len = 1e-3) {
        for (;;) {
            Eigen::VectorXd v = normal_vector(n);
            if (v.norm() >= min_len) return v;
        }
    }

    /// Uniform point on the Euclidean unit sphere S^{n-1}.
    Eigen::VectorXd unit_vector(int n) {
        Eigen::VectorXd v = nonzero_vector(n);
        return v / v.norm();
    }

    /// Integer in [0, n).
    std::uint64_t index(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

} // namespace finsler
