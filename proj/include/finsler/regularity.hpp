#pragma once

/// Singularity detection for semilinear fields:
///
///  - epsilon_scan evaluates the scale-invariant quantity
///        q(x, r) = r^{2p-N} int_{B_r(x)} e^{p u}
///    over Wulff balls B_r(x) = {F0(y - x) < r} and flags candidate singular
///    centers: those whose quantity exceeds a threshold at EVERY tested
///    radius.  (A bounded field always decays: q <= e^{pM} kappa0 r^{2p}.)
///  - morrey_norm estimates the Morrey seminorm
///        sup over balls of r^{-N(1-1/p)} int_{B_r within Omega} |f|
///    from below by a max over tested (center, radius) pairs.
///  - decay_probe measures the one-step decay pair
///        q_outer = 2^{2-N} int_{B_2} e^u,   q_inner = r^{2-N} int_{B_r} e^u
///    and their ratio.  It reports measurements only; the threshold below
///    which boundedness follows is non-constructive.
///
/// Radial fields are reduced to 1D quadrature: on-center balls via the
/// volume slicing int_{B_r} g(F0) = N kappa0 int_0^r g(s) s^{N-1} ds (any
/// norm), off-center balls for closed-form (euclidean/ellipsoidal) norms via
/// the linear change of variables that maps Wulff balls to Euclidean balls
/// followed by spherical-cap slicing.  Grid fields use cell-mask summation.

#include "finsler/bvp.hpp"
#include "finsler/norm.hpp"
#include "finsler/radial.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <vector>

namespace finsler {

/// Integral of a density radial in F0 over the Wulff ball of radius `r`
/// centered at dual distance `dist` from the origin:
///     int_{ {F0(y - x) < r} } g(F0(y)) dy,   F0(x) = dist.
/// `radial_mass` must return the weighted density g(s) * s^{N-1} (callers
/// assemble it in log space when g is steep near 0); it is taken as 0
/// outside [s_min, s_max], and `clipped` (if non-null) reports whether the
/// ball reached beyond that band.  Off-center integrals (dist > 0) require a
/// closed-form norm.
double wulff_ball_integral(const Norm& norm, int N,
                           const std::function<double(double)>& radial_mass,
                           double dist, double r, double s_min = 0.0,
                           double s_max = std::numeric_limits<double>::infinity(),
                           bool* clipped = nullptr);

struct CenterVerdict {
    double dist = 0.0;                 ///< radial case: F0-distance of the center
    Eigen::Vector2d center = Eigen::Vector2d::Zero();  ///< grid case: the point
    std::vector<double> radii;         ///< tested radii
    std::vector<double> quantity;      ///< per radius (NaN where skipped)
    std::vector<bool> skipped;         ///< ball left the field's domain
    bool flagged = false;              ///< quantity > epsilon at every tested radius
    int tested = 0;                    ///< number of non-skipped radii
};

struct SingularityReport {
    double p = 0.0;
    double epsilon = 0.0;
    std::vector<CenterVerdict> centers;
    std::vector<std::size_t> flagged;  ///< indices of flagged centers
};

/// Radial field u = phi(F0(y)).  Centers are given by their dual distance
/// from the origin (the quantity depends on the center only through it).
SingularityReport epsilon_scan(const RadialProfile& profile, const Norm& norm,
                               double p, double epsilon,
                               const std::vector<double>& center_dists,
                               const std::vector<double>& radii);

/// Grid field (N = 2).  Balls are unions of grid cells by cell-center
/// membership; a (center, radius) pair whose ball is not fully covered by
/// complete grid cells is skipped and reported.
SingularityReport epsilon_scan(const GridDomain2D& domain, const std::vector<double>& u,
                               const Norm& norm, double p, double epsilon,
                               const std::vector<Eigen::Vector2d>& centers,
                               const std::vector<double>& radii);
SingularityReport epsilon_scan(const DiscreteSolution2D& field, double p, double epsilon,
                               const std::vector<Eigen::Vector2d>& centers,
                               const std::vector<double>& radii);

/// Morrey-seminorm lower bound for |f| radial in F0 with support (coverage)
/// in [s_min, s_max]: max over tested pairs of r^{-N(1-1/p)} * the clipped
/// ball integral.  Balls are intersected with the coverage band, never
/// skipped.
double morrey_norm(const Norm& norm, int N, double p,
                   const std::function<double(double)>& abs_density,
                   double s_min, double s_max,
                   const std::vector<double>& center_dists,
                   const std::vector<double>& radii);

/// Grid variant: |f| given per node, summed over complete cells whose center
/// lies in the ball (intersection with the domain is automatic).
double morrey_norm(const GridDomain2D& domain, const std::vector<double>& f,
                   const Norm& norm, double p,
                   const std::vector<Eigen::Vector2d>& centers,
                   const std::vector<double>& radii);

struct DecayProbe {
    double r_outer = 2.0;
    double r_inner = 0.25;
    double q_outer = 0.0;  ///< r_outer^{2-N} int_{B_outer} e^u
    double q_inner = 0.0;  ///< r_inner^{2-N} int_{B_inner} e^u
    double ratio = 0.0;    ///< q_inner / q_outer
};

/// One-step decay measurement for a radial field (balls centered at 0).
DecayProbe decay_probe(const RadialProfile& profile, const Norm& norm,
                       double r_inner = 0.25, double r_outer = 2.0);

/// Grid variant (N = 2), field on a domain containing B_{r_outer}(0).
DecayProbe decay_probe(const GridDomain2D& domain, const std::vector<double>& u,
                       const Norm& norm, double r_inner = 0.25, double r_outer = 2.0);
DecayProbe decay_probe(const DiscreteSolution2D& field, double r_inner = 0.25,
                       double r_outer = 2.0);

}  // namespace finsler
