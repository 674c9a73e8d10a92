#pragma once

/// Integral inequalities and identities tied to the anisotropic calculus:
///
///  - weighted Hardy inequality
///        |(N-s)/s|^s * int |phi|^s / F0(x)^s dx  <=  int |(x/F0(x)) . grad phi|^s dx
///    For test functions radial in F0, phi = psi(F0(x)), both sides reduce to
///    1D weighted integrals and the Wulff-ball volume cancels, so the check
///    is independent of the norm.
///  - anisotropic perimeter P_F(E) = sum over boundary segments of F(nu) |e|
///    and the isoperimetric inequality P_F >= N kappa0^{1/N} |E|^{1-1/N},
///    with equality exactly on Wulff balls.
///  - co-area identity  -d/dt int_{u>t} F(grad u) dx = P_F({u > t}).
///  - capacity scaling: growth exponent of I(R) = int_{B_R} density(u) dx
///    for radial fields, compared with the cutoff-scaling prediction.

#include "finsler/bvp.hpp"
#include "finsler/geometry.hpp"
#include "finsler/norm.hpp"
#include "finsler/radial.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace finsler {

// ------------------------------------------------------------------- Hardy

struct HardyBump {
    double center = 0.0, width = 0.0;  ///< psi = exp(-1/(1-z^2)), z = (r-c)/w
};

struct HardyResult {
    double s = 0.0;
    int N = 0;
    double threshold = 0.0;           ///< |(N-s)/s|^s
    std::vector<double> ratios;       ///< RHS / (threshold * LHS), one per test
    double min_ratio = 0.0;
    std::size_t worst_index = 0;
    std::vector<HardyBump> tests;
};

/// Seeded sweep of radial bump test functions.  `origin_avoiding` keeps all
/// supports at distance >= 0.5 from the origin (required when s > N).
HardyResult hardy_check(int N, double s, int test_count, std::uint64_t seed,
                        bool origin_avoiding = false);

/// Normalized Hardy ratio for one explicit bump.
double hardy_ratio(int N, double s, const HardyBump& bump);

/// Normalized ratio for an arbitrary radial test supported in [lo, hi].
/// Returns nullopt when the test is numerically zero (zero-guard skip).
std::optional<double> hardy_ratio_radial(int N, double s,
                                         const std::function<double(double)>& psi,
                                         const std::function<double(double)>& dpsi,
                                         double lo, double hi);

/// Near-extremal profile: psi(r) = r^{-(N-s)/s} * cutoff, evaluated in the
/// substitution t = log r where the ratio becomes
/// int |chi' - k chi|^s dt / (k^s int |chi|^s dt), k = (N-s)/s, with chi a
/// smoothstep trapezoid (ramp width W, plateau width P).  Tends to 1 as the
/// plateau widens.
double hardy_extremal_ratio(int N, double s, double ramp_width, double plateau_width);

// --------------------------------------------------- perimeter / isoperimetric

/// Anisotropic perimeter of a polygon: sum of F(outward unit normal) * length.
double anisotropic_perimeter(const Polygon& shape, const Norm& norm);

struct IsoperimetricResult {
    double perimeter = 0.0;  ///< P_F(E)
    double area = 0.0;       ///< |E|
    double bound = 0.0;      ///< N kappa0^{1/N} |E|^{1-1/N}
    double deficit = 0.0;    ///< perimeter - bound  (>= 0 up to tolerance)
};
IsoperimetricResult isoperimetric_check(const Polygon& shape, const Norm& norm);

// ------------------------------------------------------------------- co-area

struct CoareaLevel {
    double t = 0.0;
    bool skipped = false;          ///< level too close to critical values
    bool touches_boundary = false; ///< level band reaches the domain edge
    double lhs = 0.0;              ///< -dA/dt, A(t) = int_{u>t} F(grad u)
    double rhs = 0.0;              ///< P_F({u > t}) from marching squares
    double residual = 0.0;         ///< |lhs-rhs| / max(|rhs|, floor)
};

struct CoareaResult {
    std::vector<CoareaLevel> levels;
    double max_residual = 0.0;     ///< over non-skipped levels
    int evaluated = 0;
};

/// Compare -dA/dt against the extracted anisotropic perimeter on each level
/// of `t_grid`.  `u` holds nodal values on the domain (as GridDomain2D).
/// Levels where the band gradient drops below 5% of the field maximum are
/// skipped and reported.  `dt` is the half-width of the central difference
/// (default: 1e-3 of the value range).
CoareaResult coarea_check(const GridDomain2D& domain, const std::vector<double>& u,
                          const Norm& norm, const std::vector<double>& t_grid,
                          double dt = 0.0);

// ---------------------------------------------------------- capacity scaling

struct CapacityFit {
    std::vector<double> R;      ///< tested radii
    std::vector<double> I;      ///< integrals N kappa0 int_0^R density s^{N-1} ds
    double slope = 0.0;         ///< least-squares slope of log I vs log R
    double intercept = 0.0;
};

/// Growth of I(R) = integral of the density over B_R for a radial field.
/// Densities by kind: exponential -> e^{(alpha+1) phi}; power ->
/// phi^{p+2alpha-1}; negative power -> phi^{-2alpha-p-1}.
CapacityFit capacity_scaling(const RadialProfile& profile, Nonlinearity::Kind kind,
                             double p, double alpha, const std::vector<double>& R_grid);

}  // namespace finsler
