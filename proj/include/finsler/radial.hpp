#pragma once

/**
 * @file radial.hpp
 * @brief Radial calculus for anisotropic-radial fields u(x) = phi(F0(x-x0)).
 *
 * For such fields the anisotropic Laplacian Qu = div(F(grad u) F_xi(grad u))
 * reduces to the classical radial form
 *
 *     Qu = phi''(r) + (N-1) phi'(r) / r,        r = F0(x - x0),
 *
 * because the flux of a radial field is F(grad u) F_xi(grad u) =
 * phi'(r) (x-x0)/r; the reduction follows from the Euler identity
 * <x, F0_xi(x)> = F0(x), the unit relations F(F0_xi) = 1, and the
 * reconstruction identity F0(x) F_xi(F0_xi(x)) = x.  This makes anisotropic
 * radial problems exactly as cheap as isotropic ones, independent of the
 * norm (the norm enters only through kappa0 in volume factors).
 *
 * Provided profiles:
 *   - explicit_liouville (N = 2):   phi = -2 log(1 + lambda^2 r^2 / 8) + 2 log lambda,
 *     solving -Qu = e^u in the plane;
 *   - explicit_critical_power (N >= 3):
 *     phi = (lambda sqrt(N(N-2)) / (lambda^2 + r^2))^{(N-2)/2},
 *     solving -Qu = u^p at the critical exponent p = (N+2)/(N-2);
 *   - singular_log_solution (N >= 3): phi = -2 log r + log(2(N-2)),
 *     an exact singular solution of -Qu = e^u on r > 0;
 *   - shoot: a 4th-order integrator for phi'' = -(N-1) phi'/r - f(phi).
 */

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

/// Right-hand side f(u) of -Qu = f(u) together with its derivative.
struct Nonlinearity {
    enum class Kind { Zero, Exponential, Power, NegativePower };
    Kind kind = Kind::Zero;
    double p = 0.0;

    double f(double u) const;
    double df(double u) const;
    std::string name() const;

    static Nonlinearity zero();
    static Nonlinearity exponential();
    static Nonlinearity power(double p);
    static Nonlinearity negative_power(double p);
    static Nonlinearity from_name(const std::string& name, double p);
};

enum class Provenance { ExplicitLiouville, ExplicitCritical, SingularLog, Shot, External };

std::string to_string(Provenance p);

/// Error thrown when the shooting integrator hits the overflow guard; the
/// profile integrated so far is carried along for inspection.
class BlowupError;

/// Sampled radial profile phi(r) with derivative data.  Explicit kinds also
/// carry analytic evaluators valid on all of (0, inf) (and at 0 when the
/// origin is regular); sampled kinds interpolate with cubic Hermite inside
/// the grid hull and refuse evaluation outside it.
struct RadialProfile {
    std::vector<double> r;      ///< strictly increasing, r.front() >= 0
    std::vector<double> phi;
    std::vector<double> dphi;
    int N = 2;
    bool origin_regular = true;
    Provenance provenance = Provenance::External;
    bool truncated = false;          ///< shoot hit the overflow guard
    double blowup_radius = 0.0;      ///< valid when truncated
    std::map<std::string, double> params;

    std::function<double(double)> phi_fn, dphi_fn, d2phi_fn;  ///< analytic, optional

    bool analytic() const { return static_cast<bool>(phi_fn); }
    double r_min() const { return r.front(); }
    double r_max() const { return r.back(); }
    bool covers(double rr) const;

    double value(double rr) const;
    double deriv(double rr) const;
    /// Second derivative: analytic when available, otherwise 4th-order
    /// finite differences of the stored first derivative (uniform grid).
    double deriv2(double rr) const;

    void validate() const;

    /// Second-derivative samples on the grid (see deriv2); computed once
    /// and cached (profiles are treated as immutable after construction).
    const std::vector<double>& deriv2_samples() const;

private:
    mutable std::vector<double> d2_cache_;
};

/// Uniform grid helper: `points` nodes from a to b inclusive.
std::vector<double> uniform_grid(double a, double b, int points);

/// Logarithmically spaced grid: `points` nodes from a to b inclusive, a > 0.
std::vector<double> geometric_grid(double a, double b, int points);

/// Profile from analytic callables (provenance External).  `d2phi` may be
/// empty, in which case second derivatives fall back to finite differences.
RadialProfile analytic_profile(std::vector<double> grid, int N, bool origin_regular,
                               std::function<double(double)> phi,
                               std::function<double(double)> dphi,
                               std::function<double(double)> d2phi = {});

RadialProfile explicit_liouville(double lambda, std::vector<double> grid = {});
RadialProfile explicit_critical_power(double lambda, int N, std::vector<double> grid = {});
RadialProfile singular_log_solution(int N, std::vector<double> grid = {});

/// Sampled profile from caller data (provenance External); derivatives are
/// rebuilt by 4th-order finite differences if `dphi` is empty.
RadialProfile external_profile(std::vector<double> r, std::vector<double> phi,
                               std::vector<double> dphi, int N, bool origin_regular);

/// Qu = phi'' + (N-1) phi'/r sampled on the profile grid; at r = 0 (regular
/// origin) the limit N phi''(0) is used.
std::vector<double> radial_operator(const RadialProfile& profile);

/// max over the grid of |-(phi'' + (N-1) phi'/r) - f(phi)| / (1 + |f(phi)|).
double residual(const RadialProfile& profile, const Nonlinearity& f);

/// Integrate phi'' = -(N-1) phi'/r - f(phi), phi(0) = u0, phi'(0) = 0 with
/// classical RK4 on a uniform grid of `steps` intervals over [0, r_max].
/// The 0/0 origin is handled by a series start on [0, 10 h].  Throws
/// BlowupError if |phi| or |phi'| exceeds the overflow guard.
RadialProfile shoot(const Nonlinearity& f, int N, double u0, double r_max, int steps);

class BlowupError : public std::runtime_error {
public:
    BlowupError(double radius, RadialProfile partial)
        : std::runtime_error("shoot: solution blew up at r = " + std::to_string(radius)),
          blowup_radius(radius), profile(std::move(partial)) {}
    double blowup_radius;
    RadialProfile profile;
};

} // namespace finsler
