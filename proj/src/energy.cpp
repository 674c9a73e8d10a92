#include "finsler/energy.hpp"

#include "finsler/norm.hpp"
#include "finsler/quadrature.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace finsler {

std::string to_string(EnergyKind k) {
    switch (k) {
        case EnergyKind::Exponential: return "exponential";
        case EnergyKind::Power: return "power";
        case EnergyKind::NegativePower: return "negative-power";
    }
    return "unknown";
}

namespace {

/// integral_0^lambda density(r, phi, phi') r^{N-1} dr.  Analytic profiles are
/// integrated adaptively down to 0; sampled profiles must cover the origin
/// and are integrated cell-by-cell between their own grid nodes (the
/// interpolant is smooth inside each cell).
double bulk_integral(const RadialProfile& p, double lambda,
                     const std::function<double(double, double, double)>& density) {
    const int N = p.N;
    auto g = [&](double r) {
        return density(r, p.value(r), p.deriv(r)) * std::pow(r, N - 1);
    };
    if (p.analytic()) return integrate_to_zero(g, lambda, 1e-15, 8);
    if (p.r_min() > 0.0)
        throw std::domain_error("energy: sampled profile must cover the origin");
    std::vector<double> breaks;
    breaks.push_back(0.0);
    for (double r : p.r)
        if (r > 0.0 && r < lambda) breaks.push_back(r);
    breaks.push_back(lambda);
    return integrate_cells(g, breaks, 8);
}

void check_lambda(const RadialProfile& p, double lambda) {
    if (!(lambda > 0.0) || !p.covers(lambda))
        throw std::domain_error("energy: lambda outside profile support");
}

}  // namespace

double energy_exponential(const RadialProfile& profile, double lambda) {
    check_lambda(profile, lambda);
    const int N = profile.N;
    const double W = N * Norm::euclidean_ball_volume(N);
    const double bulk = W * bulk_integral(profile, lambda,
                                          [](double, double phi, double dphi) {
                                              return 0.5 * dphi * dphi - std::exp(phi);
                                          });
    const double boundary = 2.0 * W * (profile.value(lambda) + 2.0 * std::log(lambda));
    return std::pow(lambda, 2.0 - N) * bulk + boundary;
}

double energy_power(const RadialProfile& profile, double p, double lambda) {
    if (!(p > 1.0)) throw std::domain_error("energy_power: requires p > 1");
    check_lambda(profile, lambda);
    const int N = profile.N;
    const double W = N * Norm::euclidean_ball_volume(N);
    const double bulk =
        W * bulk_integral(profile, lambda, [p](double, double phi, double dphi) {
            return 0.5 * dphi * dphi - std::pow(phi, p + 1.0) / (p + 1.0);
        });
    const double phiL = profile.value(lambda);
    const double boundary = (1.0 / (p - 1.0)) *
                            std::pow(lambda, (p + 3.0) / (p - 1.0) - N) * W *
                            std::pow(lambda, N - 1.0) * phiL * phiL;
    return std::pow(lambda, (2.0 * p + 2.0) / (p - 1.0) - N) * bulk + boundary;
}

double energy_negative_power(const RadialProfile& profile, double p, double lambda) {
    if (!(p > 0.0)) throw std::domain_error("energy_negative_power: requires p > 0");
    check_lambda(profile, lambda);
    const int N = profile.N;
    const double W = N * Norm::euclidean_ball_volume(N);
    auto density = [p](double, double phi, double dphi) {
        if (!(phi > 0.0))
            throw std::domain_error("energy_negative_power: profile must be positive");
        const double kinetic = 0.5 * dphi * dphi;
        if (p == 1.0) return kinetic + std::log(phi);  // continuous limit of
                                                       // phi^{1-p}/(1-p) at p = 1
        return kinetic + std::pow(phi, 1.0 - p) / (1.0 - p);
    };
    const double bulk = W * bulk_integral(profile, lambda, density);
    const double phiL = profile.value(lambda);
    const double boundary = (1.0 / (p + 1.0)) *
                            std::pow(lambda, (p - 3.0) / (p + 1.0) - N) * W *
                            std::pow(lambda, N - 1.0) * phiL * phiL;
    return std::pow(lambda, (2.0 * p - 2.0) / (p + 1.0) - N) * bulk - boundary;
}

EnergyScan monotonicity_scan(EnergyKind kind, const RadialProfile& profile, double p,
                             const std::vector<double>& lambdas, bool negate) {
    if (lambdas.size() < 2)
        throw std::domain_error("monotonicity_scan: need at least two lambda values");
    for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
        if (!(lambdas[i] < lambdas[i + 1]))
            throw std::domain_error("monotonicity_scan: lambda grid must increase");

    EnergyScan scan;
    scan.kind = kind;
    scan.p = p;
    scan.negated = negate;
    scan.log_substitution = (kind == EnergyKind::NegativePower && p == 1.0);
    scan.lambda = lambdas;
    scan.value.reserve(lambdas.size());
    const double sign = negate ? -1.0 : 1.0;
    for (double L : lambdas) {
        double E = 0.0;
        switch (kind) {
            case EnergyKind::Exponential: E = energy_exponential(profile, L); break;
            case EnergyKind::Power: E = energy_power(profile, p, L); break;
            case EnergyKind::NegativePower:
                E = energy_negative_power(profile, p, L);
                break;
        }
        if (!std::isfinite(E))
            throw std::domain_error("monotonicity_scan: non-finite energy value");
        scan.value.push_back(sign * E);
        scan.value_scale = std::max(scan.value_scale, std::abs(E));
    }
    scan.forward_diff.resize(scan.value.size() - 1);
    scan.min_forward_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < scan.value.size(); ++i) {
        scan.forward_diff[i] = scan.value[i + 1] - scan.value[i];
        if (scan.forward_diff[i] < scan.min_forward_diff) {
            scan.min_forward_diff = scan.forward_diff[i];
            scan.min_index = static_cast<int>(i);
        }
    }
    return scan;
}

double spherical_mean_residual(const RadialProfile& profile, const Nonlinearity& f,
                               double r) {
    check_lambda(profile, r);
    const int N = profile.N;
    const double mean_flux =
        std::pow(r, 1.0 - N) *
        bulk_integral(profile, r,
                      [&f](double, double phi, double) { return f.f(phi); });
    return std::abs(-profile.deriv(r) - mean_flux);
}

}  // namespace finsler
