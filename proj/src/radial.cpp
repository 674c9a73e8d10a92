#include "finsler/radial.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

// ---------------------------------------------------------------- Nonlinearity

double Nonlinearity::f(double u) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Exponential: return std::exp(u);
        case Kind::Power: return std::pow(u, p);
        case Kind::NegativePower:
            if (u <= 0.0)
                throw std::domain_error("Nonlinearity: negative-power needs positive arguments");
            return -std::pow(u, -p);
    }
    return 0.0;
}

double Nonlinearity::df(double u) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Exponential: return std::exp(u);
        case Kind::Power: return p * std::pow(u, p - 1.0);
        case Kind::NegativePower:
            if (u <= 0.0)
                throw std::domain_error("Nonlinearity: negative-power needs positive arguments");
            return p * std::pow(u, -p - 1.0);
    }
    return 0.0;
}

std::string Nonlinearity::name() const {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::Exponential: return "exponential";
        case Kind::Power: return "power";
        case Kind::NegativePower: return "negative-power";
    }
    return "unknown";
}

Nonlinearity Nonlinearity::zero() { return {}; }

Nonlinearity Nonlinearity::exponential() {
    Nonlinearity f;
    f.kind = Kind::Exponential;
    return f;
}

Nonlinearity Nonlinearity::power(double p) {
    if (p <= 1.0) throw std::domain_error("Nonlinearity: power kind requires p > 1");
    Nonlinearity f;
    f.kind = Kind::Power;
    f.p = p;
    return f;
}

Nonlinearity Nonlinearity::negative_power(double p) {
    if (p <= 0.0) throw std::domain_error("Nonlinearity: negative-power requires p > 0");
    Nonlinearity f;
    f.kind = Kind::NegativePower;
    f.p = p;
    return f;
}

Nonlinearity Nonlinearity::from_name(const std::string& name, double p) {
    if (name == "zero") return zero();
    if (name == "exponential") return exponential();
    if (name == "power") return power(p);
    if (name == "negative-power") return negative_power(p);
    throw std::domain_error("Nonlinearity: unknown kind '" + name + "'");
}

// ---------------------------------------------------------------- RadialProfile

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::ExplicitLiouville: return "explicit-liouville";
        case Provenance::ExplicitCritical: return "explicit-critical";
        case Provenance::SingularLog: return "singular-log";
        case Provenance::Shot: return "shot";
        case Provenance::External: return "external";
    }
    return "unknown";
}

std::vector<double> uniform_grid(double a, double b, int points) {
    if (points < 2 || !(a < b)) throw std::domain_error("uniform_grid: invalid range");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / (points - 1);
    return g;
}

std::vector<double> geometric_grid(double a, double b, int points) {
    if (points < 2 || !(0.0 < a && a < b))
        throw std::domain_error("geometric_grid: invalid range");
    std::vector<double> g(points);
    const double q = std::log(b / a);
    for (int i = 0; i < points; ++i)
        g[i] = a * std::exp(q * static_cast<double>(i) / (points - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

void RadialProfile::validate() const {
    if (r.size() < 5) throw std::domain_error("RadialProfile: needs at least 5 grid points");
    if (r.size() != phi.size() || r.size() != dphi.size())
        throw std::domain_error("RadialProfile: array sizes differ");
    if (r.front() < 0.0) throw std::domain_error("RadialProfile: radii must be >= 0");
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if (!(r[i] < r[i + 1]))
            throw std::domain_error("RadialProfile: grid must increase strictly");
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!std::isfinite(phi[i]) || !std::isfinite(dphi[i]))
            throw std::domain_error("RadialProfile: non-finite values");
    if (origin_regular) {
        if (r.front() != 0.0)
            throw std::domain_error("RadialProfile: regular origin requires r0 = 0");
        const double htol = 10.0 * (r[1] - r[0]);
        if (std::abs(dphi.front()) > htol)
            throw std::domain_error("RadialProfile: regular origin requires phi'(0) = 0");
    }
    if (provenance == Provenance::SingularLog && r.front() <= 0.0)
        throw std::domain_error("RadialProfile: singular-log profiles exclude r = 0");
}

bool RadialProfile::covers(double rr) const {
    if (analytic()) return origin_regular ? rr >= 0.0 : rr > 0.0;
    return rr >= r.front() - 1e-14 && rr <= r.back() + 1e-14;
}

namespace {

// Index of the grid cell containing rr (clamped).
std::size_t locate(const std::vector<double>& g, double rr) {
    auto it = std::upper_bound(g.begin(), g.end(), rr);
    std::size_t i = (it == g.begin()) ? 0 : static_cast<std::size_t>(it - g.begin() - 1);
    return std::min(i, g.size() - 2);
}

double hermite(double ra, double rb, double fa, double fb, double da, double db, double rr) {
    const double h = rb - ra;
    const double t = (rr - ra) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * fa + (t3 - 2 * t2 + t) * h * da +
           (-2 * t3 + 3 * t2) * fb + (t3 - t2) * h * db;
}

} // namespace

double RadialProfile::value(double rr) const {
    if (analytic()) return phi_fn(rr);
    if (!covers(rr)) throw std::domain_error("RadialProfile::value: r outside grid hull");
    const std::size_t i = locate(r, rr);
    return hermite(r[i], r[i + 1], phi[i], phi[i + 1], dphi[i], dphi[i + 1], rr);
}

double RadialProfile::deriv(double rr) const {
    if (dphi_fn) return dphi_fn(rr);
    if (!covers(rr)) throw std::domain_error("RadialProfile::deriv: r outside grid hull");
    // Hermite interpolation of the stored derivative using d2 samples.
    const std::vector<double>& d2 = deriv2_samples();
    const std::size_t i = locate(r, rr);
    return hermite(r[i], r[i + 1], dphi[i], dphi[i + 1], d2[i], d2[i + 1], rr);
}

const std::vector<double>& RadialProfile::deriv2_samples() const {
    if (!d2_cache_.empty()) return d2_cache_;
    const std::size_t m = r.size();
    std::vector<double> d2(m);
    if (d2phi_fn) {
        for (std::size_t i = 0; i < m; ++i) d2[i] = d2phi_fn(r[i]);
        d2_cache_ = std::move(d2);
        return d2_cache_;
    }
    // 4th-order finite differences of the stored first derivative on a
    // uniform grid; one-sided 4th-order stencils at the ends.
    const double h = r[1] - r[0];
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double step = r[i + 1] - r[i];
        if (std::abs(step - h) > 1e-9 * (1.0 + std::abs(h)))
            throw std::domain_error(
                "RadialProfile: finite-difference derivatives need a uniform grid");
    }
    auto at = [this](std::size_t i) { return dphi[i]; };
    for (std::size_t i = 0; i < m; ++i) {
        if (i >= 2 && i + 2 < m) {
            d2[i] = (at(i - 2) - 8 * at(i - 1) + 8 * at(i + 1) - at(i + 2)) / (12 * h);
        } else if (i < 2) {
            d2[i] = (-25 * at(i) + 48 * at(i + 1) - 36 * at(i + 2) + 16 * at(i + 3) -
                     3 * at(i + 4)) /
                    (12 * h);
        } else {
            d2[i] = (25 * at(i) - 48 * at(i - 1) + 36 * at(i - 2) - 16 * at(i - 3) +
                     3 * at(i - 4)) /
                    (12 * h);
        }
    }
    d2_cache_ = std::move(d2);
    return d2_cache_;
}

double RadialProfile::deriv2(double rr) const {
    if (d2phi_fn) return d2phi_fn(rr);
    if (!covers(rr)) throw std::domain_error("RadialProfile::deriv2: r outside grid hull");
    const std::vector<double>& d2 = deriv2_samples();
    const std::size_t i = locate(r, rr);
    const double t = (rr - r[i]) / (r[i + 1] - r[i]);
    return (1.0 - t) * d2[i] + t * d2[i + 1];
}

// ---------------------------------------------------------------- constructors

namespace {

RadialProfile make_analytic(int N, bool origin_regular, Provenance prov,
                            std::vector<double> grid,
                            std::function<double(double)> phi,
                            std::function<double(double)> dphi,
                            std::function<double(double)> d2phi) {
    RadialProfile p;
    p.N = N;
    p.origin_regular = origin_regular;
    p.provenance = prov;
    p.r = std::move(grid);
    p.phi.resize(p.r.size());
    p.dphi.resize(p.r.size());
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        p.phi[i] = phi(p.r[i]);
        p.dphi[i] = dphi(p.r[i]);
    }
    p.phi_fn = std::move(phi);
    p.dphi_fn = std::move(dphi);
    p.d2phi_fn = std::move(d2phi);
    p.validate();
    return p;
}

} // namespace

RadialProfile analytic_profile(std::vector<double> grid, int N, bool origin_regular,
                               std::function<double(double)> phi,
                               std::function<double(double)> dphi,
                               std::function<double(double)> d2phi) {
    if (!phi || !dphi) throw std::domain_error("analytic_profile: phi and dphi required");
    return make_analytic(N, origin_regular, Provenance::External, std::move(grid),
                         std::move(phi), std::move(dphi), std::move(d2phi));
}

RadialProfile explicit_liouville(double lambda, std::vector<double> grid) {
    if (lambda <= 0.0) throw std::domain_error("explicit_liouville: lambda must be > 0");
    if (grid.empty()) grid = uniform_grid(0.0, 10.0, 2048);
    const double l2 = lambda * lambda;
    auto phi = [l2, lambda](double r) {
        return -2.0 * std::log1p(l2 * r * r / 8.0) + 2.0 * std::log(lambda);
    };
    auto dphi = [l2](double r) { return -4.0 * l2 * r / (8.0 + l2 * r * r); };
    auto d2phi = [l2](double r) {
        const double den = 8.0 + l2 * r * r;
        return -4.0 * l2 * (8.0 - l2 * r * r) / (den * den);
    };
    RadialProfile p = make_analytic(2, true, Provenance::ExplicitLiouville,
                                    std::move(grid), phi, dphi, d2phi);
    p.params["lambda"] = lambda;
    return p;
}

RadialProfile explicit_critical_power(double lambda, int N, std::vector<double> grid) {
    if (lambda <= 0.0 || N < 3)
        throw std::domain_error("explicit_critical_power: needs lambda > 0 and N >= 3");
    if (grid.empty()) grid = uniform_grid(0.0, 10.0, 2048);
    const double m = 0.5 * (N - 2);
    const double c = std::pow(lambda * std::sqrt(static_cast<double>(N) * (N - 2)), m);
    const double l2 = lambda * lambda;
    auto phi = [c, m, l2](double r) { return c * std::pow(l2 + r * r, -m); };
    auto dphi = [c, m, l2](double r) { return -2.0 * m * c * r * std::pow(l2 + r * r, -m - 1.0); };
    auto d2phi = [c, m, l2](double r) {
        return -2.0 * m * c * std::pow(l2 + r * r, -m - 1.0) +
               4.0 * m * (m + 1.0) * c * r * r * std::pow(l2 + r * r, -m - 2.0);
    };
    RadialProfile p = make_analytic(N, true, Provenance::ExplicitCritical,
                                    std::move(grid), phi, dphi, d2phi);
    p.params["lambda"] = lambda;
    p.params["p"] = static_cast<double>(N + 2) / (N - 2);
    return p;
}

RadialProfile singular_log_solution(int N, std::vector<double> grid) {
    if (N < 3) throw std::domain_error("singular_log_solution: needs N >= 3");
    if (grid.empty()) grid = uniform_grid(0.05, 20.0, 2048);
    if (grid.front() <= 0.0)
        throw std::domain_error("singular_log_solution: the grid must exclude r = 0");
    const double c = std::log(2.0 * (N - 2));
    auto phi = [c](double r) { return -2.0 * std::log(r) + c; };
    auto dphi = [](double r) { return -2.0 / r; };
    auto d2phi = [](double r) { return 2.0 / (r * r); };
    return make_analytic(N, false, Provenance::SingularLog, std::move(grid), phi, dphi, d2phi);
}

RadialProfile external_profile(std::vector<double> r, std::vector<double> phi,
                               std::vector<double> dphi, int N, bool origin_regular) {
    RadialProfile p;
    p.N = N;
    p.origin_regular = origin_regular;
    p.provenance = Provenance::External;
    p.r = std::move(r);
    p.phi = std::move(phi);
    if (dphi.empty()) {
        // Rebuild the derivative by 4th-order differences of the values.
        const std::size_t m = p.r.size();
        if (m < 5) throw std::domain_error("external_profile: needs at least 5 points");
        const double h = p.r[1] - p.r[0];
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (std::abs(p.r[i + 1] - p.r[i] - h) > 1e-9 * (1.0 + std::abs(h)))
                throw std::domain_error(
                    "external_profile: derivative reconstruction needs a uniform grid");
        dphi.resize(m);
        auto at = [&p](std::size_t i) { return p.phi[i]; };
        for (std::size_t i = 0; i < m; ++i) {
            if (i >= 2 && i + 2 < m)
                dphi[i] = (at(i - 2) - 8 * at(i - 1) + 8 * at(i + 1) - at(i + 2)) / (12 * h);
            else if (i < 2)
                dphi[i] = (-25 * at(i) + 48 * at(i + 1) - 36 * at(i + 2) + 16 * at(i + 3) -
                           3 * at(i + 4)) /
                          (12 * h);
            else
                dphi[i] = (25 * at(i) - 48 * at(i - 1) + 36 * at(i - 2) - 16 * at(i - 3) +
                           3 * at(i - 4)) /
                          (12 * h);
        }
    }
    p.dphi = std::move(dphi);
    p.validate();
    return p;
}

// ---------------------------------------------------------------- operators

std::vector<double> radial_operator(const RadialProfile& profile) {
    profile.validate();
    const std::vector<double>& d2 = profile.deriv2_samples();
    std::vector<double> q(profile.r.size());
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
        const double rr = profile.r[i];
        if (rr == 0.0) {
            if (!profile.origin_regular)
                throw std::domain_error("radial_operator: r = 0 on a singular profile");
            q[i] = profile.N * d2[i];
        } else {
            q[i] = d2[i] + (profile.N - 1) * profile.dphi[i] / rr;
        }
    }
    return q;
}

double residual(const RadialProfile& profile, const Nonlinearity& f) {
    const std::vector<double> q = radial_operator(profile);
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double fv = f.f(profile.phi[i]);
        worst = std::max(worst, std::abs(-q[i] - fv) / (1.0 + std::abs(fv)));
    }
    return worst;
}

// ---------------------------------------------------------------- shooting

RadialProfile shoot(const Nonlinearity& f, int N, double u0, double r_max, int steps) {
    if (r_max <= 0.0) throw std::domain_error("shoot: r_max must be > 0");
    if (steps < 100) throw std::domain_error("shoot: needs at least 100 steps");
    const double h = r_max / steps;
    const double guard = 1e8;

    RadialProfile p;
    p.N = N;
    p.origin_regular = true;
    p.provenance = Provenance::Shot;
    p.params["u0"] = u0;
    p.r.reserve(steps + 1);
    p.phi.reserve(steps + 1);
    p.dphi.reserve(steps + 1);

    // Series start phi = u0 + a r^2 + b r^4 with 2aN = -f(u0) and
    // (4N + 8) b = -f'(u0) a, valid while the (N-1)/r term is singular.
    const double a = -f.f(u0) / (2.0 * N);
    const double b = -f.df(u0) * a / (4.0 * N + 8.0);
    const int series_end = std::min(10, steps);
    for (int i = 0; i <= series_end; ++i) {
        const double rr = i * h;
        p.r.push_back(rr);
        p.phi.push_back(u0 + a * rr * rr + b * rr * rr * rr * rr);
        p.dphi.push_back(2.0 * a * rr + 4.0 * b * rr * rr * rr);
    }

    auto rhs = [&f, N](double rr, double y0, double y1, double& k0, double& k1) {
        k0 = y1;
        k1 = -(N - 1) * y1 / rr - f.f(y0);
    };

    double y0 = p.phi.back();
    double y1 = p.dphi.back();
    for (int i = series_end; i < steps; ++i) {
        const double rr = i * h;
        double a0, a1, b0, b1, c0, c1, d0, d1;
        rhs(rr, y0, y1, a0, a1);
        rhs(rr + 0.5 * h, y0 + 0.5 * h * a0, y1 + 0.5 * h * a1, b0, b1);
        rhs(rr + 0.5 * h, y0 + 0.5 * h * b0, y1 + 0.5 * h * b1, c0, c1);
        rhs(rr + h, y0 + h * c0, y1 + h * c1, d0, d1);
        y0 += h / 6.0 * (a0 + 2 * b0 + 2 * c0 + d0);
        y1 += h / 6.0 * (a1 + 2 * b1 + 2 * c1 + d1);
        if (!std::isfinite(y0) || !std::isfinite(y1) || std::abs(y0) > guard ||
            std::abs(y1) > guard) {
            p.truncated = true;
            p.blowup_radius = rr + h;
            throw BlowupError(rr + h, p);
        }
        p.r.push_back(rr + h);
        p.phi.push_back(y0);
        p.dphi.push_back(y1);
    }
    p.validate();
    return p;
}

} // namespace finsler
