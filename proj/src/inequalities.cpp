#include "finsler/inequalities.hpp"

#include "finsler/quadrature.hpp"
#include "finsler/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace finsler {

namespace {

// Smooth bump psi(r) = exp(-1/(1-z^2)) on |z| < 1, z = (r-c)/w, and its
// derivative.  Vanishes with all derivatives at the support edges.
double bump_value(const HardyBump& b, double r) {
    const double z = (r - b.center) / b.width;
    const double one_minus = 1.0 - z * z;
    if (one_minus <= 0.0) return 0.0;
    return std::exp(-1.0 / one_minus);
}

double bump_derivative(const HardyBump& b, double r) {
    const double z = (r - b.center) / b.width;
    const double one_minus = 1.0 - z * z;
    if (one_minus <= 0.0) return 0.0;
    const double psi = std::exp(-1.0 / one_minus);
    return psi * (-2.0 * z / (one_minus * one_minus)) / b.width;
}

void require_hardy_parameters(int N, double s) {
    if (N < 1) throw std::domain_error("hardy: dimension must be >= 1");
    if (s < 1.0) throw std::domain_error("hardy: exponent s must be >= 1");
    if (s == static_cast<double>(N))
        throw std::domain_error("hardy: threshold vanishes at s = N; the inequality is empty there");
}

// C^1 smoothstep ramp 3u^2 - 2u^3 on [0, 1].
double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
double smoothstep_derivative(double u) { return 6.0 * u * (1.0 - u); }

}  // namespace

// ------------------------------------------------------------------- Hardy

std::optional<double> hardy_ratio_radial(int N, double s,
                                         const std::function<double(double)>& psi,
                                         const std::function<double(double)>& dpsi,
                                         double lo, double hi) {
    require_hardy_parameters(N, s);
    if (!psi || !dpsi) throw std::domain_error("hardy: test function callbacks must be set");
    if (!(lo > 0.0 && hi > lo))
        throw std::domain_error("hardy: test support must be a positive interval inside {r > 0}");

    // Radial reduction: for phi = psi(F0(x)) both sides of the inequality are
    // N kappa0 times a 1D integral and the common factor cancels:
    //   ratio = int |psi'|^s r^{N-1} dr / ( |(N-s)/s|^s int |psi|^s r^{N-1-s} dr ).
    const auto numerator = [&](double r) {
        return std::pow(std::abs(dpsi(r)), s) * std::pow(r, N - 1);
    };
    const auto denominator = [&](double r) {
        return std::pow(std::abs(psi(r)), s) * std::pow(r, N - 1 - s);
    };
    const double rhs = integrate(numerator, lo, hi, 256, 8);
    const double lhs = integrate(denominator, lo, hi, 256, 8);
    if (!(lhs > 1e-300)) return std::nullopt;  // zero-guard: vacuous test
    const double threshold = std::pow(std::abs((N - s) / s), s);
    return rhs / (threshold * lhs);
}

double hardy_ratio(int N, double s, const HardyBump& bump) {
    if (!(bump.width > 0.0))
        throw std::domain_error("hardy: bump width must be positive");
    const double lo = bump.center - bump.width;
    const double hi = bump.center + bump.width;
    if (!(lo > 0.0))
        throw std::domain_error("hardy: bump support must stay inside {r > 0}");
    const auto ratio = hardy_ratio_radial(
        N, s, [&](double r) { return bump_value(bump, r); },
        [&](double r) { return bump_derivative(bump, r); }, lo, hi);
    if (!ratio) throw std::domain_error("hardy: bump test is numerically zero");
    return *ratio;
}

HardyResult hardy_check(int N, double s, int test_count, std::uint64_t seed,
                        bool origin_avoiding) {
    require_hardy_parameters(N, s);
    if (test_count < 1) throw std::domain_error("hardy: need at least one test function");
    if (s > static_cast<double>(N) && !origin_avoiding)
        throw std::domain_error(
            "hardy: s > N requires origin-avoiding test functions (supports bounded away from 0)");

    HardyResult result;
    result.s = s;
    result.N = N;
    result.threshold = std::pow(std::abs((N - s) / s), s);
    result.min_ratio = std::numeric_limits<double>::infinity();

    Rng rng(seed);
    const double margin = origin_avoiding ? 0.5 : 0.0;
    for (int k = 0; k < test_count; ++k) {
        HardyBump bump;
        bump.center = rng.uniform(1.0, 10.0);
        const double wmax = std::min(bump.center - margin - 1e-6, 4.0);
        bump.width = rng.uniform(0.1, wmax);
        const double ratio = hardy_ratio(N, s, bump);
        result.tests.push_back(bump);
        result.ratios.push_back(ratio);
        if (ratio < result.min_ratio) {
            result.min_ratio = ratio;
            result.worst_index = result.ratios.size() - 1;
        }
    }
    return result;
}

double hardy_extremal_ratio(int N, double s, double ramp_width, double plateau_width) {
    require_hardy_parameters(N, s);
    if (!(ramp_width > 0.0) || !(plateau_width >= 0.0))
        throw std::domain_error("hardy: ramp width must be positive, plateau width nonnegative");

    // psi(r) = r^{-k} chi(log r), k = (N-s)/s, turns both sides into
    // translation-invariant integrals in t = log r:
    //   ratio = int |chi' - k chi|^s dt / ( |k|^s int |chi|^s dt ).
    // chi is a smoothstep trapezoid: up-ramp on [0, W], plateau of width P,
    // mirrored down-ramp.
    const double k = (N - s) / s;
    const double W = ramp_width;
    const double P = plateau_width;

    const auto chi = [&](double t) -> double {
        if (t <= 0.0 || t >= 2.0 * W + P) return 0.0;
        if (t < W) return smoothstep(t / W);
        if (t <= W + P) return 1.0;
        return smoothstep((2.0 * W + P - t) / W);
    };
    const auto dchi = [&](double t) -> double {
        if (t <= 0.0 || t >= 2.0 * W + P) return 0.0;
        if (t < W) return smoothstep_derivative(t / W) / W;
        if (t <= W + P) return 0.0;
        return -smoothstep_derivative((2.0 * W + P - t) / W) / W;
    };

    const auto numerator = [&](double t) { return std::pow(std::abs(dchi(t) - k * chi(t)), s); };
    const auto denominator = [&](double t) { return std::pow(chi(t), s); };

    const double segments[4] = {0.0, W, W + P, 2.0 * W + P};
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (segments[i + 1] <= segments[i]) continue;
        num += integrate(numerator, segments[i], segments[i + 1], 128, 8);
        den += integrate(denominator, segments[i], segments[i + 1], 128, 8);
    }
    if (!(den > 0.0)) throw std::domain_error("hardy: extremal profile is numerically zero");
    return num / (std::pow(std::abs(k), s) * den);
}

// --------------------------------------------------- perimeter / isoperimetric

double anisotropic_perimeter(const Polygon& shape, const Norm& norm) {
    if (norm.dim() != 2)
        throw std::domain_error("anisotropic_perimeter: requires a planar norm");
    const auto& v = shape.v;
    if (v.size() < 3) throw std::domain_error("anisotropic_perimeter: degenerate polygon");
    if (!(std::abs(shape.area()) > 0.0))
        throw std::domain_error("anisotropic_perimeter: polygon has zero area");

    // For a CCW edge d = b - a the outward normal is (d.y, -d.x)/|d|, and by
    // 1-homogeneity F(nu) |e| = F((d.y, -d.x)).  CW polygons give the same
    // value because F is even.
    double total = 0.0;
    Eigen::Vector2d n;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Eigen::Vector2d d = v[(i + 1) % v.size()] - v[i];
        n << d.y(), -d.x();
        if (n.norm() == 0.0) continue;  // repeated vertex contributes nothing
        total += norm.eval(n);
    }
    return total;
}

IsoperimetricResult isoperimetric_check(const Polygon& shape, const Norm& norm) {
    IsoperimetricResult out;
    out.perimeter = anisotropic_perimeter(shape, norm);
    out.area = std::abs(shape.area());
    const int N = norm.dim();
    out.bound = N * std::pow(norm.kappa0(), 1.0 / N) * std::pow(out.area, 1.0 - 1.0 / N);
    out.deficit = out.perimeter - out.bound;
    return out;
}

// ------------------------------------------------------------------- co-area

namespace {

struct CoareaCell {
    int i = 0, j = 0;
    double corner[4] = {0, 0, 0, 0};  ///< values at (i,j),(i+1,j),(i+1,j+1),(i,j+1)
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    double grad_norm = 0.0;
    bool touches_edge = false;  ///< some corner is not an interior node
};

std::vector<CoareaCell> collect_cells(const GridDomain2D& domain, const std::vector<double>& u) {
    std::vector<CoareaCell> cells;
    for (int j = 0; j + 1 < domain.ny; ++j) {
        for (int i = 0; i + 1 < domain.nx; ++i) {
            const int idx[4] = {domain.index(i, j), domain.index(i + 1, j),
                                domain.index(i + 1, j + 1), domain.index(i, j + 1)};
            bool keep = true;
            bool edge = false;
            for (int corner = 0; corner < 4; ++corner) {
                const NodeStatus st = domain.status[static_cast<std::size_t>(idx[corner])];
                if (st == NodeStatus::Outside) keep = false;
                if (st != NodeStatus::Interior) edge = true;
            }
            if (!keep) continue;
            CoareaCell cell;
            cell.i = i;
            cell.j = j;
            for (int corner = 0; corner < 4; ++corner)
                cell.corner[corner] = u[static_cast<std::size_t>(idx[corner])];
            const double h = domain.h;
            cell.grad.x() =
                (cell.corner[1] + cell.corner[2] - cell.corner[0] - cell.corner[3]) / (2.0 * h);
            cell.grad.y() =
                (cell.corner[3] + cell.corner[2] - cell.corner[0] - cell.corner[1]) / (2.0 * h);
            cell.grad_norm = cell.grad.norm();
            cell.touches_edge = edge;
            cells.push_back(cell);
        }
    }
    return cells;
}

/// int_{u>t} F(grad u) over the collected cells, gradient frozen per cell.
double weighted_superlevel_area(const std::vector<CoareaCell>& cells, const Norm& norm,
                                const GridDomain2D& domain, double t) {
    double total = 0.0;
    for (const CoareaCell& cell : cells) {
        const double cmax = std::max({cell.corner[0], cell.corner[1], cell.corner[2], cell.corner[3]});
        if (cmax <= t) continue;  // cell entirely outside {u > t}
        const CellLevelSet piece = cell_level_set(
            domain.point(cell.i, cell.j), domain.h, cell.corner, t);
        if (cell.grad_norm > 0.0) total += norm.eval(cell.grad) * piece.inside_area;
    }
    return total;
}

}  // namespace

CoareaResult coarea_check(const GridDomain2D& domain, const std::vector<double>& u,
                          const Norm& norm, const std::vector<double>& t_grid, double dt) {
    if (norm.dim() != 2) throw std::domain_error("coarea_check: requires a planar norm");
    if (u.size() != static_cast<std::size_t>(domain.nx) * static_cast<std::size_t>(domain.ny))
        throw std::domain_error("coarea_check: field size does not match the grid");
    if (t_grid.empty()) throw std::domain_error("coarea_check: empty level grid");

    const std::vector<CoareaCell> cells = collect_cells(domain, u);
    if (cells.empty()) throw std::domain_error("coarea_check: domain has no complete cells");

    double umin = std::numeric_limits<double>::infinity();
    double umax = -umin;
    double max_grad = 0.0;
    for (const CoareaCell& cell : cells) {
        for (double c : cell.corner) {
            umin = std::min(umin, c);
            umax = std::max(umax, c);
        }
        max_grad = std::max(max_grad, cell.grad_norm);
    }
    if (!(umax > umin)) throw std::domain_error("coarea_check: field is constant");
    if (dt <= 0.0) dt = 1e-3 * (umax - umin);

    CoareaResult result;
    for (double t : t_grid) {
        CoareaLevel level;
        level.t = t;
        // The identity holds for a.e. level; a level hitting node values
        // exactly degenerates the chord extraction (zero-length chords drop
        // whole corner crossings).  Evaluate at a generically-shifted level.
        const double tw = t + 1e-7 * (umax - umin);

        // Level band: cells the contour actually crosses.
        double band_min_grad = std::numeric_limits<double>::infinity();
        bool band_nonempty = false;
        double perimeter = 0.0;
        for (const CoareaCell& cell : cells) {
            const double cmin =
                std::min({cell.corner[0], cell.corner[1], cell.corner[2], cell.corner[3]});
            const double cmax =
                std::max({cell.corner[0], cell.corner[1], cell.corner[2], cell.corner[3]});
            if (!(cmax > tw && cmin <= tw)) continue;
            band_nonempty = true;
            band_min_grad = std::min(band_min_grad, cell.grad_norm);
            if (cell.touches_edge) level.touches_boundary = true;
            const CellLevelSet piece = cell_level_set(
                domain.point(cell.i, cell.j), domain.h, cell.corner, tw);
            for (const LevelSegment& seg : piece.chords)
                perimeter += norm.eval(seg.normal) * (seg.b - seg.a).norm();
        }

        if (!band_nonempty || band_min_grad < 0.05 * max_grad) {
            level.skipped = true;
            result.levels.push_back(level);
            continue;
        }

        const double above = weighted_superlevel_area(cells, norm, domain, tw + dt);
        const double below = weighted_superlevel_area(cells, norm, domain, tw - dt);
        level.lhs = -(above - below) / (2.0 * dt);
        level.rhs = perimeter;
        level.residual = std::abs(level.lhs - level.rhs) / std::max(std::abs(level.rhs), 1e-12);
        result.levels.push_back(level);
        if (!level.touches_boundary) {
            result.max_residual = std::max(result.max_residual, level.residual);
            ++result.evaluated;
        }
    }
    return result;
}

// ---------------------------------------------------------- capacity scaling

CapacityFit capacity_scaling(const RadialProfile& profile, Nonlinearity::Kind kind,
                             double p, double alpha, const std::vector<double>& R_grid) {
    if (R_grid.size() < 2)
        throw std::domain_error("capacity_scaling: need at least two radii for a slope");
    for (std::size_t i = 0; i + 1 < R_grid.size(); ++i)
        if (!(R_grid[i] > 0.0 && R_grid[i] < R_grid[i + 1]))
            throw std::domain_error("capacity_scaling: radii must be positive and increasing");
    if (!(R_grid.back() >= 10.0 * R_grid.front() * (1.0 - 1e-12)))
        throw std::domain_error("capacity_scaling: radius grid must span at least one decade");
    if (kind == Nonlinearity::Kind::Exponential && !(alpha > 0.0 && alpha < 4.0))
        throw std::domain_error("capacity_scaling: exponential kind requires alpha in (0, 4)");
    if (kind == Nonlinearity::Kind::Zero)
        throw std::domain_error("capacity_scaling: no density associated with the zero nonlinearity");
    if (!profile.covers(R_grid.back()))
        throw std::domain_error("capacity_scaling: profile does not cover the largest radius");

    const int N = profile.N;
    // Prefactor uses the Euclidean unit-ball volume; any Wulff-ball volume
    // only shifts the intercept of the log-log fit, never the slope.
    const double surface = N * Norm::euclidean_ball_volume(N);

    // density * r^{N-1} assembled in log space: near r = 0 the density alone
    // can overflow a double even when the full integrand is tame (e.g. the
    // singular log profile gives density ~ r^{-2(alpha+1)} against the
    // integrable product r^{N-1-2(alpha+1)}).
    const auto integrand = [&](double r) -> double {
        const double phi = profile.value(r);
        double log_density = 0.0;
        switch (kind) {
            case Nonlinearity::Kind::Exponential:
                log_density = (alpha + 1.0) * phi;
                break;
            case Nonlinearity::Kind::Power:
                if (!(phi > 0.0))
                    throw std::domain_error("capacity_scaling: power density needs a positive profile");
                log_density = (p + 2.0 * alpha - 1.0) * std::log(phi);
                break;
            case Nonlinearity::Kind::NegativePower:
                if (!(phi > 0.0))
                    throw std::domain_error("capacity_scaling: power density needs a positive profile");
                log_density = (-2.0 * alpha - p - 1.0) * std::log(phi);
                break;
            default:
                throw std::domain_error("capacity_scaling: unsupported nonlinearity kind");
        }
        return std::exp(log_density + (N - 1) * std::log(r));
    };

    CapacityFit fit;
    fit.R = R_grid;
    for (double R : R_grid) fit.I.push_back(surface * integrate_to_zero(integrand, R, 1e-14, 8));

    double sx = 0.0, sy = 0.0;
    const auto n = static_cast<double>(R_grid.size());
    std::vector<double> lx(R_grid.size()), ly(R_grid.size());
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        if (!(fit.I[i] > 0.0))
            throw std::domain_error("capacity_scaling: integral is not positive");
        lx[i] = std::log(fit.R[i]);
        ly[i] = std::log(fit.I[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace finsler
