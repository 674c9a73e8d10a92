#include "finsler/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <cmath>
#include <stdexcept>

namespace finsler {

namespace {

double signed_area(const std::vector<Eigen::Vector2d>& v) {
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Eigen::Vector2d& a = v[i];
        const Eigen::Vector2d& b = v[(i + 1) % v.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * twice;
}

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
             const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

double Polygon::area() const { return signed_area(v); }

double Polygon::euclidean_perimeter() const {
    double per = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        per += (v[(i + 1) % v.size()] - v[i]).norm();
    return per;
}

Eigen::Vector2d Polygon::centroid() const {
    // Area-weighted centroid; falls back to the vertex mean for degenerate area.
    double a6 = 0.0;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Eigen::Vector2d& p = v[i];
        const Eigen::Vector2d& q = v[(i + 1) % v.size()];
        const double w = p.x() * q.y() - q.x() * p.y();
        a6 += w;
        c += w * (p + q);
    }
    if (std::abs(a6) < 1e-300) {
        c.setZero();
        for (const auto& p : v) c += p;
        return c / static_cast<double>(v.size());
    }
    return c / (3.0 * a6);
}

Polygon Polygon::scaled(double t, const Eigen::Vector2d& about) const {
    Polygon out;
    out.v.reserve(v.size());
    for (const auto& p : v) out.v.push_back(about + t * (p - about));
    return out;
}

Polygon Polygon::regular(int n, double r) {
    if (n < 3 || !(r > 0.0)) throw std::domain_error("Polygon::regular: invalid");
    Polygon out;
    out.v.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        out.v.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    return out;
}

Polygon convex_hull(std::vector<Eigen::Vector2d> points) {
    if (points.size() < 3) throw std::domain_error("convex_hull: need >= 3 points");
    std::sort(points.begin(), points.end(),
              [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                  return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
              });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                                 return a == b;
                             }),
                 points.end());
    const std::size_t n = points.size();
    if (n < 3) throw std::domain_error("convex_hull: need >= 3 distinct points");
    std::vector<Eigen::Vector2d> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw std::domain_error("convex_hull: points are collinear");
    Polygon out;
    out.v = std::move(hull);
    return out;
}

Polygon wulff_polygon(const Norm& norm, int vertices) {
    if (vertices < 8) throw std::domain_error("wulff_polygon: too few vertices");
    if (norm.spec().dim != 2) throw std::domain_error("wulff_polygon: norm must be 2D");
    Polygon out;
    out.v.reserve(static_cast<std::size_t>(vertices));
    for (int k = 0; k < vertices; ++k) {
        const double a = 2.0 * std::numbers::pi * k / vertices;
        const Eigen::Vector2d e(std::cos(a), std::sin(a));
        out.v.push_back(e / norm.dual(e));
    }
    return out;
}

// ----------------------------------------------------------- marching squares

CellLevelSet cell_level_set(const Eigen::Vector2d& p, double h,
                            const double corner[4], double t) {
    CellLevelSet out;
    const Eigen::Vector2d P[4] = {p, p + Eigen::Vector2d(h, 0),
                                  p + Eigen::Vector2d(h, h), p + Eigen::Vector2d(0, h)};
    bool in[4];
    int n_in = 0;
    for (int k = 0; k < 4; ++k) {
        in[k] = corner[k] > t;
        n_in += in[k];
    }
    if (n_in == 0) return out;
    if (n_in == 4) {
        out.inside_area = h * h;
        return out;
    }

    bool has_x[4] = {false, false, false, false};
    Eigen::Vector2d X[4];
    for (int k = 0; k < 4; ++k) {
        const int k1 = (k + 1) % 4;
        if (in[k] != in[k1]) {
            const double s = (t - corner[k]) / (corner[k1] - corner[k]);
            X[k] = P[k] + s * (P[k1] - P[k]);
            has_x[k] = true;
        }
    }

    auto emit = [&](const std::vector<Eigen::Vector2d>& poly) {
        out.inside_area += signed_area(poly);
        const std::size_t m = poly.size();
        for (std::size_t i = 0; i < m; ++i) {
            // A polygon edge between two consecutive crossing points is a
            // level-curve chord; edges touching a corner run along the cell
            // boundary.  Crossings are the only non-corner vertices.
            const Eigen::Vector2d& a = poly[i];
            const Eigen::Vector2d& b = poly[(i + 1) % m];
            bool a_corner = false, b_corner = false;
            for (int k = 0; k < 4; ++k) {
                if (a == P[k]) a_corner = true;
                if (b == P[k]) b_corner = true;
            }
            if (a_corner || b_corner) continue;
            const Eigen::Vector2d d = b - a;
            const double len = d.norm();
            if (len < 1e-300) continue;
            LevelSegment seg;
            seg.a = a;
            seg.b = b;
            seg.normal = Eigen::Vector2d(d.y(), -d.x()) / len;  // outward (CCW inside)
            out.chords.push_back(seg);
        }
    };

    const bool saddle = n_in == 2 && in[0] == in[2];
    if (!saddle) {
        std::vector<Eigen::Vector2d> poly;
        for (int k = 0; k < 4; ++k) {
            if (in[k]) poly.push_back(P[k]);
            if (has_x[k]) poly.push_back(X[k]);
        }
        emit(poly);
        return out;
    }

    const double center = 0.25 * (corner[0] + corner[1] + corner[2] + corner[3]);
    if (center > t) {
        // Connected resolution: one hexagon through all four crossings.
        std::vector<Eigen::Vector2d> poly;
        for (int k = 0; k < 4; ++k) {
            if (in[k]) poly.push_back(P[k]);
            if (has_x[k]) poly.push_back(X[k]);
        }
        emit(poly);
    } else {
        // Disconnected resolution: a triangle around each inside corner.
        for (int k = 0; k < 4; ++k) {
            if (!in[k]) continue;
            const int prev = (k + 3) % 4;
            emit({X[prev], P[k], X[k]});
        }
    }
    return out;
}

}  // namespace finsler
