#pragma once

/// Planar geometry utilities: polygons, convex hulls, polygonal Wulff balls,
/// and marching-squares level-set extraction on uniform grids.

#include "finsler/norm.hpp"

#include <Eigen/Dense>

#include <vector>

namespace finsler {

/// Simple polygon with counterclockwise vertex order.
struct Polygon {
    std::vector<Eigen::Vector2d> v;

    double area() const;                ///< shoelace; positive when CCW
    double euclidean_perimeter() const;
    Eigen::Vector2d centroid() const;   ///< area centroid
    Polygon scaled(double t, const Eigen::Vector2d& about) const;

    /// Regular n-gon of circumradius r centered at the origin.
    static Polygon regular(int n, double r);
};

/// Convex hull (monotone chain), CCW orientation.  Throws if fewer than
/// three non-collinear points remain.
Polygon convex_hull(std::vector<Eigen::Vector2d> points);

/// Polygonal approximation of the Wulff ball {F0 < 1} with `vertices`
/// vertices: v_k = e(a_k) / F0(e(a_k)) over equispaced angles.
Polygon wulff_polygon(const Norm& norm, int vertices);

/// One straight segment of an extracted level curve; `normal` is the unit
/// Euclidean normal pointing out of the region {u > t}.
struct LevelSegment {
    Eigen::Vector2d a, b;
    Eigen::Vector2d normal;
};

/// Marching-squares extraction of the superlevel set {u > t} on one
/// rectangular cell patch.  `corner` holds the values at the four corners
/// (00, 10, 11, 01) of a cell with lower-left point p and spacing h.
/// Appends the inside-area contribution and any boundary chords.
struct CellLevelSet {
    double inside_area = 0.0;          ///< area of the cell part with u > t
    std::vector<LevelSegment> chords;  ///< 0, 1, or 2 segments
};
CellLevelSet cell_level_set(const Eigen::Vector2d& p, double h,
                            const double corner[4], double t);

}  // namespace finsler
