#pragma once

/// 2D Dirichlet solver for the anisotropic semilinear equation -Qu = f(u),
/// where Qu = div(F(grad u) F_xi(grad u)) is the anisotropic Laplacian.
///
/// Discretization: uniform grid, cell-face flux differencing.  The gradient
/// at an x-face between nodes (i,j) and (i+1,j) is
///     g = ( (u[i+1,j] - u[i,j]) / h,
///           (u[i,j+1] + u[i+1,j+1] - u[i,j-1] - u[i+1,j-1]) / (4h) ),
/// symmetrically for y-faces; the flux through the face is F(g) F_xi(g).
/// The scheme is 2nd-order consistent and exact for affine fields.
///
/// The nonlinear system is solved by damped Newton.  The residual is always
/// the unregularized discrete equation; regularization (see solve_semilinear)
/// only conditions the Newton linearization where the gradient degenerates.

#include "finsler/norm.hpp"
#include "finsler/radial.hpp"

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

enum class NodeStatus : unsigned char { Outside, Boundary, Interior };

/// Uniform-grid 2D domain with a node classification.  Interior nodes carry
/// unknowns; Boundary nodes carry prescribed Dirichlet values; Outside nodes
/// are ignored.  Every node in the 8-neighborhood of an interior node is
/// Interior or Boundary, so all face stencils are complete.
struct GridDomain2D {
    double x0 = 0.0, y0 = 0.0;  ///< coordinates of node (0,0)
    double h = 0.0;             ///< mesh spacing (both directions)
    int nx = 0, ny = 0;         ///< node counts
    std::vector<NodeStatus> status;    ///< per node, row-major (j * nx + i)
    std::vector<double> boundary_values;  ///< per node; meaningful on Boundary
    std::string shape;                 ///< human-readable description

    /// Axis-aligned rectangle [ax,bx] x [ay,by]; `cells_x` cells along x.
    /// (by - ay) must be an integer multiple of the spacing.
    static GridDomain2D rectangle(double ax, double ay, double bx, double by,
                                  int cells_x);

    /// Wulff ball {F0(x) < radius} centered at the origin, staircase
    /// approximation with `cells_across` cells across the diameter 2*radius.
    static GridDomain2D wulff_ball(const Norm& norm, double radius,
                                   int cells_across);

    int index(int i, int j) const { return j * nx + i; }
    NodeStatus at(int i, int j) const { return status[static_cast<std::size_t>(index(i, j))]; }
    Eigen::Vector2d point(int i, int j) const {
        return {x0 + h * i, y0 + h * j};
    }
    Eigen::Vector2d center() const {
        return {x0 + 0.5 * h * (nx - 1), y0 + 0.5 * h * (ny - 1)};
    }
    int count(NodeStatus s) const;

    /// Fill boundary_values by sampling g at boundary node positions.
    void set_boundary_values(const std::function<double(double, double)>& g);

    /// Sample an arbitrary field at every non-Outside node (Outside -> 0).
    std::vector<double> sample(const std::function<double(double, double)>& g) const;
};

struct NewtonOptions {
    double tol = 1e-10;    ///< max-norm residual target
    int max_iter = 50;
    int max_halvings = 20; ///< damping: halve the step until residual drops
};

struct DiscreteSolution2D {
    GridDomain2D domain;
    std::vector<double> values;  ///< per node; boundary data on Boundary nodes
    double residual = 0.0;       ///< final unregularized max-norm residual
    int iterations = 0;
    bool converged = false;
    NormSpec norm;
    Nonlinearity nonlinearity;
    std::vector<double> residual_history;
};

/// Thrown when damped Newton fails to reach the tolerance.
class NewtonDivergence : public std::runtime_error {
public:
    NewtonDivergence(std::string what, std::vector<double> history)
        : std::runtime_error(std::move(what)), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

/// Discrete Qu at interior nodes (entries elsewhere are 0).  `u` must hold
/// values at all Interior and Boundary nodes.
std::vector<double> apply_operator(const GridDomain2D& domain, const Norm& norm,
                                   const std::vector<double>& u);

/// Solve -Qu = f(u) with Dirichlet data from domain.boundary_values.
/// `initial` (if nonempty) seeds the interior values; the default fill is
/// the mean of the boundary data.  Near-degenerate face gradients are
/// regularized inside the Newton linearization only, replacing F(g) by
/// sqrt(F(g)^2 + delta^2) - delta with delta = 1e-10 * (data scale); fully
/// degenerate faces fall back to the positive definite limit matrix along
/// the radial direction from the domain center.
DiscreteSolution2D solve_semilinear(const GridDomain2D& domain, const Norm& norm,
                                    const Nonlinearity& f,
                                    const NewtonOptions& opts = {},
                                    std::vector<double> initial = {});

/// Q-harmonic replacement: solve -Qw = 0 with the trace already stored in
/// domain.boundary_values.
DiscreteSolution2D harmonic_replacement(const GridDomain2D& domain, const Norm& norm,
                                        const NewtonOptions& opts = {});

/// Max-norm of the discrete equation residual over interior nodes,
/// recomputed from scratch (no reliance on solver bookkeeping).
double residual_norm(const DiscreteSolution2D& sol);

}  // namespace finsler
