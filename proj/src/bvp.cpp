#include "finsler/bvp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace finsler {

namespace {

bool has_value(NodeStatus s) { return s != NodeStatus::Outside; }

/// One face of the grid with the 6-node stencil defining its gradient.
/// g = (sum wx[k] u[idx[k]], sum wy[k] u[idx[k]]); the flux component
/// normal to the face is W(g)[axis] with W(g) = F(g) F_xi(g).
struct FaceStencil {
    int idx[6];
    double wx[6];
    double wy[6];
    int axis;        ///< 0 for x-faces, 1 for y-faces
    int left, right; ///< node indices on the two sides (lower first)
    double cx, cy;   ///< face center (for the degenerate-gradient fallback)
};

std::vector<FaceStencil> build_faces(const GridDomain2D& dom) {
    std::vector<FaceStencil> faces;
    const double h = dom.h;
    const double w1 = 1.0 / h, w4 = 1.0 / (4.0 * h);
    auto interior = [&](int i, int j) { return dom.at(i, j) == NodeStatus::Interior; };
    // x-faces between (i,j) and (i+1,j)
    for (int j = 0; j < dom.ny; ++j) {
        for (int i = 0; i + 1 < dom.nx; ++i) {
            if (!interior(i, j) && !interior(i + 1, j)) continue;
            FaceStencil f{};
            f.axis = 0;
            f.left = dom.index(i, j);
            f.right = dom.index(i + 1, j);
            f.idx[0] = dom.index(i, j);         f.wx[0] = -w1;
            f.idx[1] = dom.index(i + 1, j);     f.wx[1] = +w1;
            f.idx[2] = dom.index(i, j + 1);     f.wy[2] = +w4;
            f.idx[3] = dom.index(i + 1, j + 1); f.wy[3] = +w4;
            f.idx[4] = dom.index(i, j - 1);     f.wy[4] = -w4;
            f.idx[5] = dom.index(i + 1, j - 1); f.wy[5] = -w4;
            const Eigen::Vector2d c = 0.5 * (dom.point(i, j) + dom.point(i + 1, j));
            f.cx = c.x(); f.cy = c.y();
            faces.push_back(f);
        }
    }
    // y-faces between (i,j) and (i,j+1)
    for (int j = 0; j + 1 < dom.ny; ++j) {
        for (int i = 0; i < dom.nx; ++i) {
            if (!interior(i, j) && !interior(i, j + 1)) continue;
            FaceStencil f{};
            f.axis = 1;
            f.left = dom.index(i, j);
            f.right = dom.index(i, j + 1);
            f.idx[0] = dom.index(i, j);         f.wy[0] = -w1;
            f.idx[1] = dom.index(i, j + 1);     f.wy[1] = +w1;
            f.idx[2] = dom.index(i + 1, j);     f.wx[2] = +w4;
            f.idx[3] = dom.index(i + 1, j + 1); f.wx[3] = +w4;
            f.idx[4] = dom.index(i - 1, j);     f.wx[4] = -w4;
            f.idx[5] = dom.index(i - 1, j + 1); f.wx[5] = -w4;
            const Eigen::Vector2d c = 0.5 * (dom.point(i, j) + dom.point(i, j + 1));
            f.cx = c.x(); f.cy = c.y();
            faces.push_back(f);
        }
    }
    return faces;
}

Eigen::Vector2d face_gradient(const FaceStencil& f, const std::vector<double>& u) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < 6; ++k) {
        gx += f.wx[k] * u[static_cast<std::size_t>(f.idx[k])];
        gy += f.wy[k] * u[static_cast<std::size_t>(f.idx[k])];
    }
    return {gx, gy};
}

/// Flux W(g) = F(g) F_xi(g); extends continuously by 0 at g = 0.
Eigen::Vector2d face_flux(const Norm& norm, const Eigen::Vector2d& g) {
    if (g.x() == 0.0 && g.y() == 0.0) return Eigen::Vector2d::Zero();
    return norm.eval(g) * norm.grad(g).head<2>();
}

/// Limit of dW/dg along a fixed direction d (0-homogeneous, positive
/// definite): M(d) = F_xi(d) F_xi(d)^T + F(d) F_xixi(d).
Eigen::Matrix2d limit_matrix(const Norm& norm, Eigen::Vector2d d) {
    if (d.norm() < 1e-14) d = Eigen::Vector2d(1.0, 0.0);
    const Eigen::VectorXd gr = norm.grad(d);
    return gr * gr.transpose() + norm.eval(d) * norm.hess(d);
}

/// Jacobian dW/dg of the regularized flux (sqrt(F^2+delta^2)-delta) F_xi;
/// used only inside the Newton linearization.
Eigen::Matrix2d face_matrix(const Norm& norm, const Eigen::Vector2d& g,
                            double delta, double floor,
                            const Eigen::Vector2d& fallback_dir) {
    const double F = (g.x() == 0.0 && g.y() == 0.0) ? 0.0 : norm.eval(g);
    if (F <= floor) return limit_matrix(norm, fallback_dir);
    const double S = std::sqrt(F * F + delta * delta);
    const Eigen::VectorXd gr = norm.grad(g);
    return (F / S) * (gr * gr.transpose()) + (S - delta) * norm.hess(g);
}

}  // namespace

// --------------------------------------------------------------- GridDomain2D

int GridDomain2D::count(NodeStatus s) const {
    return static_cast<int>(std::count(status.begin(), status.end(), s));
}

void GridDomain2D::set_boundary_values(const std::function<double(double, double)>& g) {
    boundary_values.assign(status.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (at(i, j) == NodeStatus::Boundary) {
                const Eigen::Vector2d p = point(i, j);
                boundary_values[static_cast<std::size_t>(index(i, j))] = g(p.x(), p.y());
            }
}

std::vector<double> GridDomain2D::sample(
    const std::function<double(double, double)>& g) const {
    std::vector<double> v(status.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (has_value(at(i, j))) {
                const Eigen::Vector2d p = point(i, j);
                v[static_cast<std::size_t>(index(i, j))] = g(p.x(), p.y());
            }
    return v;
}

GridDomain2D GridDomain2D::rectangle(double ax, double ay, double bx, double by,
                                     int cells_x) {
    if (!(ax < bx) || !(ay < by) || cells_x < 2)
        throw std::domain_error("GridDomain2D::rectangle: invalid box");
    GridDomain2D d;
    d.h = (bx - ax) / cells_x;
    const double cells_y_real = (by - ay) / d.h;
    const int cells_y = static_cast<int>(std::lround(cells_y_real));
    if (cells_y < 2 || std::abs(cells_y_real - cells_y) > 1e-9)
        throw std::domain_error(
            "GridDomain2D::rectangle: height must be a multiple of the spacing");
    d.x0 = ax;
    d.y0 = ay;
    d.nx = cells_x + 1;
    d.ny = cells_y + 1;
    d.status.assign(static_cast<std::size_t>(d.nx) * d.ny, NodeStatus::Boundary);
    for (int j = 1; j + 1 < d.ny; ++j)
        for (int i = 1; i + 1 < d.nx; ++i)
            d.status[static_cast<std::size_t>(d.index(i, j))] = NodeStatus::Interior;
    d.boundary_values.assign(d.status.size(), 0.0);
    d.shape = "rectangle";
    return d;
}

GridDomain2D GridDomain2D::wulff_ball(const Norm& norm, double radius,
                                      int cells_across) {
    if (!(radius > 0.0) || cells_across < 8)
        throw std::domain_error("GridDomain2D::wulff_ball: invalid parameters");
    if (norm.spec().dim != 2)
        throw std::domain_error("GridDomain2D::wulff_ball: norm must be 2D");
    GridDomain2D d;
    d.h = 2.0 * radius / cells_across;
    // Half-extent covers the widest Wulff-ball direction plus a two-node margin
    // so that interior stencils never leave the grid.  F0(x) >= |x| / b.
    const double reach = radius * norm.b();
    const int n_half = static_cast<int>(std::ceil(reach / d.h)) + 2;
    d.x0 = -n_half * d.h;
    d.y0 = -n_half * d.h;
    d.nx = 2 * n_half + 1;
    d.ny = 2 * n_half + 1;
    d.status.assign(static_cast<std::size_t>(d.nx) * d.ny, NodeStatus::Outside);
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(d.index(i, j)); };
    for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i) {
            const Eigen::Vector2d p = d.point(i, j);
            if (norm.dual(p) < radius) d.status[idx(i, j)] = NodeStatus::Interior;
        }
    // Boundary ring: outside nodes 8-adjacent to an interior node, so every
    // face stencil around interior nodes is complete.
    for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i) {
            if (d.status[idx(i, j)] != NodeStatus::Interior) continue;
            if (i == 0 || j == 0 || i + 1 == d.nx || j + 1 == d.ny)
                throw std::domain_error("GridDomain2D::wulff_ball: margin too small");
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di)
                    if (d.status[idx(i + di, j + dj)] == NodeStatus::Outside)
                        d.status[idx(i + di, j + dj)] = NodeStatus::Boundary;
        }
    d.boundary_values.assign(d.status.size(), 0.0);
    d.shape = "wulff-ball";
    return d;
}

// ------------------------------------------------------------ discrete operator

std::vector<double> apply_operator(const GridDomain2D& domain, const Norm& norm,
                                   const std::vector<double>& u) {
    if (u.size() != domain.status.size())
        throw std::invalid_argument("apply_operator: field size mismatch");
    std::vector<double> Qu(u.size(), 0.0);
    const double inv_h = 1.0 / domain.h;
    for (const FaceStencil& f : build_faces(domain)) {
        const Eigen::Vector2d g = face_gradient(f, u);
        const double flux = face_flux(norm, g)[f.axis];
        if (domain.status[static_cast<std::size_t>(f.left)] == NodeStatus::Interior)
            Qu[static_cast<std::size_t>(f.left)] += flux * inv_h;
        if (domain.status[static_cast<std::size_t>(f.right)] == NodeStatus::Interior)
            Qu[static_cast<std::size_t>(f.right)] -= flux * inv_h;
    }
    return Qu;
}

// ------------------------------------------------------------------ solver

namespace {

/// Unregularized residual R = -Qu - f(u) on interior dofs.
/// Returns the max norm; `gscale_out` reports max_face F(g).
double compute_residual(const GridDomain2D& dom, const Norm& norm,
                        const Nonlinearity& f, const std::vector<FaceStencil>& faces,
                        const std::vector<double>& u, const std::vector<int>& dof,
                        Eigen::VectorXd& R, double& gscale_out) {
    R.setZero();
    const double inv_h = 1.0 / dom.h;
    double gscale = 0.0;
    for (const FaceStencil& fc : faces) {
        const Eigen::Vector2d g = face_gradient(fc, u);
        const double F = (g.x() == 0.0 && g.y() == 0.0) ? 0.0 : norm.eval(g);
        gscale = std::max(gscale, F);
        const double flux = F == 0.0 ? 0.0 : F * norm.grad(g)[fc.axis];
        const int dl = dof[static_cast<std::size_t>(fc.left)];
        const int dr = dof[static_cast<std::size_t>(fc.right)];
        if (dl >= 0) R[dl] -= flux * inv_h;  // -Qu
        if (dr >= 0) R[dr] += flux * inv_h;
    }
    const bool needs_positive = f.kind == Nonlinearity::Kind::NegativePower;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const int d = dof[k];
        if (d < 0) continue;
        if (needs_positive && u[k] <= 0.0)
            throw std::domain_error(
                "solve_semilinear: negative-power nonlinearity hit a non-positive value");
        R[d] -= f.f(u[k]);
    }
    gscale_out = gscale;
    return R.size() ? R.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

DiscreteSolution2D solve_semilinear(const GridDomain2D& domain, const Norm& norm,
                                    const Nonlinearity& f, const NewtonOptions& opts,
                                    std::vector<double> initial) {
    if (norm.spec().dim != 2)
        throw std::domain_error("solve_semilinear: norm must be 2D");
    const std::size_t n_nodes = domain.status.size();
    if (domain.boundary_values.size() != n_nodes)
        throw std::domain_error("solve_semilinear: boundary values not set");

    std::vector<int> dof(n_nodes, -1);
    int ndof = 0;
    for (std::size_t k = 0; k < n_nodes; ++k)
        if (domain.status[k] == NodeStatus::Interior) dof[k] = ndof++;
    if (ndof == 0) throw std::domain_error("solve_semilinear: no interior nodes");

    std::vector<double> u(n_nodes, 0.0);
    double bsum = 0.0;
    int bcount = 0;
    for (std::size_t k = 0; k < n_nodes; ++k)
        if (domain.status[k] == NodeStatus::Boundary) {
            u[k] = domain.boundary_values[k];
            bsum += u[k];
            ++bcount;
        }
    const double fill = bcount ? bsum / bcount : 0.0;
    if (!initial.empty()) {
        if (initial.size() != n_nodes)
            throw std::domain_error("solve_semilinear: initial guess size mismatch");
        for (std::size_t k = 0; k < n_nodes; ++k)
            if (dof[k] >= 0) u[k] = initial[k];
    } else {
        for (std::size_t k = 0; k < n_nodes; ++k)
            if (dof[k] >= 0) u[k] = fill;
    }

    const std::vector<FaceStencil> faces = build_faces(domain);
    const Eigen::Vector2d dom_center = domain.center();
    const double inv_h = 1.0 / domain.h;

    DiscreteSolution2D sol;
    sol.domain = domain;
    sol.norm = norm.spec();
    sol.nonlinearity = f;

    Eigen::VectorXd R(ndof), Rtry(ndof);
    std::vector<double> history;
    double gscale = 0.0;
    double res = compute_residual(domain, norm, f, faces, u, dof, R, gscale);
    history.push_back(res);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    std::vector<Eigen::Triplet<double>> trips;
    int iter = 0;
    for (; iter < opts.max_iter && res > opts.tol; ++iter) {
        // Assemble J = dR/du with the regularized face Jacobians.
        const double delta = 1e-10 * (1.0 + gscale);
        const double floor = 1e-8 * (1.0 + gscale);
        trips.clear();
        trips.reserve(faces.size() * 12 + static_cast<std::size_t>(ndof));
        for (const FaceStencil& fc : faces) {
            const Eigen::Vector2d g = face_gradient(fc, u);
            const Eigen::Vector2d fb =
                Eigen::Vector2d(fc.cx, fc.cy) - dom_center;
            const Eigen::Matrix2d M = face_matrix(norm, g, delta, floor, fb);
            const int dl = dof[static_cast<std::size_t>(fc.left)];
            const int dr = dof[static_cast<std::size_t>(fc.right)];
            for (int k = 0; k < 6; ++k) {
                const int dm = dof[static_cast<std::size_t>(fc.idx[k])];
                if (dm < 0) continue;
                // d(flux)/du_m, flux component along the face axis
                const double dflux =
                    M(fc.axis, 0) * fc.wx[k] + M(fc.axis, 1) * fc.wy[k];
                // R contribution is -flux * inv_h to left, +flux * inv_h to right
                if (dl >= 0) trips.emplace_back(dl, dm, -dflux * inv_h);
                if (dr >= 0) trips.emplace_back(dr, dm, +dflux * inv_h);
            }
        }
        for (std::size_t k = 0; k < n_nodes; ++k)
            if (dof[k] >= 0) trips.emplace_back(dof[k], dof[k], -f.df(u[k]));

        Eigen::SparseMatrix<double> J(ndof, ndof);
        J.setFromTriplets(trips.begin(), trips.end());
        J.makeCompressed();
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw NewtonDivergence("solve_semilinear: Jacobian factorization failed",
                                   history);
        const Eigen::VectorXd step = lu.solve(-R);

        // Damped update: halve until the unregularized residual decreases.
        double s = 1.0;
        bool accepted = false;
        std::vector<double> utry(u);
        for (int halving = 0; halving <= opts.max_halvings; ++halving) {
            for (std::size_t k = 0; k < n_nodes; ++k)
                if (dof[k] >= 0) utry[k] = u[k] + s * step[dof[k]];
            double gs = 0.0;
            double rtry;
            try {
                rtry = compute_residual(domain, norm, f, faces, utry, dof, Rtry, gs);
            } catch (const std::domain_error&) {
                s *= 0.5;  // stepped outside the nonlinearity's domain
                continue;
            }
            if (rtry < res || rtry <= opts.tol) {
                u.swap(utry);
                R.swap(Rtry);
                res = rtry;
                gscale = gs;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        history.push_back(res);
        if (!accepted)
            throw NewtonDivergence(
                "solve_semilinear: damped Newton stalled at residual " +
                    std::to_string(res),
                history);
    }
    if (res > opts.tol)
        throw NewtonDivergence(
            "solve_semilinear: no convergence after " + std::to_string(iter) +
                " iterations (residual " + std::to_string(res) + ")",
            history);

    sol.values = std::move(u);
    sol.residual = res;
    sol.iterations = iter;
    sol.converged = true;
    sol.residual_history = std::move(history);
    return sol;
}

DiscreteSolution2D harmonic_replacement(const GridDomain2D& domain, const Norm& norm,
                                        const NewtonOptions& opts) {
    return solve_semilinear(domain, norm, Nonlinearity::zero(), opts);
}

double residual_norm(const DiscreteSolution2D& sol) {
    const Norm norm(sol.norm);
    const std::vector<double> Qu = apply_operator(sol.domain, norm, sol.values);
    double worst = 0.0;
    for (std::size_t k = 0; k < sol.values.size(); ++k)
        if (sol.domain.status[k] == NodeStatus::Interior)
            worst = std::max(worst,
                             std::abs(-Qu[k] - sol.nonlinearity.f(sol.values[k])));
    return worst;
}

}  // namespace finsler
