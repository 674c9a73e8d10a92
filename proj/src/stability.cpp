#include "finsler/stability.hpp"

#include "finsler/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace finsler {

namespace {

double quad_form(const SpMat& A, const Eigen::VectorXd& x) {
    return x.dot(A * x);
}

std::string interval_name(double R0, double R1) {
    std::ostringstream os;
    if (R0 == 0.0)
        os << "ball r < " << R1;
    else
        os << "annulus " << R0 << " < r < " << R1;
    return os.str();
}

}  // namespace

double QuadraticFormAssembly::form_value(const Eigen::VectorXd& x) const {
    return quad_form(stiffness, x) - quad_form(potential, x);
}

double QuadraticFormAssembly::mass_value(const Eigen::VectorXd& x) const {
    return quad_form(mass, x);
}

Eigen::VectorXd QuadraticFormAssembly::expand(const Eigen::VectorXd& dofs) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(dof_of_node.size()));
    for (std::size_t k = 0; k < dof_of_node.size(); ++k)
        if (dof_of_node[k] >= 0) full[static_cast<Eigen::Index>(k)] = dofs[dof_of_node[k]];
    return full;
}

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::StableCertified: return "stable-certified-on-domain";
        case VerdictKind::UnstableWithCertificate: return "unstable-with-certificate";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

// ------------------------------------------------------------- radial assembly

QuadraticFormAssembly assemble_radial_form(const RadialProfile& profile,
                                           const Nonlinearity& f, double R0,
                                           double R1, int nodes) {
    if (!(R0 >= 0.0) || !(R0 < R1))
        throw std::domain_error("assemble_radial_form: need 0 <= R0 < R1");
    if (nodes < 50) throw std::domain_error("assemble_radial_form: nodes >= 50");
    if (!profile.covers(R1) || (R0 > 0.0 ? !profile.covers(R0) : !profile.covers(0.0)))
        throw std::domain_error("assemble_radial_form: interval outside profile support");

    const int N = profile.N;
    const double kappa0 = Norm::euclidean_ball_volume(N);
    const double weight_scale = N * kappa0;

    std::vector<double> grid = (R0 == 0.0) ? uniform_grid(0.0, R1, nodes)
                                           : geometric_grid(R0, R1, nodes);

    // Dof map: Dirichlet at R1, and at R0 when R0 > 0 (natural at the origin).
    std::vector<int> dof(grid.size(), -1);
    int ndof = 0;
    const std::size_t first = (R0 > 0.0) ? 1 : 0;
    for (std::size_t i = first; i + 1 < grid.size(); ++i) dof[i] = ndof++;

    std::vector<Eigen::Triplet<double>> ts, tp, tm;
    const GaussRule& rule = GaussRule::get(8);
    for (std::size_t e = 0; e + 1 < grid.size(); ++e) {
        const double a = grid[e], b = grid[e + 1], L = b - a;
        double S[2][2] = {{0, 0}, {0, 0}}, P[2][2] = {{0, 0}, {0, 0}},
               M[2][2] = {{0, 0}, {0, 0}};
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double r = a + 0.5 * L * (rule.nodes[q] + 1.0);
            const double w = 0.5 * L * rule.weights[q] * weight_scale *
                             std::pow(r, N - 1);
            const double fp = f.df(profile.value(r));
            const double Nb[2] = {(b - r) / L, (r - a) / L};
            const double dNb[2] = {-1.0 / L, 1.0 / L};
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    S[ia][ib] += w * dNb[ia] * dNb[ib];
                    P[ia][ib] += w * fp * Nb[ia] * Nb[ib];
                    M[ia][ib] += w * Nb[ia] * Nb[ib];
                }
        }
        const int d[2] = {dof[e], dof[e + 1]};
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib) {
                if (d[ia] < 0 || d[ib] < 0) continue;
                ts.emplace_back(d[ia], d[ib], S[ia][ib]);
                tp.emplace_back(d[ia], d[ib], P[ia][ib]);
                tm.emplace_back(d[ia], d[ib], M[ia][ib]);
            }
    }

    QuadraticFormAssembly out;
    out.dim = N;
    out.domain = interval_name(R0, R1);
    out.nodes = std::move(grid);
    out.dof_of_node = std::move(dof);
    out.stiffness.resize(ndof, ndof);
    out.potential.resize(ndof, ndof);
    out.mass.resize(ndof, ndof);
    out.stiffness.setFromTriplets(ts.begin(), ts.end());
    out.potential.setFromTriplets(tp.begin(), tp.end());
    out.mass.setFromTriplets(tm.begin(), tm.end());
    return out;
}

// --------------------------------------------------------------- grid assembly

QuadraticFormAssembly assemble_grid_form(const DiscreteSolution2D& sol,
                                         const Norm& norm, const Nonlinearity& f) {
    if (!sol.converged)
        throw std::domain_error("assemble_grid_form: solution not converged");
    const GridDomain2D& dom = sol.domain;
    const double h = dom.h;

    std::vector<int> dof(dom.status.size(), -1);
    int ndof = 0;
    for (std::size_t k = 0; k < dom.status.size(); ++k)
        if (dom.status[k] == NodeStatus::Interior) dof[k] = ndof++;
    if (ndof == 0) throw std::domain_error("assemble_grid_form: no interior nodes");

    // Gradient terms: integrand matrix B(g) = F_xi F_xi^T + F * F_xixi,
    // the limit matrix along the cell-center direction when grad u degenerates.
    auto B_of = [&norm](const Eigen::Vector2d& v) -> Eigen::Matrix2d {
        const Eigen::VectorXd gr = norm.grad(v);
        return gr * gr.transpose() + norm.eval(v) * norm.hess(v);
    };

    // First pass: cell gradients and the degeneracy floor.
    struct Cell { int i, j; Eigen::Vector2d g; double uc; };
    std::vector<Cell> cells;
    double gmax = 0.0;
    for (int j = 0; j + 1 < dom.ny; ++j)
        for (int i = 0; i + 1 < dom.nx; ++i) {
            const NodeStatus s00 = dom.at(i, j), s10 = dom.at(i + 1, j),
                             s01 = dom.at(i, j + 1), s11 = dom.at(i + 1, j + 1);
            if (s00 == NodeStatus::Outside || s10 == NodeStatus::Outside ||
                s01 == NodeStatus::Outside || s11 == NodeStatus::Outside)
                continue;
            const double u00 = sol.values[static_cast<std::size_t>(dom.index(i, j))];
            const double u10 = sol.values[static_cast<std::size_t>(dom.index(i + 1, j))];
            const double u01 = sol.values[static_cast<std::size_t>(dom.index(i, j + 1))];
            const double u11 =
                sol.values[static_cast<std::size_t>(dom.index(i + 1, j + 1))];
            Cell c;
            c.i = i;
            c.j = j;
            c.g = Eigen::Vector2d((u10 + u11 - u00 - u01) / (2 * h),
                                  (u01 + u11 - u00 - u10) / (2 * h));
            c.uc = 0.25 * (u00 + u10 + u01 + u11);
            gmax = std::max(gmax, c.g.norm());
            cells.push_back(c);
        }
    const double floor = 1e-10 * (1.0 + gmax);
    const Eigen::Vector2d center = dom.center();

    // Corner basis gradients at the cell center and the exact bilinear mass.
    const double q = 1.0 / (2.0 * h);
    const Eigen::Vector2d gradN[4] = {{-q, -q}, {q, -q}, {-q, q}, {q, q}};
    const double mass_pattern[4][4] = {{4, 2, 2, 1}, {2, 4, 1, 2}, {2, 1, 4, 2},
                                       {1, 2, 2, 4}};

    std::vector<Eigen::Triplet<double>> ts, tp, tm;
    bool degenerate = false;
    for (const Cell& c : cells) {
        const bool deg = norm.eval(c.g) <= floor || (c.g.x() == 0.0 && c.g.y() == 0.0);
        Eigen::Vector2d dir = c.g;
        if (deg) {
            degenerate = true;
            dir = Eigen::Vector2d(dom.x0 + h * (c.i + 0.5), dom.y0 + h * (c.j + 0.5)) -
                  center;
        }
        const Eigen::Matrix2d B = B_of(dir.norm() < 1e-14 ? Eigen::Vector2d(1, 0) : dir);
        const double fp = f.df(c.uc);
        const int corner[4] = {dom.index(c.i, c.j), dom.index(c.i + 1, c.j),
                               dom.index(c.i, c.j + 1), dom.index(c.i + 1, c.j + 1)};
        const double area = h * h;
        for (int a = 0; a < 4; ++a) {
            const int da = dof[static_cast<std::size_t>(corner[a])];
            if (da < 0) continue;
            for (int b = 0; b < 4; ++b) {
                const int db = dof[static_cast<std::size_t>(corner[b])];
                if (db < 0) continue;
                ts.emplace_back(da, db, area * gradN[a].dot(B * gradN[b]));
                tp.emplace_back(da, db, area * fp * 0.0625);  // midpoint: N_a N_b = 1/16
                tm.emplace_back(da, db, area * mass_pattern[a][b] / 36.0);
            }
        }
    }

    QuadraticFormAssembly out;
    out.dim = 2;
    out.domain = sol.domain.shape + " grid h=" + std::to_string(h);
    out.dof_of_node = std::move(dof);
    out.degenerate_cells = degenerate;
    out.stiffness.resize(ndof, ndof);
    out.potential.resize(ndof, ndof);
    out.mass.resize(ndof, ndof);
    out.stiffness.setFromTriplets(ts.begin(), ts.end());
    out.potential.setFromTriplets(tp.begin(), tp.end());
    out.mass.setFromTriplets(tm.begin(), tm.end());
    return out;
}

// ------------------------------------------------------------------ eigenpairs

EigResult min_eigenvalue(const QuadraticFormAssembly& form) {
    return smallest_generalized_eigenpair(form.form_matrix(), form.mass);
}

double radial_form_value_direct(const RadialProfile& profile, const Nonlinearity& f,
                                const std::vector<double>& nodes,
                                const std::vector<double>& values) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw std::domain_error("radial_form_value_direct: bad test function");
    const int N = profile.N;
    const double weight_scale = N * Norm::euclidean_ball_volume(N);
    const GaussRule& rule = GaussRule::get(8);
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const double a = nodes[e], b = nodes[e + 1], L = b - a;
        const double slope = (values[e + 1] - values[e]) / L;
        for (std::size_t qq = 0; qq < rule.nodes.size(); ++qq) {
            const double r = a + 0.5 * L * (rule.nodes[qq] + 1.0);
            const double psi = values[e] + slope * (r - a);
            const double w = 0.5 * L * rule.weights[qq] * weight_scale *
                             std::pow(r, N - 1);
            total += w * (slope * slope - f.df(profile.value(r)) * psi * psi);
        }
    }
    return total;
}

// -------------------------------------------------------------------- verdicts

StabilityVerdict stability_verdict(const RadialProfile& profile, const Nonlinearity& f,
                                   double R0, double R1, int nodes) {
    const QuadraticFormAssembly form = assemble_radial_form(profile, f, R0, R1, nodes);
    const EigResult eig = min_eigenvalue(form);

    StabilityVerdict v;
    v.lambda_min = eig.value;
    v.witness = eig.vector;
    v.domain = form.domain;

    const Eigen::VectorXd full = form.expand(eig.vector);
    std::vector<double> vals(full.data(), full.data() + full.size());
    v.direct_form_value = radial_form_value_direct(profile, f, form.nodes, vals);
    v.direct_mass_value = form.mass_value(eig.vector);

    if (eig.value >= -kStabilityTol) {
        v.kind = VerdictKind::StableCertified;
    } else if (v.direct_form_value < 0.0) {
        v.kind = VerdictKind::UnstableWithCertificate;
    } else {
        v.kind = VerdictKind::Inconclusive;
    }
    return v;
}

std::vector<StabilityVerdict> stability_scan(const RadialProfile& profile,
                                             const Nonlinearity& f,
                                             const std::vector<double>& radii,
                                             int nodes) {
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::domain_error("stability_scan: radii must increase");
    std::vector<StabilityVerdict> out;
    out.reserve(radii.size());
    for (double R : radii) out.push_back(stability_verdict(profile, f, 0.0, R, nodes));
    return out;
}

StabilityVerdict exterior_stability(const RadialProfile& profile, const Nonlinearity& f,
                                    double R0, double R1, int nodes) {
    if (!(0.0 < R0 && R0 < R1))
        throw std::domain_error("exterior_stability: need 0 < R0 < R1");
    return stability_verdict(profile, f, R0, R1, nodes);
}

ExteriorScanResult exterior_scan(const RadialProfile& profile, const Nonlinearity& f,
                                 const std::vector<double>& R0_ladder,
                                 const std::vector<double>& multipliers,
                                 int nodes) {
    ExteriorScanResult result;
    for (double R0 : R0_ladder) {
        bool all_ok = true;
        for (double m : multipliers) {
            StabilityVerdict v = exterior_stability(profile, f, R0, m * R0, nodes);
            all_ok = all_ok && v.lambda_min >= -kStabilityTol;
            result.verdicts.push_back(std::move(v));
        }
        if (all_ok) {
            result.found = true;
            result.stable_R0 = R0;
            break;
        }
    }
    return result;
}

}  // namespace finsler
