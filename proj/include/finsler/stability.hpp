#pragma once

/// Second-variation (stability) quadratic form for -Qu = f(u):
///
///     Q(psi) = integral of  <F_xi(grad u), grad psi>^2
///                         + F(grad u) * (grad psi)^T F_xixi(grad u) (grad psi)
///                         - f'(u) psi^2.
///
/// A solution is stable when Q(psi) >= 0 for all compactly supported test
/// functions.  For radial data u = phi(F0(x)) the form reduces exactly to
///
///     Q(psi) = N kappa0 * integral_0^R (psi'^2 - f'(phi) psi^2) r^{N-1} dr
///
/// for radial test functions (the Hessian term vanishes since F_xixi
/// annihilates its argument).  This module assembles both the radial and
/// the full 2D grid discretizations and certifies verdicts through the
/// smallest generalized eigenvalue of (stiffness - potential, mass).

#include "finsler/bvp.hpp"
#include "finsler/eig.hpp"
#include "finsler/norm.hpp"
#include "finsler/radial.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace finsler {

/// Discretized stability form.  All matrices act on Dirichlet dofs and carry
/// the same measure (for radial assemblies: N kappa0 r^{N-1} dr), so that
/// generalized eigenvalues of (stiffness - potential, mass) are Rayleigh
/// quotients of the continuum form.
struct QuadraticFormAssembly {
    SpMat stiffness;  ///< gradient terms; positive semidefinite
    SpMat potential;  ///< f'(u)-weighted mass term
    SpMat mass;       ///< plain mass term in the same measure
    int dim = 0;      ///< spatial dimension N
    std::string domain;  ///< human-readable domain description

    // Radial assemblies: full node vector and the dof map (-1 = Dirichlet).
    std::vector<double> nodes;
    std::vector<int> dof_of_node;

    bool degenerate_cells = false;  ///< 2D: cells where grad u ~ 0 hit the
                                    ///< radial-limit convention

    SpMat form_matrix() const { return SpMat(stiffness - potential); }
    double form_value(const Eigen::VectorXd& x) const;
    double mass_value(const Eigen::VectorXd& x) const;

    /// Expand a dof vector to the full node set (zeros on Dirichlet nodes).
    Eigen::VectorXd expand(const Eigen::VectorXd& dofs) const;
};

enum class VerdictKind { StableCertified, UnstableWithCertificate, Inconclusive };

std::string to_string(VerdictKind k);

struct StabilityVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    double lambda_min = 0.0;
    Eigen::VectorXd witness;     ///< dof vector, unit mass norm
    std::string domain;
    double direct_form_value = 0.0;  ///< fresh-quadrature value on the witness
    double direct_mass_value = 0.0;
};

/// Tolerance below which eigenvalues count as nonnegative (discretization floor).
inline constexpr double kStabilityTol = 1e-8;

/// P1 finite elements for the radial form on [R0, R1] with `nodes` nodes
/// (uniform when R0 = 0, geometric otherwise).  Dirichlet at R1 always and
/// at R0 when R0 > 0; the origin keeps its natural condition.
QuadraticFormAssembly assemble_radial_form(const RadialProfile& profile,
                                           const Nonlinearity& f, double R0,
                                           double R1, int nodes);

/// Full anisotropic form on the 2D grid of a converged solution, cell-midpoint
/// quadrature; Dirichlet on the domain boundary.  Cells with degenerate
/// gradient use the radial-limit convention (see bvp.hpp).
QuadraticFormAssembly assemble_grid_form(const DiscreteSolution2D& sol,
                                         const Norm& norm, const Nonlinearity& f);

/// Smallest generalized eigenvalue of (stiffness - potential, mass).
EigResult min_eigenvalue(const QuadraticFormAssembly& form);

/// Evaluate the radial stability form on a piecewise-linear test function
/// given by (nodes, values) by fresh Gauss quadrature — independent of any
/// assembled matrices; used to re-check instability certificates.
double radial_form_value_direct(const RadialProfile& profile, const Nonlinearity& f,
                                const std::vector<double>& nodes,
                                const std::vector<double>& values);

/// Verdict for the ball [0, R] (or annulus when R0 > 0).
StabilityVerdict stability_verdict(const RadialProfile& profile, const Nonlinearity& f,
                                   double R0, double R1, int nodes = 2000);

/// One verdict per radius R, domain [0, R].
std::vector<StabilityVerdict> stability_scan(const RadialProfile& profile,
                                             const Nonlinearity& f,
                                             const std::vector<double>& radii,
                                             int nodes = 2000);

/// Verdict for the annulus [R0, R1], Dirichlet at both ends.
StabilityVerdict exterior_stability(const RadialProfile& profile, const Nonlinearity& f,
                                    double R0, double R1, int nodes = 2000);

/// Scan a ladder of inner radii; returns the smallest R0 for which the
/// verdicts on annuli [R0, m*R0] are nonnegative for every multiplier m.
struct ExteriorScanResult {
    double stable_R0 = 0.0;  ///< 0 when no tested R0 certifies
    bool found = false;
    std::vector<StabilityVerdict> verdicts;  ///< all tested annuli, in order
};
ExteriorScanResult exterior_scan(const RadialProfile& profile, const Nonlinearity& f,
                                 const std::vector<double>& R0_ladder,
                                 const std::vector<double>& multipliers,
                                 int nodes = 2000);

}  // namespace finsler
