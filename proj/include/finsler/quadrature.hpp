#pragma once

/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre rules and composite 1D quadrature helpers.
 *
 * All bulk integrals in the toolkit (energies, Hardy ratios, ball masses)
 * reduce to 1D radial integrals; they are evaluated with composite
 * Gauss-Legendre panels.  Panels can be spaced uniformly or geometrically;
 * the geometric layout resolves integrable power singularities at r = 0
 * such as the r^{N-3} densities produced by the singular logarithmic
 * solution.
 */

#include <functional>
#include <vector>

namespace finsler {

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed by Newton iteration on the Legendre polynomial; deterministic.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussRule& get(int n);
};

/// Integral of f over [a, b] with a single n-point Gauss panel.
double gauss_panel(const std::function<double(double)>& f, double a, double b, int n = 8);

/// Composite rule: [a, b] split into `cells` equal panels, n-point Gauss each.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int cells = 128, int n = 8);

/// Composite rule on a caller-supplied strictly increasing breakpoint list.
double integrate_cells(const std::function<double(double)>& f,
                       const std::vector<double>& breaks, int n = 8);

/// Integral of f over (0, b] for f with an integrable power behaviour at 0:
/// geometric panels [b q^{k+1}, b q^k] are accumulated until the running tail
/// falls below `rel_tol` times the total (or the panel floor is reached).
/// Throws std::runtime_error if the panel contributions keep growing, i.e.
/// the integrand is not integrable at the origin.
double integrate_to_zero(const std::function<double(double)>& f, double b,
                         double rel_tol = 1e-15, int n = 8, double q = 0.6);

} // namespace finsler
