#include "finsler/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace finsler {

namespace {

GaussRule build_rule(int n) {
    if (n < 1) throw std::domain_error("GaussRule: order must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    // Newton iteration from the Chebyshev initial guess, symmetric pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: p0 = 1, p1 = x.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussRule& GaussRule::get(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = GaussRule::get(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int cells, int n) {
    if (cells < 1) throw std::domain_error("integrate: cells must be >= 1");
    double sum = 0.0;
    const double h = (b - a) / cells;
    for (int c = 0; c < cells; ++c) sum += gauss_panel(f, a + c * h, a + (c + 1) * h, n);
    return sum;
}

double integrate_cells(const std::function<double(double)>& f,
                       const std::vector<double>& breaks, int n) {
    if (breaks.size() < 2) throw std::domain_error("integrate_cells: need >= 2 breakpoints");
    double sum = 0.0;
    for (std::size_t c = 0; c + 1 < breaks.size(); ++c) {
        if (!(breaks[c] < breaks[c + 1]))
            throw std::domain_error("integrate_cells: breakpoints must increase strictly");
        sum += gauss_panel(f, breaks[c], breaks[c + 1], n);
    }
    return sum;
}

double integrate_to_zero(const std::function<double(double)>& f, double b,
                         double rel_tol, int n, double q) {
    if (b <= 0.0) throw std::domain_error("integrate_to_zero: upper limit must be > 0");
    double total = 0.0;
    double hi = b;
    double prev = 0.0;
    int growing = 0;
    for (int k = 0; k < 4000; ++k) {
        const double lo = hi * q;
        const double panel = gauss_panel(f, lo, hi, n);
        total += panel;
        if (k > 0 && std::abs(panel) > std::abs(prev)) {
            if (++growing >= 6)
                throw std::runtime_error(
                    "integrate_to_zero: integrand not integrable at the origin");
        } else {
            growing = 0;
        }
        prev = panel;
        hi = lo;
        if (k > 2 && std::abs(panel) <= rel_tol * std::abs(total)) break;
        if (hi < 1e-300) break;
    }
    return total;
}

} // namespace finsler
