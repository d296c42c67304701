#ifndef RSPCAT_SPECIAL_HPP
#define RSPCAT_SPECIAL_HPP

#include <cmath>
#include <vector>

#include "rspcat/types.hpp"

namespace rspcat {

/// Normalized Hermite functions psi_m(x) = H_m(x) e^{-x^2/2} / sqrt(2^m m! sqrt(pi))
/// for m = 0..mmax, by the three-term recurrence
///   psi_{m+1} = sqrt(2/(m+1)) x psi_m - sqrt(m/(m+1)) psi_{m-1}.
/// All values stay O(1), so no factorial overflow for any practical m.
RealVector hermite_functions(int mmax, double x);

/// Physicists' Hermite polynomial H_m(x) by the bare recurrence. Overflows
/// for large m; intended for small-m checks, not production paths.
double hermite_polynomial(int m, double x);

/// log(m!)
inline double log_factorial(double m) { return std::lgamma(m + 1.0); }

/// log C(n, k); requires 0 <= k <= n.
inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Table of log(k!) for k = 0..n.
std::vector<double> log_factorial_table(int n);

/// Associated Laguerre values L_k^a(z) for k = 0..kmax at fixed order a >= 0,
/// by the stable upward recurrence.
RealVector laguerre_row(int kmax, int a, double z);

struct GaussLegendreRule {
    RealVector nodes;    // on (-1, 1)
    RealVector weights;  // sum to 2
};

/// n-point Gauss-Legendre rule via Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

/// Integrate f over [a, b] with composite Gauss-Legendre panels, doubling the
/// panel count until the result changes by less than rel_tol (or 20 rounds).
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12) {
    static const GaussLegendreRule rule = gauss_legendre(16);
    double prev = 0.0;
    for (int panels = 4, round = 0; round < 20; panels *= 2, ++round) {
        double total = 0.0;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            for (int i = 0; i < rule.nodes.size(); ++i) {
                const double x = lo + 0.5 * h * (rule.nodes[i] + 1.0);
                total += 0.5 * h * rule.weights[i] * f(x);
            }
        }
        if (round > 0 && std::abs(total - prev) <= rel_tol * std::abs(total)) return total;
        prev = total;
    }
    return prev;
}

}  // namespace rspcat

#endif
