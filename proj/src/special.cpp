#include "rspcat/special.hpp"

#include <cmath>

namespace rspcat {

RealVector hermite_functions(int mmax, double x) {
    RealVector out(mmax + 1);
    const double p0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    out[0] = p0;
    if (mmax >= 1) out[1] = std::sqrt(2.0) * x * p0;
    for (int m = 1; m < mmax; ++m) {
        out[m + 1] = std::sqrt(2.0 / (m + 1)) * x * out[m]
                     - std::sqrt(static_cast<double>(m) / (m + 1)) * out[m - 1];
    }
    return out;
}

double hermite_polynomial(int m, double x) {
    double hm1 = 0.0, h = 1.0;
    for (int k = 0; k < m; ++k) {
        const double next = 2.0 * x * h - 2.0 * k * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

std::vector<double> log_factorial_table(int n) {
    std::vector<double> t(n + 1);
    t[0] = 0.0;
    for (int k = 1; k <= n; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
}

RealVector laguerre_row(int kmax, int a, double z) {
    RealVector out(kmax + 1);
    out[0] = 1.0;
    if (kmax >= 1) out[1] = 1.0 + a - z;
    for (int k = 1; k < kmax; ++k) {
        out[k + 1] = ((2.0 * k + 1.0 + a - z) * out[k] - (k + a) * out[k - 1]) / (k + 1.0);
    }
    return out;
}

GaussLegendreRule gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace rspcat
