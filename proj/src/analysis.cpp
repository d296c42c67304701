#include "rspcat/analysis.hpp"

#include <cmath>

#include "rspcat/protocol.hpp"
#include "rspcat/special.hpp"

namespace rspcat {

namespace {

/// Golden-section maximum of f on [lo, hi] to the given x-tolerance.
template <typename F>
double golden_max(F&& f, double lo, double hi, double xtol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = f(c1), f2 = f(c2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1);
        }
    }
    return 0.5 * (a + b);
}

template <typename F>
CatFit fit_amplitude(F&& fidelity_of, Parity parity, double alpha_max) {
    if (alpha_max < 0.1) throw Error("best_amplitude: alpha_max must be >= 0.1");
    double best_a = 1e-3;
    double best_f = fidelity_of(best_a);
    for (double a = 1e-3 + 0.01; a <= alpha_max + 1e-12; a += 0.01) {
        const double f = fidelity_of(a);
        if (f > best_f) {
            best_f = f;
            best_a = a;
        }
    }
    const double lo = std::max(1e-3, best_a - 0.01);
    const double hi = std::min(alpha_max, best_a + 0.01);
    const double a_star = golden_max(fidelity_of, lo, hi, 1e-5);
    CatFit fit;
    fit.parity = parity;
    fit.alpha_star = a_star;
    fit.fidelity = fidelity_of(a_star);
    return fit;
}

/// Series sum with relative-tolerance truncation.
template <typename Term>
double sum_series(Term&& term, int kmax = 10000, double rel_tol = 1e-18) {
    double s = 0.0;
    for (int k = 0; k < kmax; ++k) {
        const double t = term(k);
        s += t;
        if (k > 8 && std::abs(t) < rel_tol * (std::abs(s) + 1e-300)) break;
    }
    return s;
}

}  // namespace

double wigner_point(const DensityMatrix& rho, double x, double p) {
    const int cutoff = rho.cutoff();
    const Complex al = Complex(x, p) / std::sqrt(2.0);
    const double a2 = std::norm(al);
    const double z = 4.0 * a2;
    static thread_local std::vector<double> lgf;
    if (static_cast<int>(lgf.size()) < cutoff + 1) lgf = log_factorial_table(cutoff + 1);
    double sum = 0.0;
    // One Laguerre recurrence per diagonal d = m - n.
    for (int d = 0; d <= cutoff; ++d) {
        const Complex al_pow = d == 0 ? Complex(1.0, 0.0) : std::pow(2.0 * al, d);
        double lkm1 = 0.0, lk = 1.0;
        for (int k = 0; k + d <= cutoff; ++k) {
            if (k > 0) {
                const double next = ((2.0 * k - 1.0 + d - z) * lk - (k - 1.0 + d) * lkm1) / k;
                lkm1 = lk;
                lk = next;
            }
            const int n = k, m = k + d;
            const double scale =
                (n % 2 ? -1.0 : 1.0) * std::exp(0.5 * (lgf[n] - lgf[m])) * lk;
            const Complex contrib = rho.elems(n, m) * al_pow * scale;
            sum += (d == 0) ? contrib.real() : 2.0 * contrib.real();
        }
    }
    // X_{nm} carries 2/pi in alpha coordinates; /2 converts to the quadrature
    // convention (vacuum W(0,0) = 1/pi).
    return sum * std::exp(-2.0 * a2) / M_PI;
}

double w_origin(const DensityMatrix& rho) {
    double s = 0.0;
    for (int m = 0; m <= rho.cutoff(); ++m) {
        s += (m % 2 ? -1.0 : 1.0) * rho.elems(m, m).real();
    }
    return s / M_PI;
}

WignerGrid wigner_grid(const DensityMatrix& rho, const GridSpec& spec) {
    WignerGrid grid;
    grid.xs = RealVector::LinSpaced(spec.points, -spec.extent, spec.extent);
    grid.ps = grid.xs;
    grid.values.resize(spec.points, spec.points);
    for (int i = 0; i < spec.points; ++i)
        for (int j = 0; j < spec.points; ++j)
            grid.values(i, j) = wigner_point(rho, grid.xs[i], grid.ps[j]);
    return grid;
}

double negativity_volume(const DensityMatrix& rho, const GridSpec& spec) {
    const WignerGrid grid = wigner_grid(rho, spec);
    const double cell = (grid.xs[1] - grid.xs[0]) * (grid.ps[1] - grid.ps[0]);
    return (-grid.values.array()).max(0.0).sum() * cell;
}

double cat_fidelity(const DensityMatrix& rho, double alpha, Parity parity) {
    return fidelity_pure(cat(alpha, parity, rho.cutoff(), 1.0), rho);
}

double cat_fidelity(const FockVector& psi, double alpha, Parity parity) {
    const FockVector c = cat(alpha, parity, psi.cutoff(), 1.0);
    return std::min(std::norm(c.amps.dot(psi.amps)), 1.0);
}

CatFit best_amplitude(const DensityMatrix& rho, Parity parity, double alpha_max) {
    return fit_amplitude([&](double a) { return cat_fidelity(rho, a, parity); }, parity,
                         alpha_max);
}

CatFit best_amplitude(const FockVector& psi, Parity parity, double alpha_max) {
    return fit_amplitude([&](double a) { return cat_fidelity(psi, a, parity); }, parity,
                         alpha_max);
}

double tmss_cat_fidelity(double r, int n, double alpha, Parity parity) {
    if (n < 1) throw Error("tmss_cat_fidelity: n must be >= 1");
    if (r <= 0.0) throw VacuumSubtraction("tmss_cat_fidelity: r = 0 never heralds");
    const int sign = parity_sign(parity);
    if (parity == Parity::Odd && std::abs(alpha) < 1e-8) {
        throw DegenerateCat("tmss_cat_fidelity: odd cat at alpha = 0");
    }
    // Fock support sits on m = n + 2k, so the cat factor (alpha^m +- (-alpha)^m)
    // vanishes identically unless the cat parity matches n.
    if ((n % 2 == 0) != (sign > 0)) return 0.0;
    const double t = std::tanh(r);
    const double lt = std::log(t);
    const double la = std::log(std::abs(alpha));
    const double norm = sum_series([&](int k) {
        const int m = n + 2 * k;
        return std::exp(log_factorial(m) + 2.0 * m * lt - 2.0 * k * std::log(2.0)
                        - 2.0 * log_factorial(k));
    });
    const double overlap = sum_series([&](int k) {
        const int m = n + 2 * k;
        return 2.0 * std::exp(m * (lt + la) - k * std::log(2.0) - log_factorial(k));
    });
    const double cat_norm = std::exp(-alpha * alpha)
                            / (2.0 * (1.0 + sign * std::exp(-2.0 * alpha * alpha)));
    const double f = cat_norm * overlap * overlap / norm;
    return std::min(f, 1.0);
}

double smss_fidelity(double r, int n, double alpha, Parity parity) {
    if (n < 1) throw Error("smss_fidelity: n must be >= 1");
    if (r <= 0.0) throw VacuumSubtraction("smss_fidelity: herald impossible at r = 0");
    const int sign = parity_sign(parity);
    if (parity == Parity::Odd && std::abs(alpha) < 1e-8) {
        throw DegenerateCat("smss_fidelity: odd cat at alpha = 0");
    }
    // Support sits on 2m - n, whose parity is that of n.
    if ((n % 2 == 0) != (sign > 0)) return 0.0;
    const double t = std::tanh(r);
    const double lt = std::log(t);
    const double la = std::log(std::abs(alpha));
    const int mlo = (n + 1) / 2;
    const double norm = sum_series([&](int j) {
        const int m = mlo + j;
        return std::exp(2.0 * m * lt
                        + 2.0 * (log_factorial(2 * m) - m * std::log(2.0) - log_factorial(m))
                        - log_factorial(2 * m - n));
    });
    const double overlap = sum_series([&](int j) {
        const int m = mlo + j;
        return 2.0 * std::exp(m * lt + log_factorial(2 * m) - m * std::log(2.0)
                              - log_factorial(m) - log_factorial(2 * m - n)
                              + (2 * m - n) * la);
    });
    const double cat_norm = std::exp(-alpha * alpha)
                            / (2.0 * (1.0 + sign * std::exp(-2.0 * alpha * alpha)));
    const double f = cat_norm * overlap * overlap / norm;
    return std::min(f, 1.0);
}

CatFit scheme_best_fit(Scheme scheme, int n, double s_db, double alpha_max, int cutoff) {
    const Parity parity = (n % 2 == 0) ? Parity::Even : Parity::Odd;
    const double r = db_to_r(s_db);
    if (scheme == Scheme::TMSS) {
        const int nc = cutoff > 0 ? cutoff : (s_db <= 4.0 ? 40 : 80);
        const FockVector state =
            bob_pure_conditional(r, n, ProjectionSpec::exact(M_PI / 2.0), nc);
        return best_amplitude(state, parity, alpha_max);
    }
    const int nc = cutoff > 0 ? cutoff : (s_db <= 4.0 ? 80 : 160);
    const auto sub = subtract_photons(smss_pure(r, nc, 1e-6), n);
    FockVector state = sub.state;
    state.amps /= state.amps.norm();
    state.normalized = true;
    return best_amplitude(state, parity, alpha_max);
}

OptimalSqueezing optimal_squeezing(int n, Scheme scheme, const SqueezingGrid& grid) {
    if (n < 1) throw Error("optimal_squeezing: n must be >= 1");
    if (!(grid.step_db > 0.0) || !(grid.hi_db >= grid.lo_db)) {
        throw Error("optimal_squeezing: bad grid");
    }
    OptimalSqueezing best;
    best.fidelity = -1.0;
    for (double s = grid.lo_db; s <= grid.hi_db + 1e-9; s += grid.step_db) {
        const CatFit fit = scheme_best_fit(scheme, n, s);
        if (fit.fidelity > best.fidelity) {
            best = {s, fit.alpha_star, fit.fidelity};
        }
    }
    return best;
}

double best_fidelity_at_amplitude(Scheme scheme, int n, double alpha, const SqueezingGrid& grid) {
    const Parity parity = (n % 2 == 0) ? Parity::Even : Parity::Odd;
    double best = 0.0;
    for (double s = grid.lo_db; s <= grid.hi_db + 1e-9; s += grid.step_db) {
        const double r = db_to_r(s);
        const double f = scheme == Scheme::TMSS ? tmss_cat_fidelity(r, n, alpha, parity)
                                                : smss_fidelity(r, n, alpha, parity);
        best = std::max(best, f);
    }
    return best;
}

double fidelity_mixed(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const Eigen::Index d = std::min(rho.elems.rows(), sigma.elems.rows());
    const ComplexMatrix a = rho.elems.topLeftCorner(d, d);
    const ComplexMatrix b = sigma.elems.topLeftCorner(d, d);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
    const RealVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const ComplexMatrix sqrt_a =
        es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> inner(sqrt_a * b * sqrt_a);
    const double root_sum = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(root_sum * root_sum, 1.0);
}

}  // namespace rspcat
