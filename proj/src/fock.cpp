#include "rspcat/fock.hpp"

#include <cmath>
#include <cstdio>

#include "rspcat/special.hpp"

namespace rspcat {

namespace {

constexpr double kVacuumWeightFloor = 1e-300;

/// Tail mass of a structured state: the last two amplitudes, so parity gaps
/// (exact zeros on the forbidden subspace) do not defeat the check.
double tail_mass(const ComplexVector& amps) {
    const auto n = amps.size();
    double t = std::norm(amps[n - 1]);
    if (n >= 2) t = std::max(t, std::norm(amps[n - 2]));
    return t;
}

void require_tail(double mass, double tail_tol, const char* what) {
    if (!(mass <= tail_tol)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: tail mass %.3e exceeds tolerance %.3e", what, mass,
                      tail_tol);
        throw CutoffTooSmall(buf);
    }
}

}  // namespace

double db_to_r(double s_db) { return s_db * std::log(10.0) / 20.0; }

double r_to_db(double r) { return 20.0 * r / std::log(10.0); }

SchmidtTMSS tmss_pure(double r, int cutoff, double tail_tol) {
    if (r < 0) throw Error("tmss_pure: r must be >= 0");
    if (cutoff < 1) throw Error("tmss_pure: cutoff must be >= 1");
    SchmidtTMSS s;
    s.r = r;
    s.lambdas.resize(cutoff + 1);
    const double t = std::tanh(r);
    const double c = std::cosh(r);
    double cur = 1.0 / c;
    for (int m = 0; m <= cutoff; ++m) {
        s.lambdas[m] = cur;
        cur *= t;
    }
    const double tail = s.lambdas[cutoff] * s.lambdas[cutoff];
    require_tail(tail, tail_tol, "tmss_pure");
    return s;
}

FockVector smss_pure(double r, int cutoff, double tail_tol) {
    if (r < 0) throw Error("smss_pure: r must be >= 0");
    FockVector v;
    v.amps = ComplexVector::Zero(cutoff + 1);
    const double t = std::tanh(r);
    const double log_t = t > 0 ? std::log(t) : 0.0;
    for (int m = 0; 2 * m <= cutoff; ++m) {
        if (m > 0 && t == 0.0) break;
        const double lg = m * log_t + 0.5 * log_factorial(2 * m) - m * std::log(2.0)
                          - log_factorial(m) - 0.5 * std::log(std::cosh(r));
        v.amps[2 * m] = std::exp(lg);
    }
    require_tail(tail_mass(v.amps), tail_tol, "smss_pure");
    return v;
}

FockVector coherent(Complex alpha, int cutoff, double tail_tol) {
    FockVector v;
    v.amps.resize(cutoff + 1);
    const double a2 = std::norm(alpha);
    Complex cur = std::exp(-0.5 * a2);
    v.amps[0] = cur;
    for (int m = 1; m <= cutoff; ++m) {
        cur *= alpha / std::sqrt(static_cast<double>(m));
        v.amps[m] = cur;
    }
    require_tail(tail_mass(v.amps), tail_tol, "coherent");
    return v;
}

FockVector cat(Complex alpha, Parity parity, int cutoff, double tail_tol) {
    const int sign = parity_sign(parity);
    if (parity == Parity::Odd && std::abs(alpha) < 1e-8) {
        throw DegenerateCat("cat: odd cat is singular at alpha = 0");
    }
    FockVector v;
    v.amps = ComplexVector::Zero(cutoff + 1);
    const double a2 = std::norm(alpha);
    const double norm = std::sqrt(2.0 * (1.0 + sign * std::exp(-2.0 * a2)));
    // (|alpha> + sign |-alpha>)/norm keeps only every other Fock amplitude.
    Complex cur = std::exp(-0.5 * a2);
    for (int m = 0; m <= cutoff; ++m) {
        if (m > 0) cur *= alpha / std::sqrt(static_cast<double>(m));
        const int keep = (m % 2 == 0) ? (sign > 0) : (sign < 0);
        if (keep) v.amps[m] = 2.0 * cur / norm;
    }
    require_tail(tail_mass(v.amps), tail_tol, "cat");
    return v;
}

Complex quad_overlap(int m, double x, double theta) {
    const double psi = hermite_functions(m, x)[m];
    return std::polar(psi, -m * theta);
}

SubtractedFock subtract_photons(const FockVector& state, int n) {
    if (n < 1) throw Error("subtract_photons: n must be >= 1");
    const int cutoff = state.cutoff();
    SubtractedFock out;
    out.state.amps = ComplexVector::Zero(cutoff + 1);
    out.state.normalized = false;
    for (int m = 0; m + n <= cutoff; ++m) {
        const double fall = std::exp(0.5 * (log_factorial(m + n) - log_factorial(m)));
        out.state.amps[m] = fall * state.amps[m + n];
    }
    out.weight = out.state.norm_sq();
    if (out.weight < kVacuumWeightFloor) {
        throw VacuumSubtraction("subtract_photons: herald never fires");
    }
    return out;
}

SubtractedTmss subtract_photons(const SchmidtTMSS& state, int n, Mode mode) {
    if (n < 1) throw Error("subtract_photons: n must be >= 1");
    const int cutoff = state.cutoff();
    SubtractedTmss out;
    out.removed = n;
    out.mode = mode;
    out.r = state.r;
    out.coeffs = RealVector::Zero(cutoff + 1);
    const double t = std::tanh(state.r);
    // tanh^m r expansion (the 1/cosh r of the Schmidt form is dropped), so
    // the weight is the N_n normalizer of the subtracted-state expansion.
    for (int m = n; m <= cutoff; ++m) {
        const double fall = std::exp(0.5 * (log_factorial(m) - log_factorial(m - n)));
        out.coeffs[m] = fall * std::pow(t, m);
    }
    out.weight = out.coeffs.squaredNorm();
    if (out.weight < kVacuumWeightFloor) {
        throw VacuumSubtraction("subtract_photons: herald never fires");
    }
    return out;
}

SubtractedTmss subtract_photons(const SubtractedTmss& state, int n) {
    if (n < 1) throw Error("subtract_photons: n must be >= 1");
    SubtractedTmss out = state;
    out.removed = state.removed + n;
    out.coeffs = RealVector::Zero(state.coeffs.size());
    for (int m = out.removed; m <= state.cutoff(); ++m) {
        const double fall =
            std::exp(0.5 * (log_factorial(m - state.removed) - log_factorial(m - out.removed)));
        out.coeffs[m] = fall * state.coeffs[m];
    }
    out.weight = out.coeffs.squaredNorm();
    if (out.weight < kVacuumWeightFloor) {
        throw VacuumSubtraction("subtract_photons: herald never fires");
    }
    return out;
}

double fidelity_pure(const FockVector& psi, const DensityMatrix& rho) {
    const Eigen::Index d = std::min<Eigen::Index>(psi.amps.size(), rho.elems.rows());
    const auto v = psi.amps.head(d);
    const Complex val = v.adjoint() * rho.elems.topLeftCorner(d, d) * v;
    double f = val.real();
    if (f < 0.0) f = 0.0;
    if (f > 1.0) f = 1.0;
    return f;
}

}  // namespace rspcat
