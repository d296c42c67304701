#include "rspcat/gaussian.hpp"

#include <cmath>

#include "rspcat/special.hpp"

namespace rspcat {

double TwoModeCovariance::symplectic_nu_minus() const {
    // Delta = det A + det B + 2 det C, det sigma for block-diagonal quadrature form.
    const double delta = n * n + m * m + 2.0 * c1 * c2;
    const double det = (n * m - c1 * c1) * (n * m - c2 * c2);
    const double inner = std::max(delta * delta - 4.0 * det, 0.0);
    const double nu2 = 0.5 * (delta - std::sqrt(inner));
    return std::sqrt(std::max(nu2, 0.0));
}

TwoModeCovariance tmss_cm(double v_s, double v_a) {
    if (!(v_s > 0.0) || !(v_s <= 0.5) || !(v_a >= 0.5)) {
        throw Unphysical("tmss_cm: require 0 < V_s <= 1/2 <= V_a");
    }
    if (v_s * v_a < 0.25 - 1e-12) {
        throw Unphysical("tmss_cm: V_s V_a < 1/4");
    }
    TwoModeCovariance cm;
    cm.n = cm.m = 0.5 * (v_a + v_s);
    cm.c1 = 0.5 * (v_a - v_s);
    cm.c2 = -cm.c1;
    return cm;
}

TwoModeCovariance lossy_cm(const TwoModeCovariance& cm, double eta_A, double eta_B) {
    if (eta_A < 0.0 || eta_A > 1.0 || eta_B < 0.0 || eta_B > 1.0) {
        throw Error("lossy_cm: efficiencies must lie in [0, 1]");
    }
    TwoModeCovariance out;
    out.n = eta_A * cm.n + (1.0 - eta_A) * 0.5;
    out.m = eta_B * cm.m + (1.0 - eta_B) * 0.5;
    const double g = std::sqrt(eta_A * eta_B);
    out.c1 = g * cm.c1;
    out.c2 = g * cm.c2;
    return out;
}

TwoModeCovariance cm_from_effective(const EffectiveParams& p) {
    const double ch2 = std::cosh(p.r_s) * std::cosh(p.r_s);
    const double sh2 = std::sinh(p.r_s) * std::sinh(p.r_s);
    const double tau = p.eta * ch2;
    const double xi = (1.0 - p.eta) * ch2 + sh2;
    const double b = (1.0 + p.zeta * p.zeta) / (1.0 - p.zeta * p.zeta);
    TwoModeCovariance cm;
    cm.n = 0.5 * (tau * b + xi);
    cm.m = 0.5 * b;
    cm.c1 = 0.5 * std::sqrt(tau * (b * b - 1.0));
    cm.c2 = -cm.c1;
    return cm;
}

EffectiveParams effective_params(const TwoModeCovariance& cm) {
    if (std::abs(cm.c2 + cm.c1) > 1e-9) {
        throw NoSolution("effective_params: c2 != -c1 beyond tolerance");
    }
    if (!(cm.c1 > 0.0)) {
        throw NoSolution("effective_params: state must be correlated (c1 > 0)");
    }
    if (!cm.physical()) {
        throw Unphysical("effective_params: covariance matrix is unphysical");
    }
    const double b = 2.0 * cm.m;
    if (!(b > 1.0)) {
        throw NoSolution("effective_params: Bob variance at vacuum, zeta undefined");
    }
    EffectiveParams p;
    p.zeta = std::sqrt((b - 1.0) / (b + 1.0));
    const double tau = 4.0 * cm.c1 * cm.c1 / (b * b - 1.0);
    const double xi = 2.0 * cm.n - tau * b;
    const double ch_2rs = tau + xi;  // cosh^2 r_s + sinh^2 r_s
    if (ch_2rs < 1.0 - 1e-9) {
        throw NoSolution("effective_params: cosh(2 r_s) < 1");
    }
    p.r_s = 0.5 * std::acosh(std::max(ch_2rs, 1.0));
    const double ch2 = std::cosh(p.r_s) * std::cosh(p.r_s);
    p.eta = tau / ch2;
    if (p.eta > 1.0 + 1e-9 || !(p.eta > 0.0)) {
        throw NoSolution("effective_params: effective transmissivity out of (0, 1]");
    }
    p.eta = std::min(p.eta, 1.0);

    const TwoModeCovariance back = cm_from_effective(p);
    const double res = std::max({std::abs(back.n - cm.n), std::abs(back.m - cm.m),
                                 std::abs(back.c1 - cm.c1)});
    if (res > 1e-6) {
        throw NoSolution("effective_params: residual " + std::to_string(res));
    }
    return p;
}

namespace detail {

MixedCoeffContext::MixedCoeffContext(const EffectiveParams& p, int max_index)
    : params_(p), lgf_(log_factorial_table(std::max(max_index, 1))) {
    const double ch = std::cosh(p.r_s);
    const double sh = std::sinh(p.r_s);
    zeta_zero_ = p.zeta == 0.0;
    loss_zero_ = p.eta >= 1.0;
    sinh_zero_ = sh == 0.0;
    log_base_ = zeta_zero_ ? 0.0 : std::log(p.zeta * std::sqrt(p.eta) / ch);
    log_loss_ = loss_zero_ ? 0.0 : std::log((1.0 - p.eta) / p.eta);
    log_sinh_ = sinh_zero_ ? 0.0 : std::log(sh);
    log_cosh_ = std::log(ch);
    prefactor_ = (1.0 - p.zeta * p.zeta) / (ch * ch);
}

double MixedCoeffContext::coeff(int m1, int m2, int n1, int n2) const {
    if (m1 < 0 || m2 < 0 || n1 < 0 || n2 < 0) return 0.0;
    if (m1 + n2 != m2 + n1) return 0.0;
    if (zeta_zero_ && m2 + n2 > 0) return 0.0;
    const int d = m2 - m1;  // Bob excess; equals n2 - n1 by the delta
    const int klo = std::max(0, d);
    const int khi = std::min(m2, n2);
    if (khi < klo) return 0.0;
    double sum = 0.0;
    for (int k = klo; k <= khi; ++k) {
        if (k > 0 && loss_zero_) break;
        const int sinh_pow = 2 * (k - d);
        if (sinh_pow > 0 && sinh_zero_) continue;
        // sqrt of the four binomials, in log domain.
        double lg = 0.5 * (lgf_[m2] - lgf_[k] - lgf_[m2 - k]
                           + lgf_[n2] - lgf_[k] - lgf_[n2 - k]
                           + lgf_[m1] - lgf_[m2 - k] - lgf_[m1 - m2 + k]
                           + lgf_[n1] - lgf_[n2 - k] - lgf_[n1 - n2 + k]);
        if (k > 0) lg += k * log_loss_;
        if (sinh_pow > 0) lg += sinh_pow * log_sinh_;
        lg += 2.0 * d * log_cosh_;
        sum += std::exp(lg);
    }
    double value = prefactor_ * sum;
    if (m2 + n2 > 0) value *= std::exp((m2 + n2) * log_base_);
    return value;
}

}  // namespace detail

Complex mixed_coeff(int m1, int m2, int n1, int n2, const EffectiveParams& p) {
    const int mx = std::max({m1, m2, n1, n2, 1});
    detail::MixedCoeffContext ctx(p, mx);
    return Complex(ctx.coeff(m1, m2, n1, n2), 0.0);
}

TwoModeDensityMatrix materialize_two_mode(const EffectiveParams& p, int cutoff) {
    if (cutoff < 1) throw CutoffTooSmall("materialize_two_mode: cutoff must be >= 1");
    if (cutoff > 12) {
        throw CutoffTooLargeForOracle("materialize_two_mode: cutoff > 12 (O(N^4) memory guard)");
    }
    const int dim = cutoff + 1;
    TwoModeDensityMatrix rho;
    rho.cutoff = cutoff;
    rho.elems = ComplexMatrix::Zero(dim * dim, dim * dim);
    detail::MixedCoeffContext ctx(p, cutoff);
    for (int m1 = 0; m1 < dim; ++m1)
        for (int m2 = 0; m2 < dim; ++m2)
            for (int n1 = 0; n1 < dim; ++n1) {
                const int n2 = m2 + n1 - m1;
                if (n2 < 0 || n2 >= dim) continue;
                rho.at(m1, m2, n1, n2) = ctx.coeff(m1, m2, n1, n2);
            }
    const double tr = rho.trace();
    if (!(tr > 0.0)) throw Error("materialize_two_mode: vanishing trace");
    rho.elems /= tr;
    return rho;
}

namespace {

/// K_j in the truncated Fock space; entries K(m-j, m).
RealMatrix kraus_op(int dim, int j, double eta, const std::vector<double>& lgf) {
    RealMatrix K = RealMatrix::Zero(dim, dim);
    for (int m = j; m < dim; ++m) {
        double lg = 0.5 * (lgf[m] - lgf[j] - lgf[m - j]);
        lg += 0.5 * (m - j) * std::log(eta);
        if (j > 0) lg += 0.5 * j * std::log(1.0 - eta);
        K(m - j, m) = std::exp(lg);
    }
    return K;
}

}  // namespace

DensityMatrix loss_channel_oracle(const DensityMatrix& rho, double eta) {
    if (eta < 0.0 || eta > 1.0) throw Error("loss_channel_oracle: eta in [0, 1]");
    if (eta == 1.0) return rho;
    const int dim = rho.cutoff() + 1;
    const auto lgf = log_factorial_table(dim);
    DensityMatrix out;
    out.weight = rho.weight;
    out.elems = ComplexMatrix::Zero(dim, dim);
    if (eta == 0.0) {
        out.elems(0, 0) = rho.trace();
        return out;
    }
    for (int j = 0; j < dim; ++j) {
        const RealMatrix K = kraus_op(dim, j, eta, lgf);
        out.elems += K * rho.elems * K.transpose();
    }
    return out;
}

TwoModeDensityMatrix loss_channel_oracle(const TwoModeDensityMatrix& rho, double eta, Mode mode) {
    if (eta < 0.0 || eta > 1.0) throw Error("loss_channel_oracle: eta in [0, 1]");
    if (eta == 1.0) return rho;
    const int dim = rho.dim();
    TwoModeDensityMatrix out;
    out.cutoff = rho.cutoff;
    out.elems = ComplexMatrix::Zero(dim * dim, dim * dim);
    if (eta == 0.0) {
        // Full loss replaces the chosen mode by vacuum; trace out that mode.
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                Complex acc = 0.0;
                for (int k = 0; k < dim; ++k) {
                    acc += (mode == Mode::A) ? rho.at(k, a, k, b) : rho.at(a, k, b, k);
                }
                if (mode == Mode::A) {
                    out.at(0, a, 0, b) = acc;
                } else {
                    out.at(a, 0, b, 0) = acc;
                }
            }
        return out;
    }
    const auto lgf = log_factorial_table(dim);
    for (int j = 0; j < dim; ++j) {
        const RealMatrix K1 = kraus_op(dim, j, eta, lgf);
        // Lift K_j to the composite index on the chosen mode.
        ComplexMatrix K = ComplexMatrix::Zero(dim * dim, dim * dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                if (K1(a, b) == 0.0) continue;
                for (int other = 0; other < dim; ++other) {
                    if (mode == Mode::A) {
                        K(rho.idx(a, other), rho.idx(b, other)) = K1(a, b);
                    } else {
                        K(rho.idx(other, a), rho.idx(other, b)) = K1(a, b);
                    }
                }
            }
        out.elems += K * rho.elems * K.adjoint();
    }
    return out;
}

TwoModeDensityMatrix tmss_projector(const SchmidtTMSS& state) {
    const int dim = state.cutoff() + 1;
    ComplexVector psi = ComplexVector::Zero(dim * dim);
    for (int m = 0; m < dim; ++m) psi[m * dim + m] = state.lambdas[m];
    TwoModeDensityMatrix rho;
    rho.cutoff = state.cutoff();
    rho.elems = psi * psi.adjoint();
    return rho;
}

}  // namespace rspcat
