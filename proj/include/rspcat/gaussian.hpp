#ifndef RSPCAT_GAUSSIAN_HPP
#define RSPCAT_GAUSSIAN_HPP

#include "rspcat/fock.hpp"
#include "rspcat/types.hpp"

namespace rspcat {

/// Two-mode covariance matrix in (n, m, c1, c2) form, vacuum variance 1/2:
/// diag blocks n*I, m*I and cross block diag(c1, c2).
struct TwoModeCovariance {
    double n = 0.5;   // Alice quadrature variance
    double m = 0.5;   // Bob quadrature variance
    double c1 = 0.0;  // x-x correlation
    double c2 = 0.0;  // p-p correlation

    /// Smaller symplectic eigenvalue; physical states have nu_minus >= 1/2.
    double symplectic_nu_minus() const;
    bool physical(double tol = 1e-9) const { return symplectic_nu_minus() >= 0.5 - tol; }
};

/// Parameters of the effective mixed-state model: an effective TMSS with
/// squeezing zeta whose Alice arm passes a loss channel eta followed by a
/// two-mode squeezer r_s.
struct EffectiveParams {
    double zeta = 0.0;
    double r_s = 0.0;
    double eta = 1.0;
};

/// CM of the (possibly impure) source TMSS from measured squeezed /
/// antisqueezed variances: n = m = (V_a+V_s)/2, c1 = -c2 = (V_a-V_s)/2.
TwoModeCovariance tmss_cm(double v_s, double v_a);

/// Transmission through loss channels eta_A (Alice) and eta_B (Bob).
TwoModeCovariance lossy_cm(const TwoModeCovariance& cm, double eta_A, double eta_B);

/// Rebuild the CM generated by the effective model (inverse of effective_params).
TwoModeCovariance cm_from_effective(const EffectiveParams& p);

/// Solve the matching conditions 2n = tau b + xi, 2m = b, 2c = sqrt(tau(b^2-1))
/// with tau = eta cosh^2 r_s, xi = (1-eta) cosh^2 r_s + sinh^2 r_s,
/// b = (1+zeta^2)/(1-zeta^2). All three admit a closed-form solution:
/// zeta from b, tau from the correlation, then tau + xi = cosh 2 r_s.
EffectiveParams effective_params(const TwoModeCovariance& cm);

/// Fock coefficient <m1 m2| rho_mixed |n1 n2> of the effective model state;
/// the coefficient set is trace-1 as written. Zero unless m1 + n2 == m2 + n1.
/// Indices 1 = Alice, 2 = Bob.
Complex mixed_coeff(int m1, int m2, int n1, int n2, const EffectiveParams& p);

/// Dense trace-normalized two-mode state of the effective model.
/// Test-oracle use only; cutoff <= 12.
TwoModeDensityMatrix materialize_two_mode(const EffectiveParams& p, int cutoff);

/// Bosonic loss channel via the beamsplitter Kraus decomposition
/// K_j = sum_m sqrt(C(m,j) eta^{m-j} (1-eta)^j) |m-j><m|. Trace preserving up
/// to cutoff leakage; eta = 1 is the identity.
DensityMatrix loss_channel_oracle(const DensityMatrix& rho, double eta);
TwoModeDensityMatrix loss_channel_oracle(const TwoModeDensityMatrix& rho, double eta, Mode mode);

/// Dense projector |psi><psi| of a pure TMSS on the composite-index space.
TwoModeDensityMatrix tmss_projector(const SchmidtTMSS& state);

namespace detail {

/// Precomputed logs for fast repeated mixed_coeff evaluation.
class MixedCoeffContext {
  public:
    MixedCoeffContext(const EffectiveParams& p, int max_index);

    /// Real-valued coefficient (the printed formula is nonnegative).
    double coeff(int m1, int m2, int n1, int n2) const;

    const EffectiveParams& params() const { return params_; }

  private:
    EffectiveParams params_;
    std::vector<double> lgf_;
    double log_base_ = 0.0;  // log(zeta sqrt(eta) / cosh r_s)
    double log_loss_ = 0.0;  // log((1-eta)/eta)
    double log_sinh_ = 0.0;
    double log_cosh_ = 0.0;
    double prefactor_ = 0.0;  // (1-zeta^2)/cosh^2 r_s
    bool zeta_zero_ = false;
    bool loss_zero_ = false;
    bool sinh_zero_ = false;
};

}  // namespace detail

}  // namespace rspcat

#endif
