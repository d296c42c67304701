#ifndef RSPCAT_PROTOCOL_HPP
#define RSPCAT_PROTOCOL_HPP

#include "rspcat/fock.hpp"
#include "rspcat/gaussian.hpp"
#include "rspcat/types.hpp"

namespace rspcat {

/// Alice's homodyne projection: measure x^theta, accept outcomes within
/// `window` of `outcome` (window 0 means the exact projector).
struct ProjectionSpec {
    double theta = 0.0;    // stored mod 2 pi
    double outcome = 0.0;  // target x^theta
    double window = 0.0;   // half-width delta x >= 0

    static ProjectionSpec exact(double theta, double outcome = 0.0);
    static ProjectionSpec windowed(double theta, double half_width, double outcome = 0.0);
};

/// Bob's conditional state for the lossless pure pipeline: subtract n photons
/// from mode A of a pure TMSS and project on x_A^theta = 0. Amplitudes carry
/// only Fock indices m = n, n+2, n+4, ...; the rest are exactly zero.
FockVector bob_pure_conditional(double r, int n, const ProjectionSpec& spec, int cutoff);

/// Bob's conditional state for the mixed shared state (single-photon
/// subtraction), exact projection at spec.outcome.
DensityMatrix bob_mixed_conditional(const EffectiveParams& p, const ProjectionSpec& spec,
                                    int cutoff);

/// Window-averaged Bob state over outcomes in [outcome - window, outcome + window],
/// Gauss-Legendre quadrature with node doubling until the normalized state is
/// stable to 1e-8.
DensityMatrix bob_windowed(const EffectiveParams& p, const ProjectionSpec& spec, int cutoff);

/// Normalized density of Alice's homodyne outcome x on the heralded ensemble.
/// Independent of theta (kept in the signature for interface parity).
double outcome_pdf(const EffectiveParams& p, double theta, double x);

/// P(delta x) = integral of the outcome density over the selection window.
double success_probability(const EffectiveParams& p, const ProjectionSpec& spec);

/// Cached heralded-outcome density: precomputes the Bob-trace weights so
/// repeated evaluations and window integrals are O(cutoff) per point.
class HeraldDensity {
  public:
    explicit HeraldDensity(const EffectiveParams& p, int alice_cutoff = 128,
                           int bob_cutoff = 128);

    double operator()(double x) const;  // normalized density
    double unnormalized(double x) const;
    double normalizer() const { return normalizer_; }
    double window_probability(double half_width) const;

  private:
    RealVector weights_;  // weights_[k] multiplies psi_k(x)^2
    double normalizer_ = 1.0;
};

}  // namespace rspcat

#endif
