#ifndef RSPCAT_ANALYSIS_HPP
#define RSPCAT_ANALYSIS_HPP

#include <string>

#include "rspcat/fock.hpp"
#include "rspcat/types.hpp"

namespace rspcat {

/// Wigner values on a square quadrature grid, W(x_i, p_j) at values(i, j).
/// Convention: integral of W dx dp = 1, vacuum W(0,0) = 1/pi.
struct WignerGrid {
    RealVector xs;
    RealVector ps;
    RealMatrix values;
    std::string convention = "quadrature-1/pi";
};

struct GridSpec {
    double extent = 5.0;  // grid covers [-extent, extent]^2
    int points = 201;
};

struct CatFit {
    double alpha_star = 0.0;
    Parity parity = Parity::Odd;
    double fidelity = 0.0;
};

enum class Scheme { TMSS, SMSS };

struct SqueezingGrid {
    double lo_db = 6.0;
    double hi_db = 10.0;
    double step_db = 0.1;
};

struct OptimalSqueezing {
    double s_star_db = 0.0;
    double alpha_star = 0.0;
    double fidelity = 0.0;
};

/// Fock-basis Wigner function at one point, Laguerre-expansion form with the
/// terms generated by the stable upward recurrence.
double wigner_point(const DensityMatrix& rho, double x, double p);

/// Closed form W(0,0) = (1/pi) sum_m (-1)^m rho_mm.
double w_origin(const DensityMatrix& rho);

WignerGrid wigner_grid(const DensityMatrix& rho, const GridSpec& spec);

/// Integral of max(0, -W) over the grid (Riemann sum).
double negativity_volume(const DensityMatrix& rho, const GridSpec& spec);

/// Overlap with the ideal cat of real amplitude alpha > 0.
double cat_fidelity(const DensityMatrix& rho, double alpha, Parity parity);
double cat_fidelity(const FockVector& psi, double alpha, Parity parity);

/// Best-fit cat amplitude: coarse grid (step 0.01) over [1e-3, alpha_max],
/// then golden-section refinement to 1e-5.
CatFit best_amplitude(const DensityMatrix& rho, Parity parity, double alpha_max);
CatFit best_amplitude(const FockVector& psi, Parity parity, double alpha_max);

/// Closed-form fidelity between the n-photon-subtracted TMSS conditional
/// state and the ideal cat; zero for mismatched parity.
double tmss_cat_fidelity(double r, int n, double alpha, Parity parity);

/// Closed-form fidelity for the local scheme: n photons subtracted from an
/// SMSS, against the ideal cat.
double smss_fidelity(double r, int n, double alpha, Parity parity);

/// Best-fit fidelity of the scheme's conditional state at squeezing s_db.
CatFit scheme_best_fit(Scheme scheme, int n, double s_db, double alpha_max = 4.5,
                       int cutoff = 0);

/// Maximize the best-fit fidelity over the squeezing grid (nested amplitude fit).
OptimalSqueezing optimal_squeezing(int n, Scheme scheme, const SqueezingGrid& grid);

/// Scheme fidelity at a fixed target amplitude, maximized over squeezing
/// (closed-form route; the "optimal squeezing for this amplitude" comparison).
double best_fidelity_at_amplitude(Scheme scheme, int n, double alpha,
                                  const SqueezingGrid& grid);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; reduces to
/// fidelity_pure when either argument is pure.
double fidelity_mixed(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace rspcat

#endif
