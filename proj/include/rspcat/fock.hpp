#ifndef RSPCAT_FOCK_HPP
#define RSPCAT_FOCK_HPP

#include "rspcat/types.hpp"

namespace rspcat {

inline constexpr double kDefaultTailTol = 1e-12;

/// Pure single-mode state over the photon-number basis, amplitudes c_0..c_{N_c}.
struct FockVector {
    ComplexVector amps;
    bool normalized = true;

    int cutoff() const { return static_cast<int>(amps.size()) - 1; }
    double norm_sq() const { return amps.squaredNorm(); }
};

/// Hermitian PSD matrix over the Fock basis; `weight` carries the trace the
/// state had before normalization (herald mass for conditional states).
struct DensityMatrix {
    ComplexMatrix elems;
    double weight = 1.0;

    int cutoff() const { return static_cast<int>(elems.rows()) - 1; }
    double trace() const { return elems.trace().real(); }
};

/// Two-mode squeezed state in Schmidt form: sum_m lambda_m |m,m>,
/// lambda_m = tanh^m r / cosh r.
struct SchmidtTMSS {
    RealVector lambdas;
    double r = 0.0;

    int cutoff() const { return static_cast<int>(lambdas.size()) - 1; }
};

/// Result of removing `removed` photons from mode A (or B) of a TMSS.
/// coeffs[m] multiplies |m-removed, m> for mode A (mirrored for B) in the
/// tanh^m r expansion of the source state, i.e. without the overall 1/cosh r;
/// `weight` is the squared norm of coeffs, the N_n normalizer of that
/// expansion (N_1 = sinh^2 r cosh^2 r).
struct SubtractedTmss {
    RealVector coeffs;
    int removed = 0;
    Mode mode = Mode::A;
    double r = 0.0;
    double weight = 0.0;

    int cutoff() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct SubtractedFock {
    FockVector state;  // unnormalized
    double weight = 0.0;
};

/// Dense two-mode density matrix on composite index m1*(N_c+1)+m2.
/// Test-oracle plumbing only; O(N_c^4) storage.
struct TwoModeDensityMatrix {
    ComplexMatrix elems;
    int cutoff = 0;

    int dim() const { return cutoff + 1; }
    Eigen::Index idx(int m1, int m2) const { return static_cast<Eigen::Index>(m1) * dim() + m2; }
    Complex& at(int m1, int m2, int n1, int n2) { return elems(idx(m1, m2), idx(n1, n2)); }
    Complex at(int m1, int m2, int n1, int n2) const { return elems(idx(m1, m2), idx(n1, n2)); }
    double trace() const { return elems.trace().real(); }
};

/// Squeezing level s in dB -> squeezing parameter r, via s = -10 log10(2 V_s),
/// V_s = e^{-2r}/2.
double db_to_r(double s_db);
double r_to_db(double r);

SchmidtTMSS tmss_pure(double r, int cutoff, double tail_tol = kDefaultTailTol);
FockVector smss_pure(double r, int cutoff, double tail_tol = kDefaultTailTol);
FockVector coherent(Complex alpha, int cutoff, double tail_tol = kDefaultTailTol);
FockVector cat(Complex alpha, Parity parity, int cutoff, double tail_tol = kDefaultTailTol);

/// Quadrature-eigenstate overlap <x^theta|m> = e^{-im theta} psi_m(x) with
/// psi the normalized Hermite function.
Complex quad_overlap(int m, double x, double theta);

SubtractedFock subtract_photons(const FockVector& state, int n);
SubtractedTmss subtract_photons(const SchmidtTMSS& state, int n, Mode mode = Mode::A);
SubtractedTmss subtract_photons(const SubtractedTmss& state, int n);

/// <psi| rho |psi>, clamped to [0, 1]. Cutoffs may differ; the smaller object
/// is zero-padded.
double fidelity_pure(const FockVector& psi, const DensityMatrix& rho);

}  // namespace rspcat

#endif
