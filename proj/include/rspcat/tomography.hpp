#ifndef RSPCAT_TOMOGRAPHY_HPP
#define RSPCAT_TOMOGRAPHY_HPP

#include <cstdint>
#include <vector>

#include "rspcat/fock.hpp"
#include "rspcat/types.hpp"

namespace rspcat {

struct QuadratureSample {
    double theta = 0.0;  // canonical range [0, pi)
    double x = 0.0;
};

/// pr(x | theta) = <x^theta| rho |x^theta>.
double marginal_pdf(const DensityMatrix& rho, double theta, double x);

/// Homodyne record simulation: for each angle, draw count_per_angle samples
/// by inverse-CDF lookup on a 10^4-point grid over [-8, 8]. Deterministic for
/// a fixed seed (uniforms derived directly from mt19937_64 output).
std::vector<QuadratureSample> sample(const DensityMatrix& rho,
                                     const std::vector<double>& theta_schedule,
                                     int count_per_angle, std::uint64_t seed);

struct MaxlikOptions {
    int max_iters = 2000;
    double tol = 1e-10;       // relative log-likelihood gain
    int bins_per_angle = 200;
    double damping = 1e-6;    // identity mix per iterate
};

struct MaxlikResult {
    DensityMatrix rho;
    bool converged = false;
    int iterations = 0;
    double log_likelihood = 0.0;
    std::vector<double> ll_history;
};

/// Iterative maximum-likelihood reconstruction, rho <- N[R rho R] with
/// R = sum_k f_k Pi_k / pr_k over per-angle histogram bins. The likelihood is
/// nondecreasing across iterates; a non-converged run still returns the last
/// iterate with diagnostics.
MaxlikResult maxlik_reconstruct(const std::vector<QuadratureSample>& samples, int cutoff,
                                const MaxlikOptions& options = {});

}  // namespace rspcat

#endif
