#include "rspcat/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rspcat/special.hpp"

namespace rspcat {

namespace {

constexpr int kCdfGridPoints = 10000;
constexpr double kGridHalfWidth = 8.0;

/// Fock-basis vector of <x^theta|m> values.
ComplexVector overlap_vector(int cutoff, double theta, double x) {
    const RealVector psi = hermite_functions(cutoff, x);
    ComplexVector v(cutoff + 1);
    for (int m = 0; m <= cutoff; ++m) v[m] = std::polar(psi[m], -m * theta);
    return v;
}

/// Uniform in [0, 1) straight from the engine stream, so output is identical
/// across standard libraries.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double marginal_pdf(const DensityMatrix& rho, double theta, double x) {
    const ComplexVector v = overlap_vector(rho.cutoff(), theta, x);
    const Complex val = v.transpose() * rho.elems * v.conjugate();
    return val.real();
}

std::vector<QuadratureSample> sample(const DensityMatrix& rho,
                                     const std::vector<double>& theta_schedule,
                                     int count_per_angle, std::uint64_t seed) {
    if (count_per_angle < 1) throw Error("sample: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<QuadratureSample> out;
    out.reserve(theta_schedule.size() * count_per_angle);
    RealVector grid = RealVector::LinSpaced(kCdfGridPoints, -kGridHalfWidth, kGridHalfWidth);
    for (double theta_raw : theta_schedule) {
        double theta = std::fmod(theta_raw, M_PI);
        if (theta < 0) theta += M_PI;
        RealVector pdf(kCdfGridPoints);
        for (int i = 0; i < kCdfGridPoints; ++i) pdf[i] = std::max(marginal_pdf(rho, theta, grid[i]), 0.0);
        RealVector cdf(kCdfGridPoints);
        cdf[0] = 0.0;
        for (int i = 1; i < kCdfGridPoints; ++i) {
            cdf[i] = cdf[i - 1] + 0.5 * (pdf[i] + pdf[i - 1]) * (grid[i] - grid[i - 1]);
        }
        cdf /= cdf[kCdfGridPoints - 1];
        for (int k = 0; k < count_per_angle; ++k) {
            const double u = next_uniform(rng);
            // Inverse CDF by bisection plus linear interpolation.
            const auto it = std::upper_bound(cdf.data(), cdf.data() + kCdfGridPoints, u);
            Eigen::Index hi = std::min<Eigen::Index>(it - cdf.data(), kCdfGridPoints - 1);
            if (hi < 1) hi = 1;
            const double span = cdf[hi] - cdf[hi - 1];
            const double frac = span > 0 ? (u - cdf[hi - 1]) / span : 0.5;
            out.push_back({theta, grid[hi - 1] + frac * (grid[hi] - grid[hi - 1])});
        }
    }
    return out;
}

MaxlikResult maxlik_reconstruct(const std::vector<QuadratureSample>& samples, int cutoff,
                                const MaxlikOptions& options) {
    if (samples.empty()) throw Error("maxlik_reconstruct: no samples");
    const int dim = cutoff + 1;

    // Histogram per distinct angle on [min, max], then one projector per
    // occupied bin (bin-center quadrature eigenstate).
    std::vector<double> angles;
    for (const auto& s : samples) {
        bool known = false;
        for (double a : angles) known = known || std::abs(a - s.theta) < 1e-12;
        if (!known) angles.push_back(s.theta);
    }
    std::sort(angles.begin(), angles.end());

    std::vector<ComplexVector> proj;
    std::vector<double> freq;
    std::size_t total = 0;
    for (double a : angles) {
        double lo = 1e300, hi = -1e300;
        for (const auto& s : samples) {
            if (std::abs(s.theta - a) < 1e-12) {
                lo = std::min(lo, s.x);
                hi = std::max(hi, s.x);
            }
        }
        hi += 1e-9;
        const int bins = options.bins_per_angle;
        std::vector<std::size_t> counts(bins, 0);
        for (const auto& s : samples) {
            if (std::abs(s.theta - a) < 1e-12) {
                int b = static_cast<int>((s.x - lo) / (hi - lo) * bins);
                b = std::clamp(b, 0, bins - 1);
                ++counts[b];
            }
        }
        for (int b = 0; b < bins; ++b) {
            if (counts[b] == 0) continue;
            const double center = lo + (b + 0.5) * (hi - lo) / bins;
            proj.push_back(overlap_vector(cutoff, a, center).conjugate());
            freq.push_back(static_cast<double>(counts[b]));
            total += counts[b];
        }
    }
    for (double& f : freq) f /= static_cast<double>(total);

    MaxlikResult result;
    ComplexMatrix rho = ComplexMatrix::Identity(dim, dim) / dim;
    const ComplexMatrix identity = ComplexMatrix::Identity(dim, dim);
    double prev_ll = -1e300;
    for (int it = 0; it < options.max_iters; ++it) {
        ComplexMatrix R = ComplexMatrix::Zero(dim, dim);
        double ll = 0.0;
        for (std::size_t k = 0; k < proj.size(); ++k) {
            const ComplexVector ru = rho * proj[k];
            double pr = proj[k].dot(ru).real();  // <u|rho|u>
            pr = std::max(pr, 1e-300);
            ll += freq[k] * std::log(pr);
            R.noalias() += (freq[k] / pr) * (proj[k] * proj[k].adjoint());
        }
        result.ll_history.push_back(ll);
        result.iterations = it + 1;
        result.log_likelihood = ll;
        if (it > 0 && std::abs(ll - prev_ll) < options.tol * std::abs(prev_ll)) {
            result.converged = true;
            break;
        }
        prev_ll = ll;
        rho = R * rho * R;
        rho = ((rho + rho.adjoint()) / 2.0).eval();
        rho /= rho.trace().real();
        if (options.damping > 0) {
            rho = (1.0 - options.damping) * rho + options.damping * identity / dim;
        }
    }
    result.rho.elems = std::move(rho);
    result.rho.weight = 1.0;
    return result;
}

}  // namespace rspcat
