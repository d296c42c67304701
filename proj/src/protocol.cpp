#include "rspcat/protocol.hpp"

#include <cmath>

#include "rspcat/special.hpp"

namespace rspcat {

namespace {

double wrap_angle(double theta) {
    const double two_pi = 2.0 * M_PI;
    double t = std::fmod(theta, two_pi);
    if (t < 0) t += two_pi;
    return t;
}

/// Alice-index headroom for the internal sums of the mixed pipeline. The
/// m1-tail decays like tanh^{2 m1} r_s times subexponential factors, so a
/// fixed margin over the Bob cutoff is ample for every reachable parameter.
int alice_cutoff(int bob_cutoff) { return bob_cutoff + 80; }

/// Unnormalized x-resolved Bob matrix of the single-photon-subtracted mixed
/// state. pair_weight(a, b) supplies psi_a(x) psi_b(x) for the exact projector
/// or its window integral for the averaged state.
template <typename PairWeight>
ComplexMatrix conditional_kernel(const detail::MixedCoeffContext& ctx, double theta, int cutoff,
                                 int m1_max, PairWeight&& pair_weight) {
    const int dim = cutoff + 1;
    ComplexMatrix K = ComplexMatrix::Zero(dim, dim);
    for (int m2 = 0; m2 < dim; ++m2) {
        for (int n2 = 0; n2 < dim; ++n2) {
            Complex acc = 0.0;
            for (int m1 = 1; m1 <= m1_max; ++m1) {
                const int n1 = m1 + n2 - m2;
                if (n1 < 1 || n1 > m1_max) continue;
                const double c = ctx.coeff(m1, m2, n1, n2);
                if (c == 0.0) continue;
                const double w = pair_weight(m1 - 1, n1 - 1);
                if (w == 0.0) continue;
                acc += c * std::sqrt(static_cast<double>(m1) * n1) * w
                       * std::polar(1.0, (n1 - m1) * theta);
            }
            K(m2, n2) = acc;
        }
    }
    return K;
}

DensityMatrix normalize_kernel(ComplexMatrix K) {
    const double tr = K.trace().real();
    if (!(tr > 0.0)) throw Error("conditional state has vanishing herald mass");
    DensityMatrix rho;
    rho.elems = (K / tr + (K / tr).adjoint()) / 2.0;  // exact Hermitization
    rho.weight = tr;
    return rho;
}

}  // namespace

ProjectionSpec ProjectionSpec::exact(double theta, double outcome) {
    ProjectionSpec s;
    s.theta = wrap_angle(theta);
    s.outcome = outcome;
    s.window = 0.0;
    return s;
}

ProjectionSpec ProjectionSpec::windowed(double theta, double half_width, double outcome) {
    if (half_width < 0.0) throw Error("ProjectionSpec: window must be >= 0");
    ProjectionSpec s;
    s.theta = wrap_angle(theta);
    s.outcome = outcome;
    s.window = half_width;
    return s;
}

FockVector bob_pure_conditional(double r, int n, const ProjectionSpec& spec, int cutoff) {
    if (n < 1) throw Error("bob_pure_conditional: n must be >= 1");
    if (r <= 0.0) throw VacuumSubtraction("bob_pure_conditional: r = 0 never heralds");
    if (spec.window != 0.0) throw Error("bob_pure_conditional: exact projection only");
    if (cutoff < n) throw CutoffTooSmall("bob_pure_conditional: cutoff below photon number");
    // Conditional-state amplitudes evaluated at the projection outcome:
    // amp_m = sqrt(m!/(m-n)!) tanh^m r <x^theta|m-n>.
    const double t = std::tanh(r);
    const double log_t = std::log(t);
    const RealVector psi = hermite_functions(cutoff, spec.outcome);
    FockVector out;
    out.amps = ComplexVector::Zero(cutoff + 1);
    RealVector logmag = RealVector::Constant(cutoff + 1, -1e300);
    for (int m = n; m <= cutoff; ++m) {
        if (psi[m - n] == 0.0) continue;
        logmag[m] = 0.5 * (log_factorial(m) - log_factorial(m - n)) + m * log_t
                    + std::log(std::abs(psi[m - n]));
    }
    const double shift = logmag.maxCoeff();
    for (int m = n; m <= cutoff; ++m) {
        if (psi[m - n] == 0.0) continue;
        const double mag = std::exp(logmag[m] - shift) * (psi[m - n] > 0 ? 1.0 : -1.0);
        out.amps[m] = mag * std::polar(1.0, -(m - n) * spec.theta);
    }
    const double nrm = out.amps.norm();
    if (!(nrm > 0.0)) throw CutoffTooSmall("bob_pure_conditional: no support below cutoff");
    out.amps /= nrm;
    const double tail = std::max(std::norm(out.amps[cutoff]),
                                 cutoff >= 1 ? std::norm(out.amps[cutoff - 1]) : 0.0);
    if (tail > 1e-8) throw CutoffTooSmall("bob_pure_conditional: tail mass too large");
    return out;
}

DensityMatrix bob_mixed_conditional(const EffectiveParams& p, const ProjectionSpec& spec,
                                    int cutoff) {
    if (spec.window != 0.0) throw Error("bob_mixed_conditional: exact projection only");
    const int m1_max = alice_cutoff(cutoff);
    detail::MixedCoeffContext ctx(p, m1_max + 1);
    const RealVector psi = hermite_functions(m1_max, spec.outcome);
    auto K = conditional_kernel(ctx, spec.theta, cutoff, m1_max,
                                [&](int a, int b) { return psi[a] * psi[b]; });
    return normalize_kernel(std::move(K));
}

DensityMatrix bob_windowed(const EffectiveParams& p, const ProjectionSpec& spec, int cutoff) {
    if (!(spec.window > 0.0)) throw Error("bob_windowed: window must be > 0");
    const int m1_max = alice_cutoff(cutoff);
    detail::MixedCoeffContext ctx(p, m1_max + 1);

    auto averaged = [&](int nodes) {
        const GaussLegendreRule rule = gauss_legendre(nodes);
        // Cross moments I_ab = integral over the window of psi_a psi_b.
        RealMatrix moments = RealMatrix::Zero(m1_max + 1, m1_max + 1);
        for (int i = 0; i < nodes; ++i) {
            const double x = spec.outcome + spec.window * rule.nodes[i];
            const double w = spec.window * rule.weights[i];
            const RealVector psi = hermite_functions(m1_max, x);
            moments.noalias() += w * (psi * psi.transpose());
        }
        auto K = conditional_kernel(ctx, spec.theta, cutoff, m1_max,
                                    [&](int a, int b) { return moments(a, b); });
        return normalize_kernel(std::move(K));
    };

    DensityMatrix rho = averaged(32);
    for (int nodes = 64; nodes <= 512; nodes *= 2) {
        DensityMatrix next = averaged(nodes);
        const double delta = (next.elems - rho.elems).cwiseAbs().maxCoeff();
        rho = std::move(next);
        if (delta < 1e-8) break;
    }
    return rho;
}

HeraldDensity::HeraldDensity(const EffectiveParams& p, int alice_cutoff, int bob_cutoff) {
    detail::MixedCoeffContext ctx(p, std::max(alice_cutoff, bob_cutoff) + 1);
    // Trace over Bob collapses the x-dependence onto psi_{n1-1}(x)^2; the Bob
    // sums are x-independent and folded into per-n1 weights once.
    weights_ = RealVector::Zero(alice_cutoff);
    for (int n1 = 1; n1 <= alice_cutoff; ++n1) {
        double w = 0.0;
        for (int n2 = 0; n2 <= bob_cutoff; ++n2) {
            w += ctx.coeff(n1, n2, n1, n2);
        }
        weights_[n1 - 1] = n1 * w;
    }
    normalizer_ = integrate_adaptive([this](double x) { return unnormalized(x); }, -8.0, 8.0);
}

double HeraldDensity::unnormalized(double x) const {
    const RealVector psi = hermite_functions(static_cast<int>(weights_.size()) - 1, x);
    return weights_.dot(psi.cwiseAbs2());
}

double HeraldDensity::operator()(double x) const { return unnormalized(x) / normalizer_; }

double HeraldDensity::window_probability(double half_width) const {
    if (half_width <= 0.0) return 0.0;
    const double raw = integrate_adaptive([this](double x) { return unnormalized(x); },
                                          -half_width, half_width);
    return std::min(raw / normalizer_, 1.0);
}

double outcome_pdf(const EffectiveParams& p, double /*theta*/, double x) {
    return HeraldDensity(p)(x);
}

double success_probability(const EffectiveParams& p, const ProjectionSpec& spec) {
    if (!(spec.window > 0.0)) return 0.0;
    return HeraldDensity(p).window_probability(spec.window);
}

}  // namespace rspcat
