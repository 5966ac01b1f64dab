#pragma once

// Closed-form expressions for the parametric two-mode model
//   H = i lambda (a^dagger b^dagger - a b),
// with the field mode a starting in squeezed vacuum |r> and the atomic
// lower-level mode b empty. Every function evaluates the published
// expression as printed; where an independent oracle disagrees (the
// atomic <b^2> sign, the <ab> cross moment and the Duan sum built from
// it) the disagreement is surfaced by the validation report, never
// patched here.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sqcl/errors.hpp"
#include "sqcl/model.hpp"

namespace sqcl::closed {

inline constexpr double kPi = std::numbers::pi;

/// Default ceiling on photon numbers accepted by pnd_closed_form.
inline constexpr std::size_t kDefaultPndMax = 2000;

/// Photon-number terms whose log lies below this are dropped.
inline const double kPndLogFloor = std::log(1e-300);

/// Coherent-state propagator <alpha, beta| U(t) |gamma, eta>.
inline cplx propagator(PhasePoint alpha, PhasePoint beta, PhasePoint gamma, PhasePoint eta,
                       const ModelParams& p) {
    const double tau = p.tau();
    const double ch = std::cosh(tau);
    const double th = std::tanh(tau);
    const cplx a = alpha.value(), b = beta.value(), g = gamma.value(), e = eta.value();
    const cplx exponent = -0.5 * (alpha.norm2() + beta.norm2() + gamma.norm2() + eta.norm2()) +
                          (std::conj(a) * std::conj(b) - g * e) * th +
                          (std::conj(a) * g + std::conj(b) * e) / ch;
    return std::exp(exponent) / ch;
}

/// Joint Husimi density Q(alpha, beta, t).
inline double q_joint(PhasePoint alpha, PhasePoint beta, const ModelParams& p) {
    const double tau = p.tau();
    const double ch2 = std::cosh(tau) * std::cosh(tau);
    const double th = std::tanh(tau);
    const cplx a = alpha.value(), b = beta.value();
    const double cross = 2.0 * (a * b).real();        // a* b* + a b
    const double sq = 2.0 * (a * a).real();           // a*^2 + a^2
    const double exponent = -alpha.norm2() - beta.norm2() + cross * th -
                            std::tanh(p.r) / (2.0 * ch2) * sq;
    return std::exp(exponent) / (kPi * kPi * std::cosh(p.r) * ch2);
}

/// Marginal Husimi density of the cavity field.
inline double q_cavity(PhasePoint alpha, const ModelParams& p) {
    const double ch2 = std::cosh(p.tau()) * std::cosh(p.tau());
    const cplx a = alpha.value();
    const double exponent =
        -(alpha.norm2() + 0.5 * std::tanh(p.r) * 2.0 * (a * a).real()) / ch2;
    return std::exp(exponent) / (kPi * std::cosh(p.r) * ch2);
}

/// Husimi density of the squeezed field with the atoms decoupled.
inline double q_cavity_uncoupled(PhasePoint alpha, double r) {
    const cplx a = alpha.value();
    const double exponent = -alpha.norm2() - 0.5 * std::tanh(r) * 2.0 * (a * a).real();
    return std::exp(exponent) / (kPi * std::cosh(r));
}

/// Chaotic-state density with mean occupation sinh^2(lambda t): the r = 0
/// form shared by the cavity and atomic marginals.
inline double q_chaotic(PhasePoint z, const ModelParams& p) {
    const double sh = std::sinh(p.tau());
    const double occ = 1.0 + sh * sh;
    return std::exp(-z.norm2() / occ) / (kPi * occ);
}

/// Marginal Husimi density of the atomic lower-level mode.
inline double q_atomic(PhasePoint beta, const ModelParams& p) {
    const double tau = p.tau();
    const double ch2 = std::cosh(tau) * std::cosh(tau);
    const double sh2 = std::sinh(tau) * std::sinh(tau);
    const double th = std::tanh(p.r);
    const double denom = ch2 * ch2 - th * th;
    const cplx b = beta.value();
    const double exponent =
        -(beta.norm2() * (ch2 - th * th) + 0.5 * th * sh2 * 2.0 * (b * b).real()) / denom;
    return std::exp(exponent) / (kPi * std::cosh(p.r)) / std::sqrt(denom);
}

/// <a a^dagger>.
inline double cavity_anti_normal_number(const ModelParams& p) {
    const double ch = std::cosh(p.tau()) * std::cosh(p.r);
    return ch * ch;
}

/// Field-mode moments; atomic entries are left at zero.
inline MomentSet cavity_moments(const ModelParams& p) {
    const double ch2 = std::cosh(p.tau()) * std::cosh(p.tau());
    MomentSet m;
    m.n_a = cavity_anti_normal_number(p) - 1.0;
    m.sq_a = -std::sinh(p.r) * std::cosh(p.r) * ch2;
    m.mean_a = 0.0;
    return m;
}

inline QuadVariances quadrature_variances(const ModelParams& p) {
    const double ch2 = std::cosh(p.tau()) * std::cosh(p.tau());
    const double chr = std::cosh(p.r), shr = std::sinh(p.r);
    return {2.0 * ch2 * chr * (chr - shr) - 1.0, 2.0 * ch2 * chr * (chr + shr) - 1.0};
}

/// Atomic-mode moments (as printed, including the sign of <b^2>); field
/// entries are left at zero.
inline MomentSet atomic_moments(const ModelParams& p) {
    const double sh2 = std::sinh(p.tau()) * std::sinh(p.tau());
    const double chr2 = std::cosh(p.r) * std::cosh(p.r);
    MomentSet m;
    m.n_b = chr2 * sh2;
    m.sq_b = std::tanh(p.r) * chr2 * sh2;
    m.mean_b = 0.0;
    return m;
}

/// n_a - n_b: the photons contributed by the squeezed vacuum alone.
inline double squeezed_photon_number(const ModelParams& p) {
    const double sh = std::sinh(p.r);
    return sh * sh;
}

/// <a b> as printed.
inline double cross_correlation(const ModelParams& p) {
    const double tau = p.tau();
    const double ch = std::cosh(tau);
    const double th = std::tanh(p.r);
    return std::sinh(tau) * ch / (std::cosh(p.r) * std::pow(ch * ch - th * th, 1.5));
}

inline DuanResult duan_sum(const ModelParams& p) {
    const double tau = p.tau();
    const double ch = std::cosh(tau), sh = std::sinh(tau);
    const double chr = std::cosh(p.r);
    const double sum = 2.0 * chr * chr * (ch * ch + sh * sh) - 4.0 * cross_correlation(p);
    return make_duan(sum);
}

/// All closed-form moments in one set (mixed_ab is not part of the
/// published model and stays zero).
inline MomentSet closed_form_moments(const ModelParams& p) {
    MomentSet m = cavity_moments(p);
    const MomentSet at = atomic_moments(p);
    m.n_b = at.n_b;
    m.sq_b = at.sq_b;
    m.mean_b = at.mean_b;
    m.cross_ab = cross_correlation(p);
    return m;
}

struct PndTerm {
    std::size_t n = 0;
    double value = 0.0;
};

/// Thermal (chaotic) photon distribution sinh^{2n}/cosh^{2n+2} of the r = 0 case.
inline double pnd_chaotic(std::size_t n, const ModelParams& p) {
    const double tau = p.tau();
    if (tau == 0.0) return n == 0 ? 1.0 : 0.0;
    const double sh2 = std::sinh(tau) * std::sinh(tau);
    const double ch2 = std::cosh(tau) * std::cosh(tau);
    const double nd = static_cast<double>(n);
    return std::exp(nd * std::log(sh2) - (nd + 1.0) * std::log(ch2));
}

/// Cavity photon-number distribution P(n, t), summed in the log domain.
/// Only j with n - j even contribute; 0^0 = 1.
inline double pnd_closed_form(std::size_t n, const ModelParams& p,
                              std::size_t n_max = kDefaultPndMax) {
    if (n > n_max)
        throw ParameterError("n = " + std::to_string(n) + " exceeds n_max = " +
                             std::to_string(n_max));
    if (p.r == 0.0) return pnd_chaotic(n, p);

    const double tau = p.tau();
    const double ch2 = std::cosh(tau) * std::cosh(tau);
    const double log_th2 = tau == 0.0 ? -std::numeric_limits<double>::infinity()
                                      : 2.0 * std::log(std::tanh(tau));
    const double log_sq = std::log(std::tanh(p.r) / (2.0 * ch2));
    const double nd = static_cast<double>(n);
    const double log_prefactor = std::lgamma(nd + 1.0) - std::log(ch2 * std::cosh(p.r));

    double sum = 0.0;
    for (std::size_t j = n % 2; j <= n; j += 2) {
        if (j > 0 && tau == 0.0) break;
        const double jd = static_cast<double>(j);
        const double half = static_cast<double>((n - j) / 2);
        double log_term = log_prefactor - std::lgamma(jd + 1.0) - 2.0 * std::lgamma(half + 1.0);
        if (j > 0) log_term += jd * log_th2;
        if (n > j) log_term += (nd - jd) * log_sq;
        if (log_term < kPndLogFloor) continue;
        sum += std::exp(log_term);
    }
    return sum;
}

inline std::vector<PndTerm> pnd_closed_form_range(std::size_t n_max, const ModelParams& p) {
    std::vector<PndTerm> out;
    out.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) out.push_back({n, pnd_closed_form(n, p, n_max)});
    return out;
}

}  // namespace sqcl::closed
