#pragma once

// Exact Gaussian oracle. The quadratic Hamiltonian acts on the quadratures
// (X_a, P_a, X_b, P_b) as a linear symplectic map, so the state stays
// Gaussian and is fully described by its mean and covariance.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sqcl/errors.hpp"
#include "sqcl/linalg.hpp"
#include "sqcl/model.hpp"

namespace sqcl::gaussian {

struct GaussianState {
    Vec4 mean{};
    Mat4 cov = scaled(identity<4>(), 0.5);

    static GaussianState vacuum() { return {}; }
};

struct SymplecticMap {
    Mat4 s = identity<4>();
};

enum class Mode { a, b };

/// Symplectic deviation max|s^T Omega s - Omega|.
inline double symplectic_defect(const SymplecticMap& m) {
    return max_abs_diff(transpose(m.s) * kOmega * m.s, kOmega);
}

/// Throws ParameterError if the covariance is asymmetric or unphysical.
inline void check_state(const GaussianState& g, double tol = 1e-10) {
    if (asymmetry(g.cov) > 1e-12) throw ParameterError("covariance is not symmetric");
    const double ev = uncertainty_min_eigenvalue(g.cov);
    if (ev < -tol)
        throw ParameterError("covariance violates the uncertainty relation (min eigenvalue " +
                             std::to_string(ev) + ")");
}

/// Squeezed vacuum in mode a (<a^2> = -sinh r cosh r), vacuum in mode b.
inline GaussianState initial_gaussian(double r) {
    if (!std::isfinite(r) || r < 0.0) throw ParameterError("r must be finite and ≥ 0");
    GaussianState g;
    g.cov[0][0] = 0.5 * std::exp(-2.0 * r);
    g.cov[1][1] = 0.5 * std::exp(2.0 * r);
    return g;
}

/// Heisenberg solution a -> a cosh + b^dagger sinh, b -> b cosh + a^dagger sinh
/// written on the quadratures.
inline SymplecticMap symplectic_of(const ModelParams& p) {
    const double c = std::cosh(p.tau());
    const double s = std::sinh(p.tau());
    SymplecticMap m;
    m.s = Mat4{{{c, 0, s, 0}, {0, c, 0, -s}, {s, 0, c, 0}, {0, -s, 0, c}}};
    return m;
}

inline GaussianState apply(const SymplecticMap& m, const GaussianState& g) {
    GaussianState out;
    out.mean = m.s * g.mean;
    out.cov = m.s * g.cov * transpose(m.s);
    // Re-symmetrize to keep round-off from accumulating under composition.
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double v = 0.5 * (out.cov[i][j] + out.cov[j][i]);
            out.cov[i][j] = out.cov[j][i] = v;
        }
    return out;
}

inline GaussianState evolve_gaussian(const GaussianState& g, const ModelParams& p) {
    return apply(symplectic_of(p), g);
}

/// Ladder-operator moments from mean and covariance.
inline MomentSet moments_from_gaussian(const GaussianState& g) {
    const double s2 = std::sqrt(2.0);
    const auto& c = g.cov;
    const auto& m = g.mean;
    // Raw symmetrized second moments.
    auto raw = [&](int i, int j) { return c[i][j] + m[i] * m[j]; };
    MomentSet out;
    out.mean_a = cplx(m[0], m[1]) / s2;
    out.mean_b = cplx(m[2], m[3]) / s2;
    out.n_a = 0.5 * (raw(0, 0) + raw(1, 1) - 1.0);
    out.n_b = 0.5 * (raw(2, 2) + raw(3, 3) - 1.0);
    out.sq_a = 0.5 * cplx(raw(0, 0) - raw(1, 1), 2.0 * raw(0, 1));
    out.sq_b = 0.5 * cplx(raw(2, 2) - raw(3, 3), 2.0 * raw(2, 3));
    out.cross_ab = 0.5 * cplx(raw(0, 2) - raw(1, 3), raw(0, 3) + raw(1, 2));
    out.mixed_ab = 0.5 * cplx(raw(0, 2) + raw(1, 3), raw(0, 3) - raw(1, 2));
    return out;
}

inline GaussianState gaussian_from_moments(const MomentSet& m) {
    const double s2 = std::sqrt(2.0);
    GaussianState g;
    g.mean = {s2 * m.mean_a.real(), s2 * m.mean_a.imag(), s2 * m.mean_b.real(),
              s2 * m.mean_b.imag()};
    g.cov = covariance_from_moments(m);
    return g;
}

/// Var(X_a - X_b) + Var(P_a + P_b) read straight off the covariance.
inline DuanResult duan_from_gaussian(const GaussianState& g) {
    const auto& c = g.cov;
    const double var_u = c[0][0] + c[2][2] - 2.0 * c[0][2];
    const double var_v = c[1][1] + c[3][3] + 2.0 * c[1][3];
    return make_duan(var_u + var_v);
}

/// Symplectic eigenvalues (nu_-, nu_+) of a two-mode covariance, from the
/// invariants Delta = det A + det B + 2 det C and det cov.
inline std::array<double, 2> symplectic_eigenvalues(const Mat4& cov) {
    const double det_a = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    const double det_b = cov[2][2] * cov[3][3] - cov[2][3] * cov[3][2];
    const double det_c = cov[0][2] * cov[1][3] - cov[0][3] * cov[1][2];
    const double delta = det_a + det_b + 2.0 * det_c;
    const double det = determinant(cov);
    const double disc = std::sqrt(std::max(0.0, delta * delta - 4.0 * det));
    return {std::sqrt(std::max(0.0, 0.5 * (delta - disc))), std::sqrt(0.5 * (delta + disc))};
}

/// Husimi density of a two-mode Gaussian state at (alpha, beta):
/// exp(-d^T (cov + I/2)^{-1} d / 2) / (pi^2 sqrt det(cov + I/2)).
inline double q_from_gaussian(const GaussianState& g, PhasePoint alpha, PhasePoint beta) {
    const double s2 = std::sqrt(2.0);
    const Mat4 sigma = g.cov + scaled(identity<4>(), 0.5);
    const auto lu = lu_invert(sigma);
    if (!lu.inverse || !(symmetric_eigenvalues(sigma)[0] > 0.0))
        throw OracleError("cov + I/2 is singular or indefinite; state is unphysical");
    const Vec4 d{s2 * alpha.re - g.mean[0], s2 * alpha.im - g.mean[1], s2 * beta.re - g.mean[2],
                 s2 * beta.im - g.mean[3]};
    const Vec4 w = *lu.inverse * d;
    double quad = 0.0;
    for (int i = 0; i < 4; ++i) quad += d[i] * w[i];
    const double pi = std::numbers::pi;
    return std::exp(-0.5 * quad) / (pi * pi * std::sqrt(lu.det));
}

/// Single-mode Husimi marginal of mode a or b.
inline double q_marginal_from_gaussian(const GaussianState& g, Mode mode, PhasePoint z) {
    const int o = mode == Mode::a ? 0 : 2;
    const double s2 = std::sqrt(2.0);
    Mat2 sigma{{{g.cov[o][o] + 0.5, g.cov[o][o + 1]}, {g.cov[o + 1][o], g.cov[o + 1][o + 1] + 0.5}}};
    const auto lu = lu_invert(sigma);
    if (!lu.inverse || !(symmetric_eigenvalues(sigma)[0] > 0.0))
        throw OracleError("reduced cov + I/2 is singular or indefinite; state is unphysical");
    const Vec<2> d{s2 * z.re - g.mean[o], s2 * z.im - g.mean[o + 1]};
    const Vec<2> w = *lu.inverse * d;
    const double quad = d[0] * w[0] + d[1] * w[1];
    return std::exp(-0.5 * quad) / (std::numbers::pi * std::sqrt(lu.det));
}

/// Convenience: the evolved model state at params p.
inline GaussianState model_state(const ModelParams& p) {
    return evolve_gaussian(initial_gaussian(p.r), p);
}

}  // namespace sqcl::gaussian
