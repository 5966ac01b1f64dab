#pragma once

// Shared domain types for the squeezed-cavity / atomic-ensemble model.
//
// Two quadrature conventions coexist in this library:
//   * "plus/minus" quadratures a+ = a + a^dagger, a- = i(a^dagger - a),
//     vacuum variance 1 (QuadVariances);
//   * canonical quadratures X = (a + a^dagger)/sqrt2, P = i(a^dagger - a)/sqrt2,
//     vacuum variance 1/2 (covariance matrices, Duan variables).
// Var(a+) = 2 Var(X) and Var(a-) = 2 Var(P).

#include <cmath>
#include <complex>
#include <string>

#include "sqcl/errors.hpp"
#include "sqcl/linalg.hpp"

namespace sqcl {

using cplx = std::complex<double>;

/// Factor taking a canonical-quadrature variance to the plus/minus convention.
inline constexpr double kPlusMinusPerCanonical = 2.0;

/// Physical knobs of the model: effective coupling, squeeze parameter and
/// interaction time. Only lambda*t enters the dynamics; both are kept so
/// that sweeps can be expressed against t at fixed lambda.
struct ModelParams {
    double lambda = 0.0;
    double r = 0.0;
    double t = 0.0;

    constexpr double tau() const noexcept { return lambda * t; }

    /// Same physics with the coupling folded into the time axis.
    constexpr ModelParams rescaled() const noexcept { return {tau(), r, 1.0}; }

    friend constexpr bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws ParameterError naming the offending field.
inline ModelParams validate_params(double lambda, double r, double t) {
    auto check = [](const char* name, double v) {
        if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
        if (v < 0.0) throw ParameterError(std::string(name) + " must be ≥ 0");
    };
    check("lambda", lambda);
    check("r", r);
    check("t", t);
    return {lambda, r, t};
}

/// Convenience: build params directly from lambda*t with lambda = 1.
inline ModelParams params_from_tau(double tau, double r) { return validate_params(1.0, r, tau); }

/// A complex phase-space amplitude (alpha, beta, ...).
struct PhasePoint {
    double re = 0.0;
    double im = 0.0;

    constexpr PhasePoint() = default;
    constexpr PhasePoint(double re_, double im_) : re(re_), im(im_) {}
    explicit PhasePoint(cplx z) : re(z.real()), im(z.imag()) {}

    cplx value() const { return {re, im}; }
    double norm2() const { return re * re + im * im; }
    bool finite() const { return std::isfinite(re) && std::isfinite(im); }
};

/// First and second moments of the field mode a and the atomic mode b.
/// All second moments are raw (not mean-subtracted).
struct MomentSet {
    cplx mean_a{};
    cplx mean_b{};
    double n_a = 0.0;   // <a^dagger a>
    double n_b = 0.0;   // <b^dagger b>
    cplx sq_a{};        // <a^2>
    cplx sq_b{};        // <b^2>
    cplx cross_ab{};    // <a b>
    cplx mixed_ab{};    // <a^dagger b>

    bool finite() const {
        auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
        return ok(mean_a) && ok(mean_b) && std::isfinite(n_a) && std::isfinite(n_b) &&
               ok(sq_a) && ok(sq_b) && ok(cross_ab) && ok(mixed_ab);
    }
};

/// Variances of a+ and a- (vacuum = 1).
struct QuadVariances {
    double plus = 1.0;
    double minus = 1.0;
};

/// Var(X_a - X_b) + Var(P_a + P_b); below 2 certifies entanglement.
struct DuanResult {
    double sum = 2.0;
    bool entangled = false;
};

inline constexpr double kDuanSeparableBound = 2.0;

inline DuanResult make_duan(double sum) { return {sum, sum < kDuanSeparableBound}; }

/// Symplectic form for the (X_a, P_a, X_b, P_b) ordering.
inline constexpr Mat4 kOmega{{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}}};

/// Quadrature covariance matrix (X_a, P_a, X_b, P_b), symmetrized.
inline Mat4 covariance_from_moments(const MomentSet& m) {
    if (!m.finite()) throw ParameterError("moments must be finite");
    const double s2 = std::sqrt(2.0);
    const Vec4 mean{s2 * m.mean_a.real(), s2 * m.mean_a.imag(), s2 * m.mean_b.real(),
                    s2 * m.mean_b.imag()};
    Mat4 raw{};
    raw[0][0] = m.n_a + 0.5 + m.sq_a.real();
    raw[1][1] = m.n_a + 0.5 - m.sq_a.real();
    raw[0][1] = m.sq_a.imag();
    raw[2][2] = m.n_b + 0.5 + m.sq_b.real();
    raw[3][3] = m.n_b + 0.5 - m.sq_b.real();
    raw[2][3] = m.sq_b.imag();
    raw[0][2] = m.cross_ab.real() + m.mixed_ab.real();
    raw[1][3] = -m.cross_ab.real() + m.mixed_ab.real();
    raw[0][3] = m.cross_ab.imag() + m.mixed_ab.imag();
    raw[1][2] = m.cross_ab.imag() - m.mixed_ab.imag();
    Mat4 cov{};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            cov[i][j] = raw[i][j] - mean[i] * mean[j];
            cov[j][i] = cov[i][j];
        }
    return cov;
}

/// Smallest eigenvalue of the Hermitian matrix cov + (i/2) Omega; the state is
/// physical iff this is >= 0. Computed from the real 8x8 embedding
/// [[Re, -Im], [Im, Re]], whose spectrum is the Hermitian one doubled.
inline double uncertainty_min_eigenvalue(const Mat4& cov) {
    Mat<8> emb{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double re = 0.5 * (cov[i][j] + cov[j][i]);
            const double im = 0.5 * kOmega[i][j];
            emb[i][j] = re;
            emb[i + 4][j + 4] = re;
            emb[i][j + 4] = -im;
            emb[i + 4][j] = im;
        }
    return symmetric_eigenvalues(emb)[0];
}

inline bool satisfies_uncertainty(const Mat4& cov, double tol = 1e-10) {
    return uncertainty_min_eigenvalue(cov) >= -tol;
}

/// Var(a+), Var(a-) from the anti-normally ordered expansion
/// 2<a a^dagger> +- (<a^dagger2> + <a^2>) -+ (<a^dagger>^2 + <a>^2) - 2|<a>|^2 - 1.
inline QuadVariances quadrature_variances_from_moments(const MomentSet& m) {
    const double anti_normal = m.n_a + 1.0;
    const double sq = 2.0 * m.sq_a.real();
    const double mean_sq = 2.0 * (m.mean_a * m.mean_a).real();
    const double mean_abs = 2.0 * std::norm(m.mean_a);
    return {2.0 * anti_normal + sq - mean_sq - mean_abs - 1.0,
            2.0 * anti_normal - sq + mean_sq - mean_abs - 1.0};
}

/// Duan sum from the moment expansion
/// 2<a^dagger a> + 2<b^dagger b> + 2<a><b> + 2<a^dagger><b^dagger>
///   - 2<ab> - 2<a^dagger b^dagger> - 2|<a>|^2 - 2|<b>|^2 + 2.
inline DuanResult duan_from_moments(const MomentSet& m) {
    const double sum = 2.0 * m.n_a + 2.0 * m.n_b + 4.0 * (m.mean_a * m.mean_b).real() -
                       4.0 * m.cross_ab.real() - 2.0 * std::norm(m.mean_a) -
                       2.0 * std::norm(m.mean_b) + 2.0;
    return make_duan(sum);
}

}  // namespace sqcl
