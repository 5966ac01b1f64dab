#pragma once

// Truncated two-mode number-basis oracle. The state vector is stored
// row-major over (n_a, n_b) and evolved under exp(lambda t (a^dagger b^dagger - a b))
// by a matrix-free Taylor series with automatic step subdivision.
//
// The generator conserves n_a - n_b, so every anti-diagonal of the box is an
// invariant chain; diagonals that start empty are skipped.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "sqcl/errors.hpp"
#include "sqcl/gaussian.hpp"
#include "sqcl/model.hpp"

namespace sqcl::fock {

inline constexpr double kDefaultLeakTol = 1e-10;
inline constexpr std::size_t kDefaultCap = 512;
inline constexpr std::size_t kMinModeMax = 8;
inline constexpr int kMaxTaylorTerms = 30;

inline std::size_t round_up8(double x) {
    const double v = std::max(x, 0.0);
    return static_cast<std::size_t>(8.0 * std::ceil(v / 8.0));
}

struct FockGrid {
    std::size_t na_max = 32;
    std::size_t nb_max = 32;
    double leak_tol = kDefaultLeakTol;

    void check() const {
        if (na_max < kMinModeMax || nb_max < kMinModeMax)
            throw ParameterError("Fock cutoffs must be ≥ 8 (got " + std::to_string(na_max) + ", " +
                                 std::to_string(nb_max) + ")");
        if (!(leak_tol > 0.0) || leak_tol > 1e-4)
            throw ParameterError("leak_tol must lie in (0, 1e-4]");
    }

    std::size_t size() const { return (na_max + 1) * (nb_max + 1); }

    friend bool operator==(const FockGrid&, const FockGrid&) = default;
};

class TwoModeFockState {
public:
    explicit TwoModeFockState(FockGrid grid) : grid_(grid), amp_(grid.size()) { grid_.check(); }

    const FockGrid& grid() const { return grid_; }
    std::size_t index(std::size_t n, std::size_t m) const { return n * (grid_.nb_max + 1) + m; }

    cplx& at(std::size_t n, std::size_t m) { return amp_[index(n, m)]; }
    const cplx& at(std::size_t n, std::size_t m) const { return amp_[index(n, m)]; }

    std::vector<cplx>& data() { return amp_; }
    const std::vector<cplx>& data() const { return amp_; }

    double norm2() const {
        double s = 0.0;
        for (const auto& z : amp_) s += std::norm(z);
        return s;
    }

    /// Mass in the outer two rows (n_a >= na_max - 1). Two layers because
    /// parity selection rules can leave the outermost row empty.
    double edge_mass_a() const {
        double s = 0.0;
        for (std::size_t n = grid_.na_max - 1; n <= grid_.na_max; ++n)
            for (std::size_t m = 0; m <= grid_.nb_max; ++m) s += std::norm(at(n, m));
        return s;
    }

    double edge_mass_b() const {
        double s = 0.0;
        for (std::size_t n = 0; n <= grid_.na_max; ++n)
            for (std::size_t m = grid_.nb_max - 1; m <= grid_.nb_max; ++m) s += std::norm(at(n, m));
        return s;
    }

    /// Union of both edges (corner cells counted once).
    double edge_mass() const {
        double s = edge_mass_a() + edge_mass_b();
        for (std::size_t n = grid_.na_max - 1; n <= grid_.na_max; ++n)
            for (std::size_t m = grid_.nb_max - 1; m <= grid_.nb_max; ++m) s -= std::norm(at(n, m));
        return s;
    }

private:
    FockGrid grid_;
    std::vector<cplx> amp_;
};

/// Squeezed-vacuum amplitudes c_0..c_{n_max}:
/// c_{2m} = (-tanh r / 2)^m sqrt((2m)!) / (m! sqrt(cosh r)), odd entries zero.
inline std::vector<cplx> squeezed_vacuum_fock(double r, std::size_t n_max,
                                              double leak_tol = kDefaultLeakTol) {
    if (!std::isfinite(r) || r < 0.0) throw ParameterError("r must be finite and ≥ 0");
    std::vector<cplx> c(n_max + 1);
    const double ratio = -0.5 * std::tanh(r);
    double v = 1.0 / std::sqrt(std::cosh(r));
    double kept = 0.0;
    for (std::size_t n = 0; n <= n_max; n += 2) {
        if (n > 0) {
            const double nd = static_cast<double>(n);
            v *= ratio * std::sqrt(nd * (nd - 1.0)) / (0.5 * nd);
        }
        c[n] = v;
        kept += v * v;
    }
    const double tail = 1.0 - kept;
    if (tail > leak_tol)
        throw TruncationError("squeezed vacuum with r = " + std::to_string(r) +
                                  " does not fit below n = " + std::to_string(n_max) +
                                  " (tail mass " + std::to_string(tail) + ")",
                              tail, round_up8(1.5 * static_cast<double>(n_max)), 0);
    return c;
}

/// |r>_a (x) |0>_b on the grid.
inline TwoModeFockState build_initial(double r, const FockGrid& grid) {
    grid.check();
    TwoModeFockState s(grid);
    std::vector<cplx> c;
    try {
        c = squeezed_vacuum_fock(r, grid.na_max, grid.leak_tol);
    } catch (const TruncationError& e) {
        throw TruncationError(e.what(), e.leakage(), e.suggested_na(), grid.nb_max);
    }
    for (std::size_t n = 0; n <= grid.na_max; ++n) s.at(n, 0) = c[n];
    return s;
}

/// Coherent product state |gamma, eta> truncated to the grid.
inline TwoModeFockState coherent_fock(PhasePoint gamma, PhasePoint eta, const FockGrid& grid) {
    grid.check();
    auto column = [](cplx z, std::size_t n_max) {
        std::vector<cplx> u(n_max + 1);
        u[0] = std::exp(-0.5 * std::norm(z));
        for (std::size_t n = 1; n <= n_max; ++n)
            u[n] = u[n - 1] * z / std::sqrt(static_cast<double>(n));
        return u;
    };
    const auto ua = column(gamma.value(), grid.na_max);
    const auto ub = column(eta.value(), grid.nb_max);
    TwoModeFockState s(grid);
    for (std::size_t n = 0; n <= grid.na_max; ++n)
        for (std::size_t m = 0; m <= grid.nb_max; ++m) s.at(n, m) = ua[n] * ub[m];
    return s;
}

struct EvolveStats {
    std::size_t substeps = 0;
    std::size_t taylor_terms = 0;
    double max_edge_mass = 0.0;
    double max_edge_a = 0.0;
    double max_edge_b = 0.0;
    double norm_drift = 0.0;
};

namespace detail {

inline double magnitude2(double x) { return x * x; }
inline double magnitude2(const cplx& z) { return std::norm(z); }

/// out = scale * (a^dagger b^dagger - a b) in, restricted to active diagonals.
template <typename T>
void apply_generator(const std::vector<T>& in, std::vector<T>& out, double scale,
                     const FockGrid& g, const std::vector<char>& active,
                     const std::vector<double>& sq) {
    const std::size_t stride = g.nb_max + 1;
    for (std::size_t n = 0; n <= g.na_max; ++n) {
        for (std::size_t m = 0; m <= g.nb_max; ++m) {
            const std::size_t i = n * stride + m;
            if (!active[n + g.nb_max - m]) {
                out[i] = T{};
                continue;
            }
            T v{};
            if (n > 0 && m > 0) v += (sq[n] * sq[m]) * in[i - stride - 1];
            if (n < g.na_max && m < g.nb_max) v -= (sq[n + 1] * sq[m + 1]) * in[i + stride + 1];
            out[i] = scale * v;
        }
    }
}

template <typename T>
double norm2(const std::vector<T>& v) {
    double s = 0.0;
    for (const auto& x : v) s += magnitude2(x);
    return s;
}

template <typename T>
void record_edges(const std::vector<T>& v, const FockGrid& g, EvolveStats& stats) {
    const std::size_t stride = g.nb_max + 1;
    double ea = 0.0, eb = 0.0, corner = 0.0;
    for (std::size_t n = g.na_max - 1; n <= g.na_max; ++n)
        for (std::size_t m = 0; m <= g.nb_max; ++m) {
            const double w = magnitude2(v[n * stride + m]);
            ea += w;
            if (m + 1 >= g.nb_max) corner += w;
        }
    for (std::size_t n = 0; n <= g.na_max; ++n)
        for (std::size_t m = g.nb_max - 1; m <= g.nb_max; ++m) eb += magnitude2(v[n * stride + m]);
    stats.max_edge_mass = std::max(stats.max_edge_mass, ea + eb - corner);
    stats.max_edge_a = std::max(stats.max_edge_a, ea);
    stats.max_edge_b = std::max(stats.max_edge_b, eb);
}

/// Advances psi by exp(tau G) in `substeps` equal Taylor steps. Returns
/// false if any step needs more than kMaxTaylorTerms terms.
template <typename T>
bool taylor_steps(std::vector<T>& psi, double tau, std::size_t substeps, const FockGrid& g,
                  const std::vector<char>& active, const std::vector<double>& sq,
                  EvolveStats& stats) {
    const double h = tau / static_cast<double>(substeps);
    std::vector<T> term(psi.size()), next(psi.size()), sum(psi.size());
    constexpr double eps2 = 1e-32;  // (1e-16)^2 on squared norms
    for (std::size_t step = 0; step < substeps; ++step) {
        term = psi;
        sum = psi;
        const double base = norm2(psi);
        bool converged = false;
        for (int k = 1; k <= kMaxTaylorTerms; ++k) {
            apply_generator(term, next, h / static_cast<double>(k), g, active, sq);
            term.swap(next);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
            ++stats.taylor_terms;
            if (norm2(term) <= eps2 * base) {
                converged = true;
                break;
            }
        }
        if (!converged) return false;
        psi.swap(sum);
        record_edges(psi, g, stats);
    }
    return true;
}

}  // namespace detail

/// Applies exp(lambda t (a^dagger b^dagger - a b)) to s.
///
/// Throws TruncationError when the edge mass exceeds the grid's leak_tol at
/// any step, ConvergenceError when step halving cannot make the series
/// converge or unitarity drifts by more than 1e-10 (1 + lambda t).
inline TwoModeFockState evolve_fock(const TwoModeFockState& s, const ModelParams& p,
                                    EvolveStats* stats_out = nullptr) {
    const FockGrid& g = s.grid();
    g.check();
    const double tau = p.tau();
    EvolveStats stats;
    if (tau == 0.0) {
        if (stats_out) *stats_out = stats;
        return s;
    }

    std::vector<double> sq(std::max(g.na_max, g.nb_max) + 2);
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::sqrt(static_cast<double>(k));

    std::vector<char> active(g.na_max + g.nb_max + 1, 0);
    bool is_real = true;
    for (std::size_t n = 0; n <= g.na_max; ++n)
        for (std::size_t m = 0; m <= g.nb_max; ++m) {
            const cplx z = s.at(n, m);
            if (z != cplx{}) active[n + g.nb_max - m] = 1;
            if (z.imag() != 0.0) is_real = false;
        }

    const double bound =
        2.0 * std::sqrt(static_cast<double>((g.na_max + 1) * (g.nb_max + 1)));
    std::size_t substeps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau * bound / 3.0)));
    const double norm0 = s.norm2();

    TwoModeFockState out(g);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 12)
            throw ConvergenceError("Taylor action did not converge after " +
                                   std::to_string(substeps) + " substeps");
        stats = EvolveStats{};
        stats.substeps = substeps;
        bool ok;
        if (is_real) {
            std::vector<double> psi(g.size());
            for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = s.data()[i].real();
            ok = detail::taylor_steps(psi, tau, substeps, g, active, sq, stats);
            if (ok)
                for (std::size_t i = 0; i < psi.size(); ++i) out.data()[i] = psi[i];
        } else {
            std::vector<cplx> psi = s.data();
            ok = detail::taylor_steps(psi, tau, substeps, g, active, sq, stats);
            if (ok) out.data() = std::move(psi);
        }
        if (ok) break;
        substeps *= 2;
    }

    stats.norm_drift = std::abs(out.norm2() - norm0);
    if (stats_out) *stats_out = stats;
    if (stats.norm_drift > 1e-10 * (1.0 + tau))
        throw ConvergenceError("unitarity drift " + std::to_string(stats.norm_drift) +
                               " exceeds 1e-10 (1 + lambda t)");
    if (stats.max_edge_mass > g.leak_tol)
        throw TruncationError("edge mass " + std::to_string(stats.max_edge_mass) +
                                  " exceeds leak_tol; enlarge the Fock grid",
                              stats.max_edge_mass, round_up8(1.5 * static_cast<double>(g.na_max)),
                              round_up8(1.5 * static_cast<double>(g.nb_max)));
    return out;
}

/// Moments by direct summation over ladder-operator matrix elements.
inline MomentSet moments_fock(const TwoModeFockState& s) {
    const auto& g = s.grid();
    MomentSet m;
    for (std::size_t n = 0; n <= g.na_max; ++n) {
        const double sn = std::sqrt(static_cast<double>(n));
        for (std::size_t k = 0; k <= g.nb_max; ++k) {
            const cplx z = s.at(n, k);
            if (z == cplx{}) continue;
            const double sk = std::sqrt(static_cast<double>(k));
            const double w = std::norm(z);
            m.n_a += static_cast<double>(n) * w;
            m.n_b += static_cast<double>(k) * w;
            if (n >= 1) m.mean_a += std::conj(s.at(n - 1, k)) * z * sn;
            if (k >= 1) m.mean_b += std::conj(s.at(n, k - 1)) * z * sk;
            if (n >= 2) m.sq_a += std::conj(s.at(n - 2, k)) * z * (sn * std::sqrt(n - 1.0));
            if (k >= 2) m.sq_b += std::conj(s.at(n, k - 2)) * z * (sk * std::sqrt(k - 1.0));
            if (n >= 1 && k >= 1) m.cross_ab += std::conj(s.at(n - 1, k - 1)) * z * (sn * sk);
            if (n < g.na_max && k >= 1)
                m.mixed_ab += std::conj(s.at(n + 1, k - 1)) * z * (std::sqrt(n + 1.0) * sk);
        }
    }
    return m;
}

/// Reduced photon-number distribution of mode a: P(n) = sum_m |amp(n, m)|^2.
inline std::vector<double> pnd_fock(const TwoModeFockState& s) {
    const auto& g = s.grid();
    std::vector<double> p(g.na_max + 1, 0.0);
    for (std::size_t n = 0; n <= g.na_max; ++n)
        for (std::size_t m = 0; m <= g.nb_max; ++m) p[n] += std::norm(s.at(n, m));
    return p;
}

/// Amplitude <alpha, beta | psi>.
inline cplx overlap(const TwoModeFockState& s, PhasePoint alpha, PhasePoint beta) {
    const auto& g = s.grid();
    auto bra = [](cplx z, std::size_t n_max) {
        std::vector<cplx> u(n_max + 1);
        u[0] = 1.0;
        for (std::size_t n = 1; n <= n_max; ++n)
            u[n] = u[n - 1] * std::conj(z) / std::sqrt(static_cast<double>(n));
        return u;
    };
    const auto ua = bra(alpha.value(), g.na_max);
    const auto ub = bra(beta.value(), g.nb_max);
    cplx acc{};
    for (std::size_t n = 0; n <= g.na_max; ++n) {
        cplx row{};
        for (std::size_t m = 0; m <= g.nb_max; ++m) row += ub[m] * s.at(n, m);
        acc += ua[n] * row;
    }
    return acc * std::exp(-0.5 * (alpha.norm2() + beta.norm2()));
}

struct HusimiValue {
    double value = 0.0;
    /// Set when |alpha|^2 > na_max/4 or |beta|^2 > nb_max/4: the truncated
    /// coherent expansion is no longer trustworthy there.
    bool tail_warning = false;
};

inline HusimiValue husimi_fock(const TwoModeFockState& s, PhasePoint alpha, PhasePoint beta) {
    const auto& g = s.grid();
    const double pi = std::numbers::pi;
    HusimiValue h;
    h.value = std::norm(overlap(s, alpha, beta)) / (pi * pi);
    h.tail_warning = alpha.norm2() > static_cast<double>(g.na_max) / 4.0 ||
                     beta.norm2() > static_cast<double>(g.nb_max) / 4.0;
    return h;
}

/// Single-mode Husimi marginal <z|rho_x|z>/pi of mode a or b.
inline double husimi_marginal(const TwoModeFockState& s, gaussian::Mode mode, PhasePoint z) {
    const auto& g = s.grid();
    const bool on_a = mode == gaussian::Mode::a;
    const std::size_t n_keep = on_a ? g.na_max : g.nb_max;
    const std::size_t n_trace = on_a ? g.nb_max : g.na_max;
    std::vector<cplx> u(n_keep + 1);
    u[0] = std::exp(-0.5 * z.norm2());
    for (std::size_t n = 1; n <= n_keep; ++n)
        u[n] = u[n - 1] * std::conj(z.value()) / std::sqrt(static_cast<double>(n));
    double total = 0.0;
    for (std::size_t j = 0; j <= n_trace; ++j) {
        cplx amp{};
        for (std::size_t n = 0; n <= n_keep; ++n)
            amp += u[n] * (on_a ? s.at(n, j) : s.at(j, n));
        total += std::norm(amp);
    }
    return total / std::numbers::pi;
}

/// Grid plus evolved model state, as found by autogrow.
struct FockRun {
    FockGrid grid;
    TwoModeFockState state;
    EvolveStats stats;
};

namespace detail {

/// Lower-bound guess n + 10 sqrt(n), raised by the geometric tail
/// ((l - 1/2)/(l + 1/2))^n of a Gaussian mode whose reduced covariance has
/// largest eigenvalue l.
inline std::size_t seed_cutoff(double mean, const Mat2& reduced_cov, double leak_tol) {
    std::size_t seed = std::max(kMinModeMax, round_up8(mean + 10.0 * std::sqrt(std::max(mean, 0.0))));
    const double tr = reduced_cov[0][0] + reduced_cov[1][1];
    const double det = reduced_cov[0][0] * reduced_cov[1][1] - reduced_cov[0][1] * reduced_cov[1][0];
    const double lmax = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    if (lmax > 0.5 + 1e-12) {
        const double q = (lmax - 0.5) / (lmax + 0.5);
        const double n_tail = (std::log(leak_tol) - std::log1p(-q)) / std::log(q);
        seed = std::max(seed, round_up8(n_tail));
    }
    return seed;
}

}  // namespace detail

/// Smallest grid (in steps of 8, starting from a Gaussian-seeded guess) on
/// which the initial tail and the post-evolution edge mass both stay below
/// leak_tol; returns the evolved state too.
inline FockRun solve_fock(const ModelParams& p, double leak_tol = kDefaultLeakTol,
                          std::size_t cap = kDefaultCap) {
    if (!(leak_tol > 0.0) || leak_tol > 1e-4) throw ParameterError("leak_tol must lie in (0, 1e-4]");
    const auto gs = gaussian::model_state(p);
    const auto gm = gaussian::moments_from_gaussian(gs);
    const Mat2 cov_a{{{gs.cov[0][0], gs.cov[0][1]}, {gs.cov[1][0], gs.cov[1][1]}}};
    const Mat2 cov_b{{{gs.cov[2][2], gs.cov[2][3]}, {gs.cov[3][2], gs.cov[3][3]}}};
    // The initial squeezed vacuum can need more room than the evolved state.
    const auto g0 = gaussian::initial_gaussian(p.r);
    const Mat2 cov_a0{{{g0.cov[0][0], g0.cov[0][1]}, {g0.cov[1][0], g0.cov[1][1]}}};

    FockGrid grid{std::max(detail::seed_cutoff(gm.n_a, cov_a, leak_tol),
                           detail::seed_cutoff(std::sinh(p.r) * std::sinh(p.r), cov_a0, leak_tol)),
                  detail::seed_cutoff(gm.n_b, cov_b, leak_tol), leak_tol};

    while (true) {
        if (grid.na_max > cap || grid.nb_max > cap)
            throw CapExceededError("Fock grid would exceed the cap of " + std::to_string(cap) +
                                   " per mode (needed " + std::to_string(grid.na_max) + " x " +
                                   std::to_string(grid.nb_max) + ")");
        TwoModeFockState init(grid);
        try {
            init = build_initial(p.r, grid);
        } catch (const TruncationError&) {
            grid.na_max += 8;
            continue;
        }
        EvolveStats stats;
        try {
            auto evolved = evolve_fock(init, p, &stats);
            return {grid, std::move(evolved), stats};
        } catch (const TruncationError&) {
            const double half = 0.5 * leak_tol;
            const bool grow_a = stats.max_edge_a > half;
            const bool grow_b = stats.max_edge_b > half;
            if (grow_a || !grow_b) grid.na_max += 8;
            if (grow_b || !grow_a) grid.nb_max += 8;
        }
    }
}

inline FockGrid autogrow(double r, const ModelParams& p, double leak_tol = kDefaultLeakTol,
                         std::size_t cap = kDefaultCap) {
    ModelParams q = p;
    q.r = r;
    return solve_fock(q, leak_tol, cap).grid;
}

}  // namespace sqcl::fock
