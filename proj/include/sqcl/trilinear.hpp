#pragma once

// Three-mode check of the parametric approximation. The upper-level mode c
// is kept quantum, H = i g (a^dagger b^dagger c - a b c^dagger), starting
// from |r>_a |0>_b |N>_c, and the result is compared with the two-mode
// model at lambda = g sqrt(N).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sqcl/errors.hpp"
#include "sqcl/fock.hpp"
#include "sqcl/gaussian.hpp"
#include "sqcl/model.hpp"

namespace sqcl::fock {

inline constexpr std::size_t kDefaultTrilinearBudget = std::size_t{1} << 24;

struct TrilinearSpec {
    double g = 0.0;
    std::size_t n_upper = 64;
    std::size_t nc_max = 64;

    void check() const {
        if (!std::isfinite(g) || g < 0.0) throw ParameterError("g must be finite and ≥ 0");
        if (n_upper == 0) throw ParameterError("n_upper must be positive");
        if (nc_max < n_upper) throw ParameterError("nc_max must be ≥ n_upper");
    }

    /// gamma0 = sqrt(N) for the c-number replacement.
    double equivalent_lambda() const { return g * std::sqrt(static_cast<double>(n_upper)); }
};

struct TrilinearReport {
    double lambda_equiv = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
    double n_c = 0.0;
    double sq_a = 0.0;       // Re <a^2>
    double cross_ab = 0.0;   // |<ab>|, zero by the b + c conservation law
    double n_a_parametric = 0.0;
    double n_b_parametric = 0.0;
    double rel_dev_n_a = 0.0;
    double conserved_bc = 0.0;    // <n_b + n_c>, should equal N
    double conserved_diff = 0.0;  // <n_a - n_b>, should equal sinh^2 r
    double edge_mass = 0.0;
    double norm_drift = 0.0;
    std::size_t substeps = 0;
};

struct TrilinearResult {
    /// Amplitudes psi(n_a, n_b, N - n_b) on the two-mode grid. The map is
    /// an isometry under the b + c conservation law, but coherences between
    /// different n_c are lost, so only b-diagonal observables (n_a, n_b,
    /// <a^2>, P(n)) are meaningful on it.
    TwoModeFockState reduced;
    TrilinearReport report;
};

inline TrilinearResult trilinear_evolve(double r, const TrilinearSpec& spec, double t,
                                        const FockGrid& grid,
                                        std::size_t max_amplitudes = kDefaultTrilinearBudget) {
    spec.check();
    grid.check();
    if (!std::isfinite(t) || t < 0.0) throw ParameterError("t must be finite and ≥ 0");
    const std::size_t na = grid.na_max, nb = grid.nb_max, nc = spec.nc_max;
    const double cells = static_cast<double>(na + 1) * static_cast<double>(nb + 1) *
                         static_cast<double>(nc + 1);
    if (cells > static_cast<double>(max_amplitudes))
        throw MemoryBudgetError("three-mode space needs " + std::to_string(cells) +
                                " amplitudes, budget is " + std::to_string(max_amplitudes));

    const std::size_t sc = nc + 1;
    const std::size_t sb = (nb + 1) * sc;
    auto idx = [&](std::size_t n, std::size_t m, std::size_t k) { return n * sb + m * sc + k; };

    std::vector<double> psi(static_cast<std::size_t>(cells), 0.0);
    {
        const auto c = squeezed_vacuum_fock(r, na, grid.leak_tol);
        for (std::size_t n = 0; n <= na; ++n) psi[idx(n, 0, spec.n_upper)] = c[n].real();
    }
    const double norm0 = detail::norm2(psi);

    // Only cells with n_b + n_c = N are reachable.
    auto reachable = [&](std::size_t m, std::size_t k) { return m + k == spec.n_upper; };

    std::vector<double> sq(std::max({na, nb, nc}) + 2);
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::sqrt(static_cast<double>(k));

    auto apply = [&](const std::vector<double>& in, std::vector<double>& out, double scale) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t n = 0; n <= na; ++n)
            for (std::size_t m = 0; m <= std::min(nb, spec.n_upper); ++m) {
                const std::size_t k = spec.n_upper - m;
                if (k > nc || !reachable(m, k)) continue;
                double v = 0.0;
                if (n > 0 && m > 0 && k < nc)
                    v += sq[n] * sq[m] * sq[k + 1] * in[idx(n - 1, m - 1, k + 1)];
                if (n < na && m < nb && k > 0)
                    v -= sq[n + 1] * sq[m + 1] * sq[k] * in[idx(n + 1, m + 1, k - 1)];
                out[idx(n, m, k)] = scale * v;
            }
    };

    auto edge = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t n = 0; n <= na; ++n)
            for (std::size_t m = 0; m <= std::min(nb, spec.n_upper); ++m) {
                if (n + 1 < na && m + 1 < nb) continue;
                const std::size_t k = spec.n_upper - m;
                if (k <= nc) s += v[idx(n, m, k)] * v[idx(n, m, k)];
            }
        return s;
    };

    const double tau = spec.g * t;
    TrilinearReport rep;
    if (tau > 0.0) {
        const double bound = 2.0 * std::sqrt(cells);
        std::size_t substeps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau * bound / 3.0)));
        std::vector<double> start = psi;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 12) throw ConvergenceError("three-mode Taylor action did not converge");
            psi = start;
            rep.edge_mass = 0.0;
            const double h = tau / static_cast<double>(substeps);
            std::vector<double> term(psi.size()), next(psi.size()), sum(psi.size());
            bool ok = true;
            for (std::size_t step = 0; step < substeps && ok; ++step) {
                term = psi;
                sum = psi;
                const double base = detail::norm2(psi);
                bool converged = false;
                for (int k = 1; k <= kMaxTaylorTerms; ++k) {
                    apply(term, next, h / k);
                    term.swap(next);
                    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
                    if (detail::norm2(term) <= 1e-32 * base) {
                        converged = true;
                        break;
                    }
                }
                ok = converged;
                psi.swap(sum);
                rep.edge_mass = std::max(rep.edge_mass, edge(psi));
            }
            if (ok) {
                rep.substeps = substeps;
                break;
            }
            substeps *= 2;
        }
    }

    rep.norm_drift = std::abs(detail::norm2(psi) - norm0);
    if (rep.norm_drift > 1e-10 * (1.0 + tau * std::sqrt(static_cast<double>(spec.n_upper))))
        throw ConvergenceError("three-mode unitarity drift " + std::to_string(rep.norm_drift));
    if (rep.edge_mass > grid.leak_tol)
        throw TruncationError("three-mode edge mass " + std::to_string(rep.edge_mass) +
                                  " exceeds leak_tol",
                              rep.edge_mass, round_up8(1.5 * static_cast<double>(na)),
                              round_up8(1.5 * static_cast<double>(nb)));

    TwoModeFockState reduced(grid);
    for (std::size_t n = 0; n <= na; ++n)
        for (std::size_t m = 0; m <= std::min(nb, spec.n_upper); ++m) {
            const std::size_t k = spec.n_upper - m;
            if (k > nc) continue;
            const double z = psi[idx(n, m, k)];
            reduced.at(n, m) = z;
            const double w = z * z;
            rep.n_a += static_cast<double>(n) * w;
            rep.n_b += static_cast<double>(m) * w;
            rep.n_c += static_cast<double>(k) * w;
            if (n >= 2) rep.sq_a += psi[idx(n - 2, m, k)] * z * sq[n] * sq[n - 1];
            if (n >= 1 && m >= 1) rep.cross_ab += psi[idx(n - 1, m - 1, k)] * z * sq[n] * sq[m];
        }
    rep.cross_ab = std::abs(rep.cross_ab);
    rep.conserved_bc = rep.n_b + rep.n_c;
    rep.conserved_diff = rep.n_a - rep.n_b;

    rep.lambda_equiv = spec.equivalent_lambda();
    const ModelParams para{rep.lambda_equiv, r, t};
    const auto gm = gaussian::moments_from_gaussian(gaussian::model_state(para));
    rep.n_a_parametric = gm.n_a;
    rep.n_b_parametric = gm.n_b;
    rep.rel_dev_n_a = gm.n_a == 0.0 ? std::abs(rep.n_a)
                                    : std::abs(rep.n_a - gm.n_a) / std::abs(gm.n_a);
    return {std::move(reduced), rep};
}

}  // namespace sqcl::fock
