#pragma once

// Parameter sweeps over (r, t) and their CSV rendering.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sqcl/cache.hpp"
#include "sqcl/closed_form.hpp"
#include "sqcl/errors.hpp"
#include "sqcl/fock.hpp"
#include "sqcl/gaussian.hpp"
#include "sqcl/io.hpp"
#include "sqcl/model.hpp"

namespace sqcl::sweep {

using io::csv_header;
using io::format_number;
using io::format_optional;
using io::write_atomic;

enum class Oracle { closed, gaussian, fock, all };

inline const char* to_string(Oracle o) {
    switch (o) {
        case Oracle::closed: return "closed";
        case Oracle::gaussian: return "gaussian";
        case Oracle::fock: return "fock";
        default: return "all";
    }
}

inline Oracle parse_oracle(const std::string& s) {
    if (s == "closed") return Oracle::closed;
    if (s == "gaussian") return Oracle::gaussian;
    if (s == "fock") return Oracle::fock;
    if (s == "all") return Oracle::all;
    throw ParameterError("unknown oracle '" + s + "' (closed, gaussian, fock, all)");
}

inline bool uses(Oracle selected, Oracle o) { return selected == Oracle::all || selected == o; }

struct SweepSpec {
    double lambda = 0.5;
    std::vector<double> r_list{0.0};
    double t_min = 0.0;
    double t_max = 3.0;
    std::size_t steps = 301;
    Oracle oracle = Oracle::closed;
    double leak_tol = fock::kDefaultLeakTol;
    std::size_t cap = fock::kDefaultCap;

    void check() const {
        validate_params(lambda, 0.0, t_min);
        validate_params(lambda, 0.0, t_max);
        if (r_list.empty()) throw ParameterError("r list is empty");
        for (double r : r_list) validate_params(lambda, r, 0.0);
        if (t_min > t_max) throw ParameterError("t_min must be ≤ t_max");
        if (steps < 2) throw ParameterError("steps must be ≥ 2");
    }

    bool degenerate() const { return t_min == t_max; }

    /// Time samples; a degenerate range yields a single sample.
    std::vector<double> times() const {
        if (degenerate()) return {t_min};
        std::vector<double> ts(steps);
        const double h = (t_max - t_min) / static_cast<double>(steps - 1);
        for (std::size_t i = 0; i < steps; ++i) ts[i] = t_min + h * static_cast<double>(i);
        ts.back() = t_max;
        return ts;
    }
};

struct SweepRow {
    double t = 0.0;
    double lambda = 0.0;
    double r = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
    double var_plus = 0.0;
    double var_minus = 0.0;
    std::optional<double> duan_closed;
    std::optional<double> duan_gaussian;
    std::optional<double> duan_fock;
};

inline const std::vector<std::string>& columns() {
    static const std::vector<std::string> c{"t",        "lambda",    "r",           "n_a",
                                            "n_b",      "var_plus",  "var_minus",   "duan_closed",
                                            "duan_gaussian", "duan_fock"};
    return c;
}

/// One row. n_a, n_b and the variances come from the first selected oracle
/// in the order closed, gaussian, fock; each selected oracle fills its own
/// Duan column.
inline SweepRow evaluate_row(const ModelParams& p, Oracle oracle, double leak_tol = fock::kDefaultLeakTol,
                             std::size_t cap = fock::kDefaultCap) {
    SweepRow row;
    row.t = p.t;
    row.lambda = p.lambda;
    row.r = p.r;
    bool filled = false;
    if (uses(oracle, Oracle::closed)) {
        const auto m = closed::closed_form_moments(p);
        const auto v = closed::quadrature_variances(p);
        row.n_a = m.n_a;
        row.n_b = m.n_b;
        row.var_plus = v.plus;
        row.var_minus = v.minus;
        row.duan_closed = closed::duan_sum(p).sum;
        filled = true;
    }
    if (uses(oracle, Oracle::gaussian)) {
        const auto g = gaussian::model_state(p);
        row.duan_gaussian = gaussian::duan_from_gaussian(g).sum;
        if (!filled) {
            const auto m = gaussian::moments_from_gaussian(g);
            row.n_a = m.n_a;
            row.n_b = m.n_b;
            row.var_plus = 2.0 * g.cov[0][0];
            row.var_minus = 2.0 * g.cov[1][1];
            filled = true;
        }
    }
    if (uses(oracle, Oracle::fock)) {
        const auto m = cache::fock_summary(p, leak_tol, cap).moments;
        row.duan_fock = duan_from_moments(m).sum;
        if (!filled) {
            const auto v = quadrature_variances_from_moments(m);
            row.n_a = m.n_a;
            row.n_b = m.n_b;
            row.var_plus = v.plus;
            row.var_minus = v.minus;
        }
    }
    return row;
}

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

/// Rows ordered by (r, t) with r in the given list order.
inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.check();
    SweepResult out;
    if (spec.degenerate())
        out.warnings.push_back("t_min == t_max: " + std::to_string(spec.steps) +
                               " identical time samples collapsed to one row per r");
    const auto ts = spec.times();
    for (double r : spec.r_list)
        for (double t : ts)
            out.rows.push_back(evaluate_row(ModelParams{spec.lambda, r, t}, spec.oracle, spec.leak_tol, spec.cap));
    return out;
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = csv_header(columns());
    for (const auto& r : rows) {
        out += format_number(r.t) + ',' + format_number(r.lambda) + ',' + format_number(r.r) + ',' +
               format_number(r.n_a) + ',' + format_number(r.n_b) + ',' + format_number(r.var_plus) + ',' +
               format_number(r.var_minus) + ',' + format_optional(r.duan_closed) + ',' +
               format_optional(r.duan_gaussian) + ',' + format_optional(r.duan_fock) + '\n';
    }
    return out;
}

// Figures: long format, one row per (r, t).

inline constexpr double kFigureLambda = 0.5;
inline constexpr std::size_t kFigureSteps = 301;
inline constexpr double kFigureTMax = 3.0;

inline const std::vector<double>& figure_r_values() {
    static const std::vector<double> r{0.0, 0.25, 0.5, 0.75, 1.0};
    return r;
}

struct FigureFiles {
    std::string fig1;  // t, r, n_a
    std::string fig2;  // t, r, var_plus
    std::string fig3;  // t, r, duan_closed, duan_gaussian
};

inline FigureFiles figure_csvs() {
    SweepSpec spec;
    spec.lambda = kFigureLambda;
    spec.r_list = figure_r_values();
    spec.t_min = 0.0;
    spec.t_max = kFigureTMax;
    spec.steps = kFigureSteps;
    spec.oracle = Oracle::closed;
    const auto rows = run_sweep(spec).rows;

    const std::string lam = "# lambda = " + format_number(kFigureLambda) + "\n";
    FigureFiles f;
    f.fig1 = "# cavity mean photon number\n" + lam + csv_header({"t", "r", "n_a"});
    f.fig2 = "# plus quadrature variance\n" + lam + csv_header({"t", "r", "var_plus"});
    f.fig3 = "# EPR-type variance sum\n" + lam +
             csv_header({"t", "r", "duan_closed", "duan_gaussian"});
    for (const auto& row : rows) {
        const ModelParams p{row.lambda, row.r, row.t};
        const std::string tr = format_number(row.t) + ',' + format_number(row.r) + ',';
        f.fig1 += tr + format_number(row.n_a) + '\n';
        f.fig2 += tr + format_number(row.var_plus) + '\n';
        f.fig3 += tr + format_optional(row.duan_closed) + ',' +
                  format_number(gaussian::duan_from_gaussian(gaussian::model_state(p)).sum) + '\n';
    }
    return f;
}

inline void write_figures(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw ParameterError("not a directory: " + dir.string());
    const auto f = figure_csvs();
    write_atomic(dir / "fig1.csv", f.fig1);
    write_atomic(dir / "fig2.csv", f.fig2);
    write_atomic(dir / "fig3.csv", f.fig3);
}

}  // namespace sqcl::sweep
