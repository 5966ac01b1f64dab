// sqcl: command-line front end for the squeezed-cavity model.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqcl/cache.hpp"
#include "sqcl/closed_form.hpp"
#include "sqcl/errors.hpp"
#include "sqcl/fock.hpp"
#include "sqcl/gaussian.hpp"
#include "sqcl/io.hpp"
#include "sqcl/model.hpp"
#include "sqcl/phase_space.hpp"
#include "sqcl/sweep.hpp"
#include "sqcl/trilinear.hpp"
#include "sqcl/validation.hpp"

namespace {

using json = nlohmann::ordered_json;
using sqcl::io::format_number;
using sqcl::io::format_optional;
using sqcl::sweep::Oracle;

constexpr int kExitOk = 0;
constexpr int kExitArgs = 1;
constexpr int kExitOracle = 2;
constexpr int kExitMismatch = 3;

struct Options {
    double lambda = 0.5;
    double r = 0.0;
    double t = 0.0;
    std::string oracle = "closed";
    std::string format = "csv";
    std::string out;
    double tol = 1e-8;
    std::size_t n_max = 50;
    double leak_tol = sqcl::fock::kDefaultLeakTol;
    std::size_t cap = sqcl::fock::kDefaultCap;

    std::size_t trilinear_n = 0;
    std::size_t trilinear_nc = 0;

    std::vector<double> r_list{0.0};
    std::vector<std::string> r_list_raw;
    double t_min = 0.0;
    double t_max = 3.0;
    std::size_t steps = 301;

    std::string mode = "cavity";
    double extent = 0.0;
    std::size_t points = 201;

    std::vector<double> r_values{0.0, 0.25, 0.5, 1.0};
    std::vector<double> tau_values{0.0, 0.25, 0.5, 1.0, 1.5};
    std::vector<std::string> r_values_raw;
    std::vector<std::string> tau_values_raw;
};

/// Comma-separated number list; an empty list or empty item is an error.
std::vector<double> parse_list(const std::string& flag, const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& item : items) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size())
            throw sqcl::ParameterError(flag + ": '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw sqcl::ParameterError(flag + " is empty");
    return out;
}

json flags_json(const Options& o, const std::string& command) {
    json f;
    f["command"] = command;
    f["lambda"] = o.lambda;
    f["r"] = o.r;
    f["t"] = o.t;
    f["oracle"] = o.oracle;
    f["format"] = o.format;
    f["out"] = o.out;
    f["tol"] = o.tol;
    f["n_max"] = o.n_max;
    f["leak_tol"] = o.leak_tol;
    f["cap"] = o.cap;
    if (command == "observables") f["trilinear_n"] = o.trilinear_n;
    if (command == "sweep") {
        f["r_list"] = o.r_list;
        f["t_min"] = o.t_min;
        f["t_max"] = o.t_max;
        f["steps"] = o.steps;
    }
    if (command == "qgrid") {
        f["mode"] = o.mode;
        f["extent"] = o.extent;
        f["points"] = o.points;
    }
    if (command == "validate") {
        f["r_values"] = o.r_values;
        f["tau_values"] = o.tau_values;
    }
    return f;
}

json meta_json(const Options& o, const std::string& command) {
    return json{{"version", sqcl::validation::kToolVersion}, {"flags", flags_json(o, command)}};
}

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

void emit(const Options& o, const std::string& content) {
    if (o.out.empty())
        std::cout << content << std::flush;
    else
        sqcl::io::write_atomic(o.out, content);
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

sqcl::ModelParams params(const Options& o) { return sqcl::validate_params(o.lambda, o.r, o.t); }

// ---------------------------------------------------------------- observables

struct ObservableRow {
    std::string oracle;
    std::optional<double> n_a, n_b, var_plus, var_minus, sq_a, sq_b, cross_ab, duan;
    std::string disagrees;
};

ObservableRow row_from_moments(const std::string& name, const sqcl::MomentSet& m, sqcl::QuadVariances v,
                               double duan) {
    return {name, m.n_a, m.n_b, v.plus, v.minus, m.sq_a.real(), m.sq_b.real(), m.cross_ab.real(), duan, {}};
}

double rel_dev(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

/// Names of observables where the closed row departs from the reference row.
std::string disagreements(const ObservableRow& c, const ObservableRow& ref, double tol) {
    std::string out;
    auto check = [&](const char* name, const std::optional<double>& x, const std::optional<double>& y) {
        if (x && y && rel_dev(*x, *y) > tol) out += (out.empty() ? "" : ";") + std::string(name);
    };
    check("n_a", c.n_a, ref.n_a);
    check("n_b", c.n_b, ref.n_b);
    check("var_plus", c.var_plus, ref.var_plus);
    check("var_minus", c.var_minus, ref.var_minus);
    check("sq_a", c.sq_a, ref.sq_a);
    check("sq_b", c.sq_b, ref.sq_b);
    check("cross_ab", c.cross_ab, ref.cross_ab);
    check("duan", c.duan, ref.duan);
    return out;
}

sqcl::fock::TrilinearResult run_trilinear(const Options& o, const sqcl::ModelParams& p) {
    sqcl::fock::TrilinearSpec spec;
    spec.n_upper = o.trilinear_n;
    spec.nc_max = std::max(o.trilinear_nc, o.trilinear_n);
    spec.g = o.lambda / std::sqrt(static_cast<double>(o.trilinear_n));
    auto grid = sqcl::fock::solve_fock(p, o.leak_tol, o.cap).grid;
    while (true) {
        try {
            return sqcl::fock::trilinear_evolve(p.r, spec, p.t, grid);
        } catch (const sqcl::TruncationError& e) {
            grid.na_max = std::max(grid.na_max + 8, e.suggested_na());
            grid.nb_max = std::max(grid.nb_max + 8, e.suggested_nb());
            if (grid.na_max > o.cap || grid.nb_max > o.cap)
                throw sqcl::CapExceededError("three-mode grid exceeded cap " + std::to_string(o.cap));
        }
    }
}

int cmd_observables(const Options& o) {
    const auto p = params(o);
    const Oracle which = sqcl::sweep::parse_oracle(o.oracle);
    std::vector<ObservableRow> rows;
    if (sqcl::sweep::uses(which, Oracle::closed))
        rows.push_back(row_from_moments("closed", sqcl::closed::closed_form_moments(p),
                                        sqcl::closed::quadrature_variances(p), sqcl::closed::duan_sum(p).sum));
    if (sqcl::sweep::uses(which, Oracle::gaussian)) {
        const auto g = sqcl::gaussian::model_state(p);
        rows.push_back(row_from_moments("gaussian", sqcl::gaussian::moments_from_gaussian(g),
                                        {2.0 * g.cov[0][0], 2.0 * g.cov[1][1]},
                                        sqcl::gaussian::duan_from_gaussian(g).sum));
    }
    if (sqcl::sweep::uses(which, Oracle::fock)) {
        const auto m = sqcl::cache::fock_summary(p, o.leak_tol, o.cap).moments;
        rows.push_back(row_from_moments("fock", m, sqcl::quadrature_variances_from_moments(m),
                                        sqcl::duan_from_moments(m).sum));
    }
    if (rows.size() > 1 && rows[0].oracle == "closed") {
        rows[0].disagrees = disagreements(rows[0], rows[1], o.tol);
        if (!rows[0].disagrees.empty())
            std::cerr << "warning: closed form departs from the " << rows[1].oracle
                      << " oracle on: " << rows[0].disagrees << '\n';
    }

    std::optional<sqcl::fock::TrilinearReport> tri;
    if (o.trilinear_n > 0) {
        auto res = run_trilinear(o, p);
        tri = res.report;
        sqcl::MomentSet m;
        m.n_a = tri->n_a;
        m.n_b = tri->n_b;
        m.sq_a = tri->sq_a;
        const auto v = sqcl::quadrature_variances_from_moments(m);
        rows.push_back({"trilinear", tri->n_a, tri->n_b, v.plus, v.minus, tri->sq_a, {}, {}, {}, {}});
        std::fprintf(stderr, "trilinear: N=%zu n_a=%.10g parametric=%.10g rel_dev=%.3e <n_b+n_c>=%.12g\n",
                     o.trilinear_n, tri->n_a, tri->n_a_parametric, tri->rel_dev_n_a, tri->conserved_bc);
    }

    if (o.format == "json") {
        json data = json::array();
        for (const auto& r : rows) {
            json d{{"oracle", r.oracle},         {"lambda", p.lambda},
                   {"r", p.r},                   {"t", p.t},
                   {"n_a", opt_json(r.n_a)},     {"n_b", opt_json(r.n_b)},
                   {"var_plus", opt_json(r.var_plus)}, {"var_minus", opt_json(r.var_minus)},
                   {"sq_a", opt_json(r.sq_a)},   {"sq_b", opt_json(r.sq_b)},
                   {"cross_ab", opt_json(r.cross_ab)}, {"duan", opt_json(r.duan)},
                   {"entangled", r.duan ? json(*r.duan < sqcl::kDuanSeparableBound) : json(nullptr)},
                   {"disagrees", r.disagrees}};
            if (r.oracle == "trilinear" && tri) {
                d["n_c"] = tri->n_c;
                d["n_a_parametric"] = tri->n_a_parametric;
                d["rel_dev_n_a"] = tri->rel_dev_n_a;
                d["conserved_bc"] = tri->conserved_bc;
                d["conserved_diff"] = tri->conserved_diff;
            }
            data.push_back(std::move(d));
        }
        emit(o, dump(json{{"meta", meta_json(o, "observables")}, {"data", data}}));
        return kExitOk;
    }
    std::string csv = sqcl::io::csv_header({"oracle", "lambda", "r", "t", "n_a", "n_b", "var_plus", "var_minus",
                                            "sq_a", "sq_b", "cross_ab", "duan", "entangled", "disagrees"});
    for (const auto& r : rows) {
        csv += r.oracle + ',' + format_number(p.lambda) + ',' + format_number(p.r) + ',' + format_number(p.t) +
               ',' + format_optional(r.n_a) + ',' + format_optional(r.n_b) + ',' + format_optional(r.var_plus) +
               ',' + format_optional(r.var_minus) + ',' + format_optional(r.sq_a) + ',' +
               format_optional(r.sq_b) + ',' + format_optional(r.cross_ab) + ',' + format_optional(r.duan) +
               ',' + (r.duan ? (*r.duan < sqcl::kDuanSeparableBound ? "1" : "0") : "") + ',' + r.disagrees +
               '\n';
    }
    emit(o, csv);
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Options& o) {
    sqcl::sweep::SweepSpec spec;
    spec.lambda = o.lambda;
    spec.r_list = o.r_list;
    spec.t_min = o.t_min;
    spec.t_max = o.t_max;
    spec.steps = o.steps;
    spec.oracle = sqcl::sweep::parse_oracle(o.oracle);
    spec.leak_tol = o.leak_tol;
    spec.cap = o.cap;
    const auto res = sqcl::sweep::run_sweep(spec);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';

    if (o.format == "json") {
        json data = json::array();
        for (const auto& r : res.rows)
            data.push_back(json{{"t", r.t},
                                {"lambda", r.lambda},
                                {"r", r.r},
                                {"n_a", r.n_a},
                                {"n_b", r.n_b},
                                {"var_plus", r.var_plus},
                                {"var_minus", r.var_minus},
                                {"duan_closed", opt_json(r.duan_closed)},
                                {"duan_gaussian", opt_json(r.duan_gaussian)},
                                {"duan_fock", opt_json(r.duan_fock)}});
        emit(o, dump(json{{"meta", meta_json(o, "sweep")}, {"data", data}}));
    } else {
        emit(o, sqcl::sweep::to_csv(res.rows));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- qgrid

int cmd_qgrid(const Options& o) {
    const auto p = params(o);
    if (o.mode != "cavity" && o.mode != "atomic" && o.mode != "joint-slice")
        throw sqcl::ParameterError("mode must be cavity, atomic or joint-slice");
    if (o.points < 21) throw sqcl::ParameterError("points must be ≥ 21");
    sqcl::PhaseGrid grid = sqcl::normalization_grid(p);
    grid.points = o.points;
    if (o.extent != 0.0) grid.extent = o.extent;
    grid.check();

    const auto g = sqcl::gaussian::model_state(p);
    const sqcl::PhasePoint origin{0.0, 0.0};
    auto closed = [&](sqcl::PhasePoint z) {
        if (o.mode == "cavity") return sqcl::closed::q_cavity(z, p);
        if (o.mode == "atomic") return sqcl::closed::q_atomic(z, p);
        return sqcl::closed::q_joint(z, origin, p);
    };
    auto gauss = [&](sqcl::PhasePoint z) {
        if (o.mode == "cavity") return sqcl::gaussian::q_marginal_from_gaussian(g, sqcl::gaussian::Mode::a, z);
        if (o.mode == "atomic") return sqcl::gaussian::q_marginal_from_gaussian(g, sqcl::gaussian::Mode::b, z);
        return sqcl::gaussian::q_from_gaussian(g, z, origin);
    };
    const double norm_closed = sqcl::integrate(grid, closed);
    const double norm_gauss = sqcl::integrate(grid, gauss);

    if (o.format == "json") {
        json data = json::array();
        for (std::size_t i = 0; i < grid.points; ++i)
            for (std::size_t j = 0; j < grid.points; ++j) {
                const sqcl::PhasePoint z{grid.coord(i), grid.coord(j)};
                data.push_back(json{{"re", z.re}, {"im", z.im}, {"q_closed", closed(z)}, {"q_gaussian", gauss(z)}});
            }
        json meta = meta_json(o, "qgrid");
        meta["normalization"] = {{"q_closed", norm_closed}, {"q_gaussian", norm_gauss}};
        emit(o, dump(json{{"meta", meta}, {"data", data}}));
        return kExitOk;
    }
    std::string csv = sqcl::io::csv_header({"re", "im", "q_closed", "q_gaussian"});
    for (std::size_t i = 0; i < grid.points; ++i)
        for (std::size_t j = 0; j < grid.points; ++j) {
            const sqcl::PhasePoint z{grid.coord(i), grid.coord(j)};
            csv += format_number(z.re) + ',' + format_number(z.im) + ',' + format_number(closed(z)) + ',' +
                   format_number(gauss(z)) + '\n';
        }
    csv += "# normalization q_closed=" + format_number(norm_closed) + " q_gaussian=" + format_number(norm_gauss) +
           '\n';
    emit(o, csv);
    return kExitOk;
}

// ---------------------------------------------------------------- pnd

int cmd_pnd(const Options& o) {
    const auto p = params(o);
    if (o.n_max > 500) throw sqcl::ParameterError("n-max must be ≤ 500");
    const Oracle which = sqcl::sweep::parse_oracle(o.oracle);
    const bool want_closed = which != Oracle::fock && which != Oracle::gaussian;
    const bool want_fock = which == Oracle::fock || which == Oracle::all;
    if (which == Oracle::gaussian) throw sqcl::ParameterError("pnd supports oracles closed, fock, all");

    std::vector<double> closed, fock;
    if (want_closed)
        for (std::size_t n = 0; n <= o.n_max; ++n) closed.push_back(sqcl::closed::pnd_closed_form(n, p, o.n_max));
    if (want_fock) {
        const auto s = sqcl::cache::fock_summary(p, o.leak_tol, o.cap);
        for (std::size_t n = 0; n <= o.n_max; ++n) fock.push_back(n < s.pnd.size() ? s.pnd[n] : 0.0);
    }
    auto sums = [](const std::vector<double>& v) {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t n = 0; n < v.size(); ++n) {
            s0 += v[n];
            s1 += static_cast<double>(n) * v[n];
        }
        return std::pair{s0, s1};
    };
    double max_diff = 0.0;
    if (want_closed && want_fock)
        for (std::size_t n = 0; n <= o.n_max; ++n) max_diff = std::max(max_diff, std::abs(closed[n] - fock[n]));

    auto at = [](const std::vector<double>& v, std::size_t n) {
        return v.empty() ? std::optional<double>() : std::optional<double>(v[n]);
    };
    if (o.format == "json") {
        json data = json::array();
        for (std::size_t n = 0; n <= o.n_max; ++n)
            data.push_back(json{{"n", n}, {"p_closed", opt_json(at(closed, n))}, {"p_fock", opt_json(at(fock, n))}});
        json meta = meta_json(o, "pnd");
        if (want_closed) meta["sums"]["p_closed"] = {{"sum_p", sums(closed).first}, {"sum_np", sums(closed).second}};
        if (want_fock) meta["sums"]["p_fock"] = {{"sum_p", sums(fock).first}, {"sum_np", sums(fock).second}};
        if (want_closed && want_fock) meta["max_abs_diff"] = max_diff;
        emit(o, dump(json{{"meta", meta}, {"data", data}}));
        return kExitOk;
    }
    std::string csv = sqcl::io::csv_header({"n", "p_closed", "p_fock"});
    for (std::size_t n = 0; n <= o.n_max; ++n)
        csv += std::to_string(n) + ',' + format_optional(at(closed, n)) + ',' + format_optional(at(fock, n)) + '\n';
    if (want_closed)
        csv += "# p_closed sum_p=" + format_number(sums(closed).first) +
               " sum_np=" + format_number(sums(closed).second) + '\n';
    if (want_fock)
        csv += "# p_fock sum_p=" + format_number(sums(fock).first) + " sum_np=" + format_number(sums(fock).second) +
               '\n';
    if (want_closed && want_fock) csv += "# max_abs_diff=" + format_number(max_diff) + '\n';
    emit(o, csv);
    return kExitOk;
}

// ---------------------------------------------------------------- validate

json record_json(const sqcl::validation::EquationRecord& r) {
    return json{{"id", r.id},
                {"observable", r.observable},
                {"expectation", sqcl::validation::to_string(r.expectation)},
                {"params", {{"lambda", r.params.lambda}, {"r", r.params.r}, {"t", r.params.t}}},
                {"closed", opt_json(r.closed)},
                {"gaussian", opt_json(r.gaussian)},
                {"fock", opt_json(r.fock)},
                {"abs_dev", r.abs_dev},
                {"rel_dev", r.rel_dev},
                {"tol", r.tol},
                {"verdict", sqcl::validation::to_string(r.verdict)},
                {"probe", r.probe}};
}

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + '"';
}

int cmd_validate(const Options& o, bool leak_given, bool tol_given) {
    sqcl::validation::LatticeSettings s;
    s.r_values = o.r_values;
    s.tau_values = o.tau_values;
    s.lambda = o.lambda;
    if (leak_given) s.leak_tol = o.leak_tol;
    if (tol_given) s.tol_moments = o.tol;
    s.cap = o.cap;
    const auto rep = sqcl::validation::validate(s);

    const auto& sm = rep.summary;
    std::fprintf(stderr, "validate: %zu records, %zu agree, %zu disagree (%zu open), %zu expected-agree failures\n",
                 sm.records, sm.agree, sm.disagree, sm.open_disagreements, sm.expected_agree_failures);
    std::vector<std::string> seen;
    for (const auto& r : rep.records) {
        if (r.verdict != sqcl::validation::Verdict::disagree) continue;
        if (std::find(seen.begin(), seen.end(), r.id) != seen.end()) continue;
        seen.push_back(r.id);
        std::fprintf(stderr, "  %-10s %-24s first at r=%g lambda*t=%g: closed %.10g, gaussian %s, fock %s\n",
                     sqcl::validation::to_string(r.expectation), r.id.c_str(), r.params.r, r.params.tau(),
                     r.closed.value_or(NAN), r.gaussian ? format_number(*r.gaussian).c_str() : "-",
                     r.fock ? format_number(*r.fock).c_str() : "-");
    }

    if (o.format == "json") {
        json records = json::array();
        for (const auto& r : rep.records) records.push_back(record_json(r));
        json meta = meta_json(o, "validate");
        meta["settings"] = {{"r_values", s.r_values},         {"tau_values", s.tau_values},
                            {"lambda", s.lambda},             {"leak_tol", s.leak_tol},
                            {"cap", s.cap},                   {"pnd_sum_max", s.pnd_sum_max},
                            {"tol_moments", s.tol_moments},   {"tol_husimi", s.tol_husimi},
                            {"tol_pnd", s.tol_pnd},           {"tol_norm", s.tol_norm},
                            {"tol_pnd_sum", s.tol_pnd_sum},   {"tol_pnd_mean", s.tol_pnd_mean}};
        json summary{{"records", sm.records},
                     {"agree", sm.agree},
                     {"disagree", sm.disagree},
                     {"not_applicable", sm.not_applicable},
                     {"expected_agree_failures", sm.expected_agree_failures},
                     {"open_disagreements", sm.open_disagreements},
                     {"passed", rep.passed()}};
        emit(o, dump(json{{"meta", meta}, {"records", records}, {"summary", summary}}));
    } else {
        std::string csv = sqcl::io::csv_header({"id", "observable", "expectation", "lambda", "r", "t", "closed",
                                                "gaussian", "fock", "abs_dev", "rel_dev", "tol", "verdict",
                                                "probe"});
        for (const auto& r : rep.records)
            csv += r.id + ',' + csv_quote(r.observable) + ',' + sqcl::validation::to_string(r.expectation) + ',' +
                   format_number(r.params.lambda) + ',' + format_number(r.params.r) + ',' +
                   format_number(r.params.t) + ',' + format_optional(r.closed) + ',' + format_optional(r.gaussian) +
                   ',' + format_optional(r.fock) + ',' + format_number(r.abs_dev) + ',' +
                   format_number(r.rel_dev) + ',' + format_number(r.tol) + ',' +
                   sqcl::validation::to_string(r.verdict) + ',' + csv_quote(r.probe) + '\n';
        csv += "# records=" + std::to_string(sm.records) + " agree=" + std::to_string(sm.agree) +
               " disagree=" + std::to_string(sm.disagree) +
               " expected_agree_failures=" + std::to_string(sm.expected_agree_failures) + '\n';
        emit(o, csv);
    }
    return rep.passed() ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------- figures

int cmd_figures(const Options& o) {
    const std::filesystem::path dir = o.out.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out);
    sqcl::sweep::write_figures(dir);
    if (o.format == "json") {
        json data = json::array();
        for (const char* f : {"fig1.csv", "fig2.csv", "fig3.csv"}) data.push_back(json{{"file", (dir / f).string()}});
        std::cout << dump(json{{"meta", meta_json(o, "figures")}, {"data", data}});
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeezed cavity field coupled to excited atoms: closed forms and oracles"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    Options o;

    app.add_option("--lambda", o.lambda, "coupling lambda")->capture_default_str();
    app.add_option("--r", o.r, "squeeze parameter r")->capture_default_str();
    app.add_option("--t", o.t, "interaction time t")->capture_default_str();
    app.add_option("--oracle", o.oracle, "closed, gaussian, fock or all")
        ->check(CLI::IsMember({"closed", "gaussian", "fock", "all"}))
        ->capture_default_str();
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--out", o.out, "output file (figures: directory); default stdout");
    auto* tol_opt = app.add_option("--tol", o.tol, "comparison tolerance")->capture_default_str();
    app.add_option("--n-max", o.n_max, "largest photon number for pnd")->capture_default_str();
    auto* leak_opt = app.add_option("--leak-tol", o.leak_tol, "Fock edge-mass tolerance")->capture_default_str();
    app.add_option("--cap", o.cap, "largest Fock cutoff per mode")->capture_default_str();

    auto* obs = app.add_subcommand("observables", "moments, variances and Duan sum at one point")->fallthrough();
    obs->add_option("--trilinear-n", o.trilinear_n, "also run the three-mode model with N upper-level quanta");
    obs->add_option("--trilinear-nc", o.trilinear_nc, "mode-c cutoff for the three-mode model (default N)");

    auto* sw = app.add_subcommand("sweep", "observables over a grid of r and t")->fallthrough();
    auto* r_list_opt = sw->add_option("--r-list", o.r_list_raw, "comma-separated r values (default 0)")
                           ->delimiter(',')
                           ->allow_extra_args(false);
    sw->add_option("--t-min", o.t_min)->capture_default_str();
    sw->add_option("--t-max", o.t_max)->capture_default_str();
    sw->add_option("--steps", o.steps)->capture_default_str();

    auto* qg = app.add_subcommand("qgrid", "Husimi function on a phase-space grid")->fallthrough();
    qg->add_option("--mode", o.mode, "cavity, atomic or joint-slice")->capture_default_str();
    qg->add_option("--extent", o.extent, "half-width of the grid (default 6 max(1, cosh(lambda t) cosh r))");
    qg->add_option("--points", o.points, "nodes per axis")->capture_default_str();

    auto* pn = app.add_subcommand("pnd", "cavity photon-number distribution")->fallthrough();

    auto* va = app.add_subcommand("validate", "closed forms against both oracles over a lattice")->fallthrough();
    auto* r_values_opt = va->add_option("--r-values", o.r_values_raw, "comma-separated r lattice (default 0,0.25,0.5,1)")
                             ->delimiter(',')
                             ->allow_extra_args(false);
    auto* tau_values_opt =
        va->add_option("--tau-values", o.tau_values_raw, "comma-separated lambda t lattice (default 0,0.25,0.5,1,1.5)")
            ->delimiter(',')
            ->allow_extra_args(false);

    auto* fi = app.add_subcommand("figures", "fig1.csv, fig2.csv, fig3.csv into --out")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitArgs;
    }

    try {
        if (r_list_opt->count()) o.r_list = parse_list("--r-list", o.r_list_raw);
        if (r_values_opt->count()) o.r_values = parse_list("--r-values", o.r_values_raw);
        if (tau_values_opt->count()) o.tau_values = parse_list("--tau-values", o.tau_values_raw);
        if (*obs) return cmd_observables(o);
        if (*sw) return cmd_sweep(o);
        if (*qg) return cmd_qgrid(o);
        if (*pn) return cmd_pnd(o);
        if (*va) return cmd_validate(o, leak_opt->count() > 0, tol_opt->count() > 0);
        if (*fi) return cmd_figures(o);
    } catch (const sqcl::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgs;
    } catch (const sqcl::OracleError& e) {
        std::cerr << "oracle failure: " << e.what() << '\n';
        return kExitOracle;
    }
    return kExitArgs;
}
