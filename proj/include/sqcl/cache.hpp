#pragma once

// Optional on-disk memoization of Fock runs, enabled by SQCL_CACHE_DIR.
// Entries are content-addressed by a hash of the canonical parameter key.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "sqcl/fock.hpp"
#include "sqcl/io.hpp"
#include "sqcl/model.hpp"

namespace sqcl::cache {

struct FockSummary {
    MomentSet moments;
    std::vector<double> pnd;
    std::size_t na_max = 0;
    std::size_t nb_max = 0;
};

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// lambda and t enter only through their product.
inline std::string canonical_key(const ModelParams& p, double leak_tol, std::size_t cap) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "fock-v1 tau=%.17g r=%.17g leak=%.17g cap=%zu", p.tau(), p.r, leak_tol, cap);
    return buf;
}

inline std::string entry_name(const std::string& key) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx.txt", static_cast<unsigned long long>(fnv1a(key)));
    return buf;
}

inline std::optional<std::filesystem::path> cache_dir() {
    const char* d = std::getenv("SQCL_CACHE_DIR");
    if (!d || !*d) return std::nullopt;
    return std::filesystem::path(d);
}

inline std::string serialize(const std::string& key, const FockSummary& s) {
    std::string out = key + '\n';
    const auto& m = s.moments;
    out += std::to_string(s.na_max) + ' ' + std::to_string(s.nb_max) + '\n';
    for (double x : {m.mean_a.real(), m.mean_a.imag(), m.mean_b.real(), m.mean_b.imag(), m.n_a, m.n_b,
                     m.sq_a.real(), m.sq_a.imag(), m.sq_b.real(), m.sq_b.imag(), m.cross_ab.real(),
                     m.cross_ab.imag(), m.mixed_ab.real(), m.mixed_ab.imag()})
        out += io::format_number(x) + '\n';
    out += std::to_string(s.pnd.size()) + '\n';
    for (double x : s.pnd) out += io::format_number(x) + '\n';
    return out;
}

/// Returns nullopt on key mismatch or any malformed content.
inline std::optional<FockSummary> deserialize(const std::string& key, std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != key) return std::nullopt;
    FockSummary s;
    double v[14];
    if (!(in >> s.na_max >> s.nb_max)) return std::nullopt;
    for (double& x : v)
        if (!(in >> x)) return std::nullopt;
    auto& m = s.moments;
    m.mean_a = {v[0], v[1]};
    m.mean_b = {v[2], v[3]};
    m.n_a = v[4];
    m.n_b = v[5];
    m.sq_a = {v[6], v[7]};
    m.sq_b = {v[8], v[9]};
    m.cross_ab = {v[10], v[11]};
    m.mixed_ab = {v[12], v[13]};
    std::size_t n = 0;
    if (!(in >> n)) return std::nullopt;
    s.pnd.resize(n);
    for (double& x : s.pnd)
        if (!(in >> x)) return std::nullopt;
    return s;
}

inline FockSummary compute(const ModelParams& p, double leak_tol, std::size_t cap) {
    const auto run = fock::solve_fock(p, leak_tol, cap);
    return {fock::moments_fock(run.state), fock::pnd_fock(run.state), run.grid.na_max, run.grid.nb_max};
}

/// Fock moments and photon distribution, read from or written to the cache
/// when SQCL_CACHE_DIR is set. Cache I/O failures fall back to computing.
inline FockSummary fock_summary(const ModelParams& p, double leak_tol = fock::kDefaultLeakTol,
                                std::size_t cap = fock::kDefaultCap) {
    const auto dir = cache_dir();
    if (!dir) return compute(p, leak_tol, cap);
    const std::string key = canonical_key(p, leak_tol, cap);
    const auto path = *dir / entry_name(key);
    {
        std::ifstream f(path);
        if (f)
            if (auto hit = deserialize(key, f)) return *hit;
    }
    auto s = compute(p, leak_tol, cap);
    try {
        std::filesystem::create_directories(*dir);
        io::write_atomic(path, serialize(key, s));
    } catch (const std::exception&) {
    }
    return s;
}

}  // namespace sqcl::cache
