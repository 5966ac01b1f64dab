#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sqcl/model.hpp"

namespace sqcl::test {

inline const std::vector<double>& lattice_r() {
    static const std::vector<double> v{0.0, 0.25, 0.5, 1.0};
    return v;
}

inline const std::vector<double>& lattice_tau() {
    static const std::vector<double> v{0.0, 0.25, 0.5, 1.0, 1.5};
    return v;
}

inline std::vector<ModelParams> lattice() {
    std::vector<ModelParams> out;
    for (double r : lattice_r())
        for (double tau : lattice_tau()) out.push_back(params_from_tau(tau, r));
    return out;
}

/// Random parameter points with r in [0, r_max] and lambda t in [0, tau_max].
inline std::vector<ModelParams> random_params(std::size_t count, unsigned seed, double r_max = 2.0,
                                              double tau_max = 3.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(0.0, r_max), ut(0.0, tau_max), ul(0.1, 3.0);
    std::vector<ModelParams> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double lambda = ul(rng);
        out.push_back(validate_params(lambda, ur(rng), ut(rng) / lambda));
    }
    return out;
}

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

}  // namespace sqcl::test

#define EXPECT_REL(x, ref, tol) EXPECT_LE(::sqcl::test::rel_err((x), (ref)), (tol)) << #x " = " << (x) << " vs " << (ref)
