#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "sqcl/errors.hpp"
#include "sqcl/model.hpp"

namespace sqcl {

/// Square grid [-extent, extent]^2 over (Re z, Im z) with `points` nodes per
/// axis, integrated with the tensor-product trapezoid rule.
struct PhaseGrid {
    double extent = 6.0;
    std::size_t points = 201;

    double spacing() const { return 2.0 * extent / static_cast<double>(points - 1); }
    double coord(std::size_t i) const { return -extent + spacing() * static_cast<double>(i); }

    double weight(std::size_t i) const { return (i == 0 || i + 1 == points) ? 0.5 : 1.0; }

    void check() const {
        if (!(extent > 0.0) || !std::isfinite(extent))
            throw ParameterError("extent must be positive and finite");
        if (points < 3) throw ParameterError("grid needs at least 3 points per axis");
    }
};

/// Extent rule for normalization checks: 6 * max(1, cosh(lambda t) cosh r),
/// 201 nodes per axis.
inline PhaseGrid normalization_grid(const ModelParams& p) {
    const double scale = std::cosh(p.tau()) * std::cosh(p.r);
    return {6.0 * std::max(1.0, scale), 201};
}

template <typename F>
double integrate(const PhaseGrid& g, F&& density) {
    g.check();
    const double h = g.spacing();
    double total = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.points; ++j)
            row += g.weight(j) * density(PhasePoint{g.coord(i), g.coord(j)});
        total += g.weight(i) * row;
    }
    return total * h * h;
}

}  // namespace sqcl
