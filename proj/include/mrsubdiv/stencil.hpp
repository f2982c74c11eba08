#pragma once

#include <cmath>
#include <vector>

#include "mrsubdiv/operators.hpp"

namespace mrsubdiv {

struct StencilReport {
    Mask stencil;                 // (D w)_0 ~ sum_j stencil[j] w_j
    double truncation_mass = 0.0; // sum of |d_j| dropped below tol
    double decay_ratio = 0.0;     // geometric decay of |d_j| for j > 1; 0 for finite stencils
};

/// Linear stencil of the decimation operator at coarse index 0, read off by
/// decimating shifted deltas on a wide window.
inline StencilReport stencil_extract(const Scheme& s, double tol = 1e-12, Index max_radius = 128) {
    if (max_radius < 2) throw InputError("stencil max_radius must be >= 2");
    if (!(tol > 0.0)) throw InputError("stencil tol must be > 0");
    const Index margin = s.default_margin() + max_radius;
    std::vector<double> d(static_cast<std::size_t>(2 * max_radius + 1));
    for (Index j = -max_radius; j <= max_radius; ++j)
        d[static_cast<std::size_t>(j + max_radius)] = decimate(s, Signal::delta(j), margin)[0];

    auto coef = [&](Index j) { return d[static_cast<std::size_t>(j + max_radius)]; };
    for (Index j : {-max_radius, -max_radius + 1, max_radius - 1, max_radius}) {
        if (std::abs(coef(j)) >= tol)
            throw WindowTooSmall("decimation stencil has not decayed below tol by radius " +
                                 std::to_string(max_radius));
    }

    StencilReport r{Mask(0, {1.0})};
    std::vector<double> kept(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::abs(d[i]) >= tol) kept[i] = d[i];
        else r.truncation_mass += std::abs(d[i]);
    }
    r.stencil = Mask::tight(-max_radius, kept);

    Index j1 = -1, j2 = -1;
    for (Index j = 2; j <= r.stencil.hi(); ++j) {
        if (r.stencil[j] == 0.0) continue;
        if (j1 < 0) j1 = j;
        j2 = j;
    }
    if (j1 >= 0 && j2 > j1)
        r.decay_ratio = std::pow(std::abs(r.stencil[j2] / r.stencil[j1]), 1.0 / static_cast<double>(j2 - j1));
    return r;
}

/// Applies an extracted stencil at coarse index n: sum_j d_j w_{2n + j}.
inline double apply_stencil(const Mask& stencil, const Signal& w, Index n) {
    double acc = 0.0;
    for (Index j = stencil.lo(); j <= stencil.hi(); ++j) acc += stencil[j] * w[2 * n + j];
    return acc;
}

} // namespace mrsubdiv
