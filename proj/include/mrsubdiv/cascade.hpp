#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mrsubdiv/detail/eigen1.hpp"
#include "mrsubdiv/mask.hpp"

namespace mrsubdiv {

/// Which one-sided value a sample carries at a jump of the refinable function.
/// Right is the default: the box function reads 1 at t = 0 and 0 at t = 1.
enum class Continuity { Right, Left };

/// Samples of a function on the grid 2^{-level} Z: values[n] is the value at
/// (offset + n) * 2^{-level}. Grid points outside the stored range read as 0.
struct DyadicSamples {
    int level = 0;
    Index offset = 0;
    std::vector<double> values;

    double scale() const { return std::ldexp(1.0, -level); }
    Index size() const { return static_cast<Index>(values.size()); }
    Index lo() const { return offset; }
    Index hi() const { return offset + size() - 1; }
    double point(Index n) const { return static_cast<double>(n) * scale(); }

    double at(Index n) const {
        Index k = n - offset;
        return (k >= 0 && k < size()) ? values[static_cast<std::size_t>(k)] : 0.0;
    }

    /// Value at an arbitrary real t. Exact on the grid; linear interpolation
    /// between neighbouring grid points otherwise.
    double value_at(double t) const {
        const double x = std::ldexp(t, level);
        const double r = std::nearbyint(x);
        if (std::abs(x - r) <= 1e-9) return at(static_cast<Index>(r));
        const double f = std::floor(x);
        const double w = x - f;
        const auto n = static_cast<Index>(f);
        return (1.0 - w) * at(n) + w * at(n + 1);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Values of the refinable function at the integers of its support.
///
/// With mask support [L, L+N-1] the unknowns live on {L, ..., L+N-2} for the
/// right-continuous convention (the value at the right endpoint is 0) and on
/// {L+1, ..., L+N-1} for the left-continuous one. They form the fixed point of
/// M_{p,q} = a_{2p-q}, normalized to unit sum.
inline Signal integer_values(const Mask& mask, Continuity side = Continuity::Right) {
    if (!validate_affine(mask, 1e-9).ok)
        throw NoUnitEigenvector("mask violates the sum rules; no normalized refinable function");
    const Index n = mask.size() - 1;
    const Index first = side == Continuity::Right ? mask.lo() : mask.lo() + 1;
    Eigen::MatrixXd m(n, n);
    for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q) m(p, q) = mask[2 * (first + p) - (first + q)];
    const Eigen::VectorXd x = detail::unit_eigenvector(m);
    return Signal(first, std::vector<double>(x.data(), x.data() + n));
}

/// Cascade evaluation of phi on 2^{-level} Z over the closed support
/// [L, L+N-1]. Even grid points are copied from the coarser level, so level j
/// samples restrict exactly to level j-1 samples.
inline DyadicSamples refine_to_level(const Mask& mask, int level, Continuity side = Continuity::Right) {
    if (level < 0) throw InputError("cascade level must be nonnegative");
    const Signal ints = integer_values(mask, side);
    DyadicSamples cur{0, mask.lo(), std::vector<double>(static_cast<std::size_t>(mask.size()), 0.0)};
    for (Index i = ints.lo(); i <= ints.hi(); ++i) cur.values[static_cast<std::size_t>(i - cur.offset)] = ints[i];

    for (int j = 0; j < level; ++j) {
        const Index stride = Index{1} << j;  // integer shift at level j
        DyadicSamples next{j + 1, 2 * cur.offset, std::vector<double>(2 * cur.values.size() - 1, 0.0)};
        for (Index n = next.lo(); n <= next.hi(); ++n) {
            double v;
            if (n % 2 == 0) {
                v = cur.at(n / 2);
            } else {
                v = 0.0;
                for (Index i = mask.lo(); i <= mask.hi(); ++i) v += mask[i] * cur.at(n - i * stride);
            }
            next.values[static_cast<std::size_t>(n - next.offset)] = v;
        }
        cur = std::move(next);
    }
    return cur;
}

/// max over the level-J grid of |phi(t) - sum_i a_i phi(2t - i)|.
inline double refinement_residual(const Mask& mask, const DyadicSamples& s) {
    if (s.level < 1) throw InputError("refinement residual needs samples at level >= 1");
    const Index shift = Index{1} << s.level;
    double worst = 0.0;
    for (Index n = s.lo(); n <= s.hi(); ++n) {
        double rhs = 0.0;
        for (Index i = mask.lo(); i <= mask.hi(); ++i) rhs += mask[i] * s.at(2 * n - i * shift);
        worst = std::max(worst, std::abs(s.at(n) - rhs));
    }
    return worst;
}

/// max over grid points t in [0, 1) of |sum_i phi(t - i) - 1|.
inline double partition_residual(const DyadicSamples& s) {
    const Index period = Index{1} << s.level;
    const Index i_lo = floor_div(-s.hi(), period) - 1;
    const Index i_hi = ceil_div(period - s.lo(), period) + 1;
    double worst = 0.0;
    for (Index n = 0; n < period; ++n) {
        double sum = 0.0;
        for (Index i = i_lo; i <= i_hi; ++i) sum += s.at(n - i * period);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

/// Riemann sum 2^{-J} sum_n phi(n 2^{-J}); tends to the integral of phi.
inline double integral_estimate(const DyadicSamples& s) {
    double sum = 0.0;
    for (double v : s.values) sum += v;
    return sum * s.scale();
}

} // namespace mrsubdiv
