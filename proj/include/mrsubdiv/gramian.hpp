#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrsubdiv/cascade.hpp"
#include "mrsubdiv/detail/eigen1.hpp"
#include "mrsubdiv/mask.hpp"

namespace mrsubdiv {

/// Symmetric sequence s_{-i} = s_i, zero for |i| > radius. Stores s_0..s_radius.
class SymmetricStencil {
public:
    SymmetricStencil() : half_{0.0} {}
    explicit SymmetricStencil(std::vector<double> half) : half_(std::move(half)) {
        if (half_.empty()) throw InputError("symmetric stencil needs at least the center value");
    }

    Index radius() const { return static_cast<Index>(half_.size()) - 1; }
    std::span<const double> half() const { return half_; }

    double operator[](Index i) const {
        Index k = i < 0 ? -i : i;
        return k <= radius() ? half_[static_cast<std::size_t>(k)] : 0.0;
    }

    double total() const {
        double s = half_[0];
        for (Index i = 1; i <= radius(); ++i) s += 2.0 * half_[static_cast<std::size_t>(i)];
        return s;
    }

    Signal as_signal() const {
        std::vector<double> full;
        for (Index i = -radius(); i <= radius(); ++i) full.push_back((*this)[i]);
        return Signal(-radius(), std::move(full));
    }

    /// Real symbol s_0 + 2 sum_{i>0} s_i cos(i omega).
    double symbol(double omega) const {
        double acc = half_[0];
        for (Index i = 1; i <= radius(); ++i)
            acc += 2.0 * half_[static_cast<std::size_t>(i)] * std::cos(static_cast<double>(i) * omega);
        return acc;
    }

private:
    std::vector<double> half_;
};

/// eta_i = integral of phi(t) phi(t - i).
using GramianSequence = SymmetricStencil;

/// Gramian via the autocorrelation refinement equation. The autocorrelation
/// Phi of phi satisfies Phi(t) = (1/2) sum_m c_m Phi(2t - m) and is continuous
/// and zero at +-(N-1), so eta on {-(N-2), ..., N-2} is the unit-sum fixed
/// point of T_{i,m} = c_{2i-m} / 2.
inline GramianSequence gramian_eigen(const Mask& mask) {
    if (!validate_affine(mask, 1e-9).ok)
        throw NoUnitEigenvector("mask violates the sum rules; no normalized refinable function");
    const Mask c = autocorrelate(mask);
    const Index radius = mask.size() - 2;
    const Index n = 2 * radius + 1;
    Eigen::MatrixXd t(n, n);
    for (Index i = -radius; i <= radius; ++i)
        for (Index m = -radius; m <= radius; ++m) t(i + radius, m + radius) = 0.5 * c[2 * i - m];
    const Eigen::VectorXd x = detail::unit_eigenvector(t);
    std::vector<double> half(static_cast<std::size_t>(radius + 1));
    for (Index i = 0; i <= radius; ++i) half[static_cast<std::size_t>(i)] = 0.5 * (x(radius + i) + x(radius - i));
    return GramianSequence(std::move(half));
}

/// max_i |eta_i - sum_m (c_{2i-m}/2) eta_m|.
inline double gramian_eigen_residual(const Mask& mask, const GramianSequence& eta) {
    const Mask c = autocorrelate(mask);
    double worst = 0.0;
    for (Index i = -eta.radius(); i <= eta.radius(); ++i) {
        double acc = 0.0;
        for (Index m = -eta.radius(); m <= eta.radius(); ++m) acc += 0.5 * c[2 * i - m] * eta[m];
        worst = std::max(worst, std::abs(eta[i] - acc));
    }
    return worst;
}

/// Quadrature estimate of eta from cascade samples at the given level:
/// 2^{-J} sum_n phi(n 2^{-J}) phi(n 2^{-J} - i), the composite trapezoid rule
/// over the whole line.
inline GramianSequence gramian_quadrature(const Mask& mask, int level) {
    if (level < 4) throw QuadratureUnderResolved("gramian quadrature needs level >= 4");
    const DyadicSamples s = refine_to_level(mask, level);
    const Index shift = Index{1} << level;
    const Index radius = mask.size() - 2;
    std::vector<double> half(static_cast<std::size_t>(radius + 1));
    for (Index i = 0; i <= radius; ++i) {
        double acc = 0.0;
        for (Index n = s.lo(); n <= s.hi(); ++n) acc += s.at(n) * s.at(n - i * shift);
        half[static_cast<std::size_t>(i)] = acc * s.scale();
    }
    return GramianSequence(std::move(half));
}

struct RieszReport {
    double min_symbol = 0.0;
    bool ok = false;
};

/// Samples the symbol on n_samples equispaced points of [0, pi]; the symbol
/// is even and 2 pi periodic so this covers the whole circle.
inline RieszReport riesz_check(const SymmetricStencil& eta, Index n_samples = 1024, double tol = 1e-12) {
    if (n_samples < 2 * eta.radius() + 1 || n_samples < 2)
        throw InputError("riesz_check needs at least 2*radius+1 samples");
    RieszReport r;
    r.min_symbol = eta.symbol(0.0);
    for (Index k = 1; k < n_samples; ++k) {
        const double omega = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        r.min_symbol = std::min(r.min_symbol, eta.symbol(omega));
    }
    r.ok = r.min_symbol > tol;
    return r;
}

/// Finite section of the Toeplitz operator (s_{i-j}) on a window of indices.
struct BandedToeplitz {
    SymmetricStencil band;
    Window window;

    Index size() const { return window.size(); }
    Index bandwidth() const { return std::min(band.radius(), std::max<Index>(size() - 1, 0)); }
    double entry(Index i, Index j) const { return window.contains(i) && window.contains(j) ? band[i - j] : 0.0; }

    /// Section product, restricted to the window.
    Signal apply(const Signal& x) const {
        std::vector<double> out(static_cast<std::size_t>(size()), 0.0);
        for (Index i = window.lo; i <= window.hi; ++i) {
            double acc = 0.0;
            const Index lo = std::max(window.lo, i - band.radius());
            const Index hi = std::min(window.hi, i + band.radius());
            for (Index j = lo; j <= hi; ++j) acc += band[i - j] * x[j];
            out[static_cast<std::size_t>(i - window.lo)] = acc;
        }
        return Signal(window.lo, std::move(out));
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd m(size(), size());
        for (Index i = 0; i < size(); ++i)
            for (Index j = 0; j < size(); ++j) m(i, j) = band[i - j];
        return m;
    }
};

inline BandedToeplitz assemble(const SymmetricStencil& band, Window window) {
    if (window.empty()) throw InputError("assemble: empty window");
    return {band, window};
}

/// Square-root-free Cholesky (L D L^T) of a symmetric banded matrix in band
/// storage: row i holds L(i, i-p) .. L(i, i-1) and then D(i). Diagonal
/// systems are solved by a single division.
class BandedCholesky {
public:
    explicit BandedCholesky(const BandedToeplitz& t) : n_(t.size()), p_(t.bandwidth()), window_(t.window) {
        l_.assign(static_cast<std::size_t>(n_ * (p_ + 1)), 0.0);
        for (Index i = 0; i < n_; ++i) {
            for (Index j = std::max<Index>(0, i - p_); j <= i; ++j) {
                double s = t.band[i - j];
                for (Index k = std::max<Index>(0, i - p_); k < j; ++k) s -= at(i, k) * at(j, k) * at(k, k);
                if (i == j) {
                    if (!(s > 0.0) || !std::isfinite(s))
                        throw NotPositiveDefinite("nonpositive pivot at row " + std::to_string(i + window_.lo));
                    ref(i, i) = s;
                } else {
                    ref(i, j) = s / at(j, j);
                }
            }
        }
    }

    Window window() const { return window_; }

    Signal solve(const Signal& rhs) const {
        if (!rhs.empty() && (rhs.lo() < window_.lo || rhs.hi() > window_.hi)) {
            // Entries outside the window are only tolerated when they are zero.
            const Signal t = rhs.trimmed();
            if (!t.empty() && (t.lo() < window_.lo || t.hi() > window_.hi))
                throw InputError("right-hand side support exceeds the solve window");
        }
        std::vector<double> y(static_cast<std::size_t>(n_));
        for (Index i = 0; i < n_; ++i) {
            double s = rhs[i + window_.lo];
            for (Index k = std::max<Index>(0, i - p_); k < i; ++k) s -= at(i, k) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s;
        }
        for (Index i = n_ - 1; i >= 0; --i) {
            double s = y[static_cast<std::size_t>(i)] / at(i, i);
            for (Index k = i + 1; k <= std::min(n_ - 1, i + p_); ++k) s -= at(k, i) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s;
        }
        return Signal(window_.lo, std::move(y));
    }

private:
    double at(Index i, Index j) const { return l_[static_cast<std::size_t>(i * (p_ + 1) + (i - j))]; }
    double& ref(Index i, Index j) { return l_[static_cast<std::size_t>(i * (p_ + 1) + (i - j))]; }

    Index n_;
    Index p_;
    Window window_;
    std::vector<double> l_;
};

/// Solves the finite section T u = rhs (zero exterior) by banded L D L^T.
inline Signal solve_spd(const BandedToeplitz& t, const Signal& rhs) { return BandedCholesky(t).solve(rhs); }

} // namespace mrsubdiv
