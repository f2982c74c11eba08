#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrsubdiv/errors.hpp"

namespace mrsubdiv {

using Index = std::ptrdiff_t;

/// Floor of a / b for b > 0.
constexpr Index floor_div(Index a, Index b) {
    Index q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

constexpr Index ceil_div(Index a, Index b) { return -floor_div(-a, b); }

/// Closed integer interval [lo, hi].
struct Window {
    Index lo = 0;
    Index hi = -1;

    constexpr Index size() const { return hi >= lo ? hi - lo + 1 : 0; }
    constexpr bool empty() const { return hi < lo; }
    constexpr bool contains(Index i) const { return i >= lo && i <= hi; }
    constexpr Window expanded(Index by) const { return {lo - by, hi + by}; }
    constexpr Window shrunk(Index by) const { return {lo + by, hi - by}; }

    friend constexpr bool operator==(const Window&, const Window&) = default;
};

/// Finitely supported sequence on Z. Indices outside [offset, offset + size)
/// read as zero.
class Signal {
public:
    Signal() = default;
    Signal(Index offset, std::vector<double> values)
        : offset_(offset), values_(std::move(values)) {
        for (double x : values_) {
            if (!std::isfinite(x)) throw InputError("signal value is not finite");
        }
    }

    static Signal delta(Index n) { return Signal(n, {1.0}); }
    static Signal zeros(Window w) { return Signal(w.lo, std::vector<double>(w.size(), 0.0)); }

    Index offset() const { return offset_; }
    Index size() const { return static_cast<Index>(values_.size()); }
    bool empty() const { return values_.empty(); }
    Index lo() const { return offset_; }
    Index hi() const { return offset_ + size() - 1; }
    Window support() const { return {lo(), hi()}; }
    std::span<const double> values() const { return values_; }

    double operator[](Index i) const {
        Index k = i - offset_;
        return (k >= 0 && k < size()) ? values_[static_cast<std::size_t>(k)] : 0.0;
    }

    Signal shifted(Index by) const { return Signal(offset_ + by, values_); }

    /// Same sequence laid out on exactly the window w (values outside w are dropped).
    Signal on(Window w) const {
        std::vector<double> out(static_cast<std::size_t>(w.size()));
        for (Index i = w.lo; i <= w.hi; ++i) out[static_cast<std::size_t>(i - w.lo)] = (*this)[i];
        return Signal(w.lo, std::move(out));
    }

    /// Drops exactly-zero entries at both ends.
    Signal trimmed() const {
        Index first = 0, last = size() - 1;
        while (first <= last && values_[static_cast<std::size_t>(first)] == 0.0) ++first;
        while (last >= first && values_[static_cast<std::size_t>(last)] == 0.0) --last;
        if (first > last) return {};
        return Signal(offset_ + first,
                      std::vector<double>(values_.begin() + first, values_.begin() + last + 1));
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : values_) m = std::max(m, std::abs(x));
        return m;
    }

    Index count_nonzero() const {
        return static_cast<Index>(std::count_if(values_.begin(), values_.end(),
                                                [](double x) { return x != 0.0; }));
    }

    friend Signal combine(double alpha, const Signal& a, double beta, const Signal& b) {
        if (a.empty() && b.empty()) return {};
        Window w;
        if (a.empty()) w = b.support();
        else if (b.empty()) w = a.support();
        else w = {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
        std::vector<double> out(static_cast<std::size_t>(w.size()));
        for (Index i = w.lo; i <= w.hi; ++i)
            out[static_cast<std::size_t>(i - w.lo)] = alpha * a[i] + beta * b[i];
        return Signal(w.lo, std::move(out));
    }

    friend Signal operator+(const Signal& a, const Signal& b) { return combine(1.0, a, 1.0, b); }
    friend Signal operator-(const Signal& a, const Signal& b) { return combine(1.0, a, -1.0, b); }
    friend Signal operator*(double s, const Signal& a) { return combine(s, a, 0.0, Signal{}); }

private:
    Index offset_ = 0;
    std::vector<double> values_;
};

/// Sup-norm distance of two signals over the union of their supports, or over w if given.
inline double max_abs_diff(const Signal& a, const Signal& b) { return (a - b).max_abs(); }

inline double max_abs_diff(const Signal& a, const Signal& b, Window w) {
    double m = 0.0;
    for (Index i = w.lo; i <= w.hi; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// A compactly supported coefficient sequence with tight support: the first
/// and last coefficients are nonzero.
class Mask {
public:
    Mask(Index offset, std::vector<double> coeffs) : offset_(offset), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw InvalidMask("mask has no coefficients");
        for (double x : coeffs_) {
            if (!std::isfinite(x)) throw InvalidMask("mask coefficient is not finite");
        }
        if (coeffs_.front() == 0.0 || coeffs_.back() == 0.0)
            throw InvalidMask("mask support is not tight (leading or trailing zero)");
    }

    /// Builds a mask after stripping exact zeros at both ends.
    static Mask tight(Index offset, const std::vector<double>& coeffs) {
        Signal s = Signal(offset, coeffs).trimmed();
        if (s.empty()) throw InvalidMask("mask is identically zero");
        return Mask(s.offset(), {s.values().begin(), s.values().end()});
    }

    static Mask step() { return Mask(0, {1.0, 1.0}); }
    static Mask hat() { return Mask(-1, {0.5, 1.0, 0.5}); }
    static Mask chaikin() { return Mask(0, {0.25, 0.75, 0.75, 0.25}); }
    static Mask cubic_bspline() { return Mask(0, {0.125, 0.5, 0.75, 0.5, 0.125}); }

    Index offset() const { return offset_; }
    Index size() const { return static_cast<Index>(coeffs_.size()); }
    Index lo() const { return offset_; }
    Index hi() const { return offset_ + size() - 1; }
    std::span<const double> coeffs() const { return coeffs_; }

    double operator[](Index i) const {
        Index k = i - offset_;
        return (k >= 0 && k < size()) ? coeffs_[static_cast<std::size_t>(k)] : 0.0;
    }

    Signal as_signal() const { return Signal(offset_, coeffs_); }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    Index offset_;
    std::vector<double> coeffs_;
};

struct AffineReport {
    double even_sum = 0.0;
    double odd_sum = 0.0;
    bool ok = false;
};

/// Sum rules: coefficients on even and on odd indices must each sum to one.
inline AffineReport validate_affine(const Mask& mask, double tol = 1e-12) {
    AffineReport r;
    for (Index i = mask.lo(); i <= mask.hi(); ++i) {
        (i % 2 == 0 ? r.even_sum : r.odd_sum) += mask[i];
    }
    r.ok = std::abs(r.even_sum - 1.0) <= tol && std::abs(r.odd_sum - 1.0) <= tol;
    return r;
}

/// Full linear convolution of two finitely supported sequences.
inline Signal convolve(const Signal& a, const Signal& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(static_cast<std::size_t>(a.size() + b.size() - 1), 0.0);
    for (Index i = 0; i < a.size(); ++i)
        for (Index j = 0; j < b.size(); ++j)
            out[static_cast<std::size_t>(i + j)] += a.values()[i] * b.values()[j];
    return Signal(a.offset() + b.offset(), std::move(out));
}

/// c_m = sum_j a_{j+m} a_j, supported on [-(len-1), len-1].
inline Mask autocorrelate(const Mask& mask) {
    const Index n = mask.size();
    std::vector<double> c(static_cast<std::size_t>(2 * n - 1), 0.0);
    for (Index m = -(n - 1); m <= n - 1; ++m) {
        double acc = 0.0;
        for (Index j = mask.lo(); j <= mask.hi(); ++j) acc += mask[j + m] * mask[j];
        c[static_cast<std::size_t>(m + n - 1)] = acc;
    }
    return Mask(-(n - 1), std::move(c));
}

/// Laurent symbol sum_i a_i e^{-i omega i}.
inline std::complex<double> symbol_eval(const Mask& mask, double omega) {
    std::complex<double> acc = 0.0;
    for (Index i = mask.lo(); i <= mask.hi(); ++i)
        acc += mask[i] * std::polar(1.0, -omega * static_cast<double>(i));
    return acc;
}

/// Subdivision step: out_i = sum_j a_{i-2j} v_j.
inline Signal upsample_convolve(const Mask& mask, const Signal& v) {
    if (v.empty()) return {};
    const Index lo = 2 * v.lo() + mask.lo();
    const Index hi = 2 * v.hi() + mask.hi();
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (Index j = v.lo(); j <= v.hi(); ++j) {
        const double vj = v[j];
        if (vj == 0.0) continue;
        for (Index m = mask.lo(); m <= mask.hi(); ++m)
            out[static_cast<std::size_t>(2 * j + m - lo)] += mask[m] * vj;
    }
    return Signal(lo, std::move(out));
}

/// Adjoint of upsample_convolve: out_n = sum_i a_{i-2n} z_i.
inline Signal downsample_correlate(const Mask& mask, const Signal& z) {
    if (z.empty()) return {};
    const Index lo = ceil_div(z.lo() - mask.hi(), 2);
    const Index hi = floor_div(z.hi() - mask.lo(), 2);
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (Index n = lo; n <= hi; ++n) {
        double acc = 0.0;
        for (Index m = mask.lo(); m <= mask.hi(); ++m) acc += mask[m] * z[2 * n + m];
        out[static_cast<std::size_t>(n - lo)] = acc;
    }
    return Signal(lo, std::move(out));
}

} // namespace mrsubdiv
