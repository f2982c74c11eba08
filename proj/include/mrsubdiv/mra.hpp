#pragma once

#include <cmath>
#include <vector>

#include "mrsubdiv/operators.hpp"

namespace mrsubdiv {

/// Coarse signal v^0 and prediction errors d^1..d^L (details[k-1] = d^k),
/// each detail kept at full fine-level length.
struct Pyramid {
    Signal coarse;
    std::vector<Signal> details;

    int levels() const { return static_cast<int>(details.size()); }
};

/// v^{k-1} = D v^k, d^k = v^k - P v^{k-1}, for k = L..1.
inline Pyramid decompose(const Scheme& s, const Signal& v, int levels, Index margin = -1) {
    if (levels < 1) throw InputError("decompose needs at least one level");
    Pyramid p;
    p.details.resize(static_cast<std::size_t>(levels));
    Signal fine = v;
    for (int k = levels; k >= 1; --k) {
        Signal coarse = decimate(s, fine, margin);
        p.details[static_cast<std::size_t>(k - 1)] = fine - predict(s, coarse);
        fine = std::move(coarse);
    }
    p.coarse = std::move(fine);
    return p;
}

/// v^k = P v^{k-1} + d^k.
inline Signal reconstruct(const Scheme& s, const Pyramid& p) {
    Signal v = p.coarse;
    for (const Signal& d : p.details) v = predict(s, v) + d;
    return v;
}

struct ThresholdResult {
    Pyramid pruned;
    double kept_fraction = 1.0;
};

/// Zeroes detail entries with |d| < eps. kept_fraction is the ratio of
/// nonzero detail entries after to before (1 when there were none).
inline ThresholdResult threshold(const Pyramid& p, double eps) {
    if (!(eps >= 0.0)) throw InputError("threshold eps must be >= 0");
    ThresholdResult r;
    r.pruned.coarse = p.coarse;
    Index before = 0, after = 0;
    for (const Signal& d : p.details) {
        std::vector<double> vals(d.values().begin(), d.values().end());
        for (double& x : vals) {
            if (x != 0.0) ++before;
            if (std::abs(x) < eps) x = 0.0;
            if (x != 0.0) ++after;
        }
        r.pruned.details.emplace_back(d.offset(), std::move(vals));
    }
    r.kept_fraction = before == 0 ? 1.0 : static_cast<double>(after) / static_cast<double>(before);
    return r;
}

} // namespace mrsubdiv
