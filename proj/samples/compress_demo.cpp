// Threshold sweep on samples of a smooth function: how many details survive
// and how the reconstruction error grows with eps.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "mrsubdiv/mrsubdiv.hpp"

int main() {
    using namespace mrsubdiv;
    const Scheme s(Mask::hat());

    std::vector<double> vals(256);
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 256.0);
    const Signal v(0, vals);
    const Pyramid p = decompose(s, v, 4);

    std::printf("%10s %10s %12s %10s\n", "eps", "kept", "max error", "error/eps");
    for (double eps : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
        const ThresholdResult t = threshold(p, eps);
        const double err = max_abs_diff(reconstruct(s, t.pruned), v, v.support());
        std::printf("%10.0e %10.4f %12.3e %10.3f\n", eps, t.kept_fraction, err, err / eps);
    }
}
