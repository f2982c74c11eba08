#include <gtest/gtest.h>

#include <random>

#include "mrsubdiv/stencil.hpp"

using namespace mrsubdiv;

namespace {

Signal random_signal(std::mt19937_64& rng, Index offset, Index n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = unif(rng);
    return Signal(offset, std::move(v));
}

} // namespace

TEST(Stencil, StepIsPairwiseMean) {
    const StencilReport r = stencil_extract(Scheme(Mask::step()));
    EXPECT_EQ(r.stencil.lo(), 0);
    EXPECT_EQ(r.stencil.hi(), 1);
    EXPECT_NEAR(r.stencil[0], 0.5, 1e-15);
    EXPECT_NEAR(r.stencil[1], 0.5, 1e-15);
    EXPECT_LE(r.truncation_mass, 1e-15);
}

TEST(Stencil, HatDecaysGeometrically) {
    const StencilReport r = stencil_extract(Scheme(Mask::hat()));
    // Symmetric about j = 0 for a symmetric mask centred at 0.
    EXPECT_EQ(r.stencil.lo(), -r.stencil.hi());
    for (Index j = 1; j <= r.stencil.hi(); ++j) EXPECT_NEAR(r.stencil[j], r.stencil[-j], 1e-12);
    EXPECT_GT(r.decay_ratio, 0.0);
    EXPECT_LT(r.decay_ratio, 1.0);
    double total = 0.0;
    for (double c : r.stencil.coeffs()) total += c;
    EXPECT_NEAR(total, 1.0, 1e-9);  // constants are preserved
}

TEST(StencilProperty, TruncatedStencilMatchesDecimate) {
    std::mt19937_64 rng(21);
    const double tol = 1e-12;
    for (const Mask& m : {Mask::step(), Mask::hat(), Mask::chaikin(), Mask::cubic_bspline()}) {
        const Scheme s(m);
        const StencilReport r = stencil_extract(s, tol);
        const Signal w = random_signal(rng, -20, 40);
        // Same window width the stencil was read from, so only truncation differs.
        const Signal dw = decimate(s, w, s.default_margin() + 128);
        const double bound = std::max(2.0 * tol, r.truncation_mass) * w.max_abs();
        for (Index n = dw.lo(); n <= dw.hi(); ++n)
            EXPECT_LE(std::abs(apply_stencil(r.stencil, w, n) - dw[n]), bound) << "mask size " << m.size() << " n " << n;
    }
}

TEST(Stencil, ReportsWindowTooSmall) {
    EXPECT_THROW(stencil_extract(Scheme(Mask::hat()), 1e-12, 8), WindowTooSmall);
    EXPECT_THROW(stencil_extract(Scheme(Mask::hat()), 1e-12, 1), InputError);
}
