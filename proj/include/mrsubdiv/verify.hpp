#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mrsubdiv/mra.hpp"
#include "mrsubdiv/operators.hpp"

namespace mrsubdiv {

struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;  // measured residual or statistic
    double limit = 0.0;
};

struct VerifyOptions {
    int cascade_level = 6;
    std::uint64_t seed = 20240601;
    Index signal_length = 32;
};

namespace detail {

inline Signal random_signal(std::mt19937_64& rng, Index offset, Index length) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(length));
    for (double& x : v) x = unif(rng);
    return Signal(offset, std::move(v));
}

/// Dense section of P with rows on `fine` and columns on `coarse`.
inline Eigen::MatrixXd dense_prediction(const Mask& a, Window coarse, Window fine) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(fine.size(), coarse.size());
    for (Index i = fine.lo; i <= fine.hi; ++i)
        for (Index j = coarse.lo; j <= coarse.hi; ++j) p(i - fine.lo, j - coarse.lo) = a[i - 2 * j];
    return p;
}

inline Check make_check(std::string name, double value, double limit) {
    return {std::move(name), std::isfinite(value) && value <= limit, value, limit};
}

} // namespace detail

/// Runs the invariant suite for one mask. Throws only if the scheme itself
/// cannot be built (degenerate mask, indefinite Gramian).
inline std::vector<Check> verify_scheme(const Mask& mask, const VerifyOptions& opt = {}) {
    std::vector<Check> out;
    std::mt19937_64 rng(opt.seed);
    const int level = opt.cascade_level;

    // refinable function
    const Signal ints = integer_values(mask);
    double int_sum = 0.0;
    for (double x : ints.values()) int_sum += x;
    out.push_back(detail::make_check("integer values sum to one", std::abs(int_sum - 1.0), 1e-12));

    const DyadicSamples phi = refine_to_level(mask, level);
    out.push_back(detail::make_check("refinement residual", refinement_residual(mask, phi), 1e-10));
    out.push_back(detail::make_check("partition of unity", partition_residual(phi), 1e-10));
    out.push_back(detail::make_check("unit integral (level 8)",
                                     std::abs(integral_estimate(refine_to_level(mask, 8)) - 1.0), 1e-3));
    {
        const DyadicSamples coarser = refine_to_level(mask, level - 1);
        double worst = 0.0;
        for (Index n = coarser.lo(); n <= coarser.hi(); ++n) worst = std::max(worst, std::abs(phi.at(2 * n) - coarser.at(n)));
        out.push_back(detail::make_check("level restriction consistency", worst, 0.0));
    }

    // Gramian
    const Scheme s(mask);
    const GramianSequence& eta = s.eta();
    out.push_back(detail::make_check("gramian unit sum", std::abs(eta.total() - 1.0), 1e-10));
    out.push_back(detail::make_check("gramian eigen residual", gramian_eigen_residual(mask, eta), 1e-12));
    {
        const GramianSequence quad = gramian_quadrature(mask, 10);
        double worst = 0.0;
        for (Index i = 0; i <= eta.radius(); ++i) worst = std::max(worst, std::abs(eta[i] - quad[i]));
        out.push_back(detail::make_check("gramian eigen vs quadrature", worst, 1e-4));
    }
    out.push_back({"gramian symbol positive", s.eta_riesz().ok, s.eta_riesz().min_symbol, 0.0});
    {
        const BandedToeplitz t = assemble(eta, {-24, 24});
        const Signal rhs = detail::random_signal(rng, -24, 49);
        const Signal u = solve_spd(t, rhs);
        const Eigen::MatrixXd dense = t.dense();
        const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.values().data(), rhs.size());
        const Eigen::VectorXd ref = dense.partialPivLu().solve(b);
        double worst = 0.0;
        for (Index i = 0; i < rhs.size(); ++i) worst = std::max(worst, std::abs(u[i - 24] - ref(i)));
        out.push_back(detail::make_check("banded solve vs dense solve", worst, 1e-10));
    }

    // operators
    const Index len = opt.signal_length;
    {
        const Signal v = detail::random_signal(rng, 0, len);
        out.push_back(detail::make_check("consistency D P = I", max_abs_diff(decimate(s, predict(s, v)), v, v.support()), 1e-8));
    }
    const Signal w = detail::random_signal(rng, 0, 2 * len);
    const Signal dw = decimate(s, w);
    const Signal resid = w - predict(s, dw);
    {
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        const double best = norm_h(s, resid, 1);
        double worst = -1e300;
        for (int t = 0; t < 100; ++t) {
            const Signal v = dw + unif(rng) * detail::random_signal(rng, dw.lo(), dw.size());
            worst = std::max(worst, best - norm_h(s, w - predict(s, v), 1));
        }
        out.push_back(detail::make_check("projection optimality", std::max(worst, 0.0), 1e-10));
    }
    {
        const Window interior = dw.support().shrunk(s.interior_inset());
        double worst = 0.0;
        for (Index n = interior.lo; n <= interior.hi; ++n)
            worst = std::max(worst, std::abs(inner_product_h(s, resid, predict(s, Signal::delta(n)), 1)));
        out.push_back(detail::make_check("orthogonality of decimation residual", worst, 1e-8));
    }
    {
        const Window coarse{-8, 7};
        const Window fine{2 * coarse.lo + mask.lo() - eta.radius(), 2 * coarse.hi + mask.hi() + eta.radius()};
        const Eigen::MatrixXd p = detail::dense_prediction(mask, coarse, fine);
        const Eigen::MatrixXd g = p.transpose() * assemble(eta, fine).dense() * p;
        double worst = 0.0;
        for (Index m = 0; m < g.rows(); ++m)
            for (Index n = 0; n < g.cols(); ++n) worst = std::max(worst, std::abs(g(m, n) - s.coarse_gram()[m - n]));
        out.push_back(detail::make_check("coarse Gram is Toeplitz", worst, 1e-12));
    }
    {
        const Signal v = detail::random_signal(rng, -3, 8);
        const DyadicSamples r0 = reconstruct_eval(s, v, 1, 8);
        const DyadicSamples r1 = reconstruct_eval(s, predict(s, v), 2, 8);
        double worst = 0.0;
        for (Index n = std::min(r0.lo(), r1.lo()); n <= std::max(r0.hi(), r1.hi()); ++n)
            worst = std::max(worst, std::abs(r0.at(n) - r1.at(n)));
        out.push_back(detail::make_check("hierarchical reconstruction", worst, 1e-12));
    }
    {
        const Signal u = detail::random_signal(rng, 0, 2 * len);
        const double alpha = 0.75, beta = -1.25;
        const Signal lhs = decimate(s, combine(alpha, u, beta, w));
        const Signal rhs = combine(alpha, decimate(s, u), beta, dw);
        double worst = max_abs_diff(lhs, rhs);
        worst = std::max(worst, max_abs_diff(predict(s, combine(alpha, u, beta, w)),
                                             combine(alpha, predict(s, u), beta, predict(s, w))));
        out.push_back(detail::make_check("linearity", worst, 1e-10));
    }
    {
        // f = w - P D w lies in the H-orthogonal complement of the coarse space;
        // decimating it once or twice must give zero.
        const Signal once = decimate(s, resid);
        const Signal twice = decimate(s, once);
        out.push_back(detail::make_check("nested decimation", std::max(once.max_abs(), twice.max_abs()), 1e-7));
    }
    if (mask == Mask::step()) {
        double worst = 0.0;
        for (Index n = 0; n < len; ++n) worst = std::max(worst, std::abs(dw[n] - 0.5 * (w[2 * n] + w[2 * n + 1])));
        out.push_back(detail::make_check("decimation = pairwise mean", worst, 1e-12));
    }

    // multiresolution
    {
        const Signal v = detail::random_signal(rng, 0, 4 * len);
        const Pyramid p = decompose(s, v, 4);
        out.push_back(detail::make_check("perfect reconstruction", max_abs_diff(reconstruct(s, p), v, v.support()), 1e-7));

        Signal smooth = detail::random_signal(rng, 0, 6);
        for (int k = 0; k < 3; ++k) smooth = predict(s, smooth);
        const Pyramid q = decompose(s, smooth, 3);
        double worst = 0.0;
        for (const Signal& d : q.details) worst = std::max(worst, d.max_abs());
        out.push_back(detail::make_check("details vanish on predicted data", worst, 1e-7));

        double previous = -1.0, violation = 0.0;
        for (double eps : {0.0, 1e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0}) {
            const double err = max_abs_diff(reconstruct(s, threshold(p, eps).pruned), v);
            violation = std::max(violation, previous - err);
            previous = err;
        }
        out.push_back(detail::make_check("threshold error monotone in eps", std::max(violation, 0.0), 0.0));
    }
    return out;
}

} // namespace mrsubdiv
