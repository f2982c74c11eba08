#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mrsubdiv/operators.hpp"
#include "oracles.hpp"

using namespace mrsubdiv;

namespace {

const std::vector<Mask>& shipped() {
    static const std::vector<Mask> masks = {Mask::step(), Mask::hat(), Mask::chaikin(), Mask::cubic_bspline()};
    return masks;
}

Signal random_signal(std::mt19937_64& rng, Index offset, Index n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = unif(rng);
    return Signal(offset, std::move(v));
}

oracle::Seq as_seq(const Mask& m) { return oracle::seq(m.offset(), {m.coeffs().begin(), m.coeffs().end()}); }

oracle::Seq as_seq(const SymmetricStencil& s) {
    oracle::Seq out;
    for (Index i = -s.radius(); i <= s.radius(); ++i) out[i] = s[i];
    return out;
}

/// argmin_u ||w - P u||_E over u supported on `coarse`, by dense normal equations.
Eigen::VectorXd dense_least_squares(const Mask& a, const SymmetricStencil& eta, Window coarse, const Signal& w) {
    const Index fine_lo = std::min(2 * coarse.lo + a.lo(), w.lo()) - eta.radius();
    const Index fine_hi = std::max(2 * coarse.hi + a.hi(), w.hi()) + eta.radius();
    const Index nf = fine_hi - fine_lo + 1;
    const Eigen::MatrixXd p = oracle::prediction_matrix(as_seq(a), coarse.lo, coarse.size(), fine_lo, nf);
    const Eigen::MatrixXd e = oracle::toeplitz(as_seq(eta), nf);
    Eigen::VectorXd wv(nf);
    for (Index i = 0; i < nf; ++i) wv(i) = w[fine_lo + i];
    return (p.transpose() * e * p).partialPivLu().solve(p.transpose() * e * wv);
}

} // namespace

TEST(Operators, PredictExamples) {
    const Scheme step(Mask::step());
    const Signal pv = predict(step, Signal(0, {3.0, 5.0}));
    EXPECT_EQ(pv.lo(), 0);
    EXPECT_EQ(pv.hi(), 3);
    EXPECT_EQ(pv[0], 3.0);
    EXPECT_EQ(pv[1], 3.0);
    EXPECT_EQ(pv[2], 5.0);
    EXPECT_EQ(pv[3], 5.0);

    const Scheme hat(Mask::hat());
    EXPECT_EQ(predict(hat, Signal::zeros({-2, 2})).max_abs(), 0.0);
    const Signal col = predict(hat, Signal::delta(0));
    EXPECT_EQ(col[-1], 0.5);
    EXPECT_EQ(col[0], 1.0);
    EXPECT_EQ(col[1], 0.5);
}

TEST(Operators, CoarseGramStep) {
    const Scheme s(Mask::step());
    EXPECT_EQ(coarse_gram(s).radius(), 0);
    EXPECT_NEAR(coarse_gram(s)[0], 2.0, 1e-12);
}

TEST(Operators, CoarseGramMatchesTripleSum) {
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const oracle::Seq a = as_seq(m);
        const oracle::Seq eta = as_seq(s.eta());
        for (Index p = -6; p <= 6; ++p) {
            double g = 0.0;
            for (const auto& [i, ai] : a)
                for (const auto& [j, aj] : a)
                    for (const auto& [e, ee] : eta)
                        if (i + 2 * p - j == e) g += ai * ee * aj;  // a_{i'-2p} eta_{i'-j} a_j with i' = i + 2p
            EXPECT_NEAR(coarse_gram(s)[p], g, 1e-14) << "p=" << p;
        }
    }
}

TEST(OperatorsProperty, NormalMatrixIsToeplitzAndMatchesStencil) {
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Window coarse{-8, 7};
        const Index fine_lo = 2 * coarse.lo + m.lo() - 4, fine_hi = 2 * coarse.hi + m.hi() + 4;
        const Index nf = fine_hi - fine_lo + 1;
        const Eigen::MatrixXd p = oracle::prediction_matrix(as_seq(m), coarse.lo, 16, fine_lo, nf);
        const Eigen::MatrixXd g = p.transpose() * oracle::toeplitz(as_seq(s.eta()), nf) * p;
        double toeplitz_dev = 0.0, stencil_dev = 0.0;
        for (Index r = 0; r < 16; ++r)
            for (Index c = 0; c < 16; ++c) {
                const double first = r >= c ? g(r - c, 0) : g(0, c - r);
                toeplitz_dev = std::max(toeplitz_dev, std::abs(g(r, c) - first));
                stencil_dev = std::max(stencil_dev, std::abs(g(r, c) - coarse_gram(s)[r - c]));
            }
        EXPECT_LE(toeplitz_dev, 1e-12);
        EXPECT_LE(stencil_dev, 1e-12);
    }
}

TEST(Operators, RhsCoarse) {
    const Scheme step(Mask::step());
    const Signal w(0, {1.0, 3.0, 10.0, 20.0});
    const Signal b = rhs_coarse(step, w);
    EXPECT_NEAR(b[0], 4.0, 1e-14);
    EXPECT_NEAR(b[1], 30.0, 1e-14);
    EXPECT_EQ(b[2], 0.0);
    EXPECT_TRUE(rhs_coarse(step, Signal{}).empty());

    const Scheme hat(Mask::hat());
    const Signal bh = rhs_coarse(hat, Signal::delta(0));
    const oracle::Seq a = as_seq(hat.mask());
    const oracle::Seq eta = as_seq(hat.eta());
    for (Index n = -3; n <= 3; ++n) {
        double ref = 0.0;
        for (Index i = -10; i <= 10; ++i) ref += oracle::get(a, i - 2 * n) * oracle::get(eta, i);  // w = delta^0
        EXPECT_NEAR(bh[n], ref, 1e-14) << n;
    }
}

TEST(Operators, DecimateStepClosedForm) {
    const Scheme s(Mask::step());
    const Signal u = decimate(s, Signal(0, {1.0, 3.0, 10.0, 20.0}));
    EXPECT_NEAR(u[0], 2.0, 1e-14);
    EXPECT_NEAR(u[1], 15.0, 1e-14);
    EXPECT_EQ(u.trimmed().support(), (Window{0, 1}));
}

TEST(Operators, DecimateHatMatchesDenseLeastSquares) {
    const Scheme s(Mask::hat());
    const Signal w = Signal::delta(0);
    const Signal u = decimate(s, w, 16);
    ASSERT_EQ(u.support(), (Window{-16, 16}));
    const Eigen::VectorXd ref = dense_least_squares(s.mask(), s.eta(), {-16, 16}, w);
    for (Index n = -16; n <= 16; ++n) EXPECT_NEAR(u[n], ref(n + 16), 1e-9) << n;
}

TEST(Operators, DecimateWindowTooSmall) {
    const Scheme s(Mask::chaikin());
    EXPECT_THROW(decimate(s, Signal::delta(0), 3), WindowTooSmall);
    EXPECT_NO_THROW(decimate(s, Signal::delta(0), 4));
}

TEST(Operators, DecimateRandomMatchesDenseOracle) {
    std::mt19937_64 rng(5);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal w = random_signal(rng, -7, 30);
        const Signal u = decimate(s, w);
        const Eigen::VectorXd ref = dense_least_squares(m, s.eta(), u.support(), w);
        for (Index n = u.lo(); n <= u.hi(); ++n) EXPECT_NEAR(u[n], ref(n - u.lo()), 1e-9);
        // normal equations on the window
        const Signal normal = assemble(s.coarse_gram(), u.support()).apply(u) - rhs_coarse(s, w).on(u.support());
        EXPECT_LE(normal.max_abs(), 1e-10);
    }
}

TEST(OperatorsProperty, DecimationIsLeftInverseOfPrediction) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        for (const Mask& m : shipped()) {
            const Scheme s(m);
            const Signal v = random_signal(rng, -5 + trial, 1 + 3 * trial);
            const Signal u = decimate(s, predict(s, v));
            EXPECT_LE(max_abs_diff(u, v, v.support()), 1e-8);
        }
    }
}

TEST(OperatorsProperty, ProjectionOptimality) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal w = random_signal(rng, 0, 40);
        const Signal u = decimate(s, w);
        const double best = norm_h(s, w - predict(s, u), 1);
        for (int t = 0; t < 100; ++t) {
            const Signal v = u + unif(rng) * random_signal(rng, u.lo(), u.size());
            EXPECT_LE(best, norm_h(s, w - predict(s, v), 1) + 1e-10);
        }
    }
}

TEST(OperatorsProperty, ResidualIsOrthogonalToPredictionRange) {
    std::mt19937_64 rng(8);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal w = random_signal(rng, 3, 40);
        const Signal u = decimate(s, w);
        const Signal r = w - predict(s, u);
        const Window interior = u.support().shrunk(s.interior_inset());
        for (Index n = interior.lo; n <= interior.hi; ++n)
            EXPECT_LE(std::abs(inner_product_h(s, r, predict(s, Signal::delta(n)), 1)), 1e-8);
    }
}

TEST(OperatorsProperty, Linearity) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal u = random_signal(rng, 0, 24), v = random_signal(rng, 0, 24);
        const double al = unif(rng), be = unif(rng);
        const Signal uv = combine(al, u, be, v);
        EXPECT_LE(max_abs_diff(decimate(s, uv), combine(al, decimate(s, u), be, decimate(s, v))), 1e-10);
        EXPECT_LE(max_abs_diff(predict(s, uv), combine(al, predict(s, u), be, predict(s, v))), 1e-10);

        const DyadicSamples r = reconstruct_eval(s, uv, 0, 5);
        const DyadicSamples ru = reconstruct_eval(s, u, 0, 5), rv = reconstruct_eval(s, v, 0, 5);
        for (Index n = r.lo(); n <= r.hi(); ++n) EXPECT_NEAR(r.at(n), al * ru.at(n) + be * rv.at(n), 1e-10);

        const Window win{-4, 30};
        auto fu = [](double t) { return std::sin(t); };
        auto fv = [](double t) { return t * t / 100.0; };
        auto fuv = [&](double t) { return al * fu(t) + be * fv(t); };
        const Signal du = discretize(s, fu, 0, win), dv = discretize(s, fv, 0, win), duv = discretize(s, fuv, 0, win);
        EXPECT_LE(max_abs_diff(duv, combine(al, du, be, dv)), 1e-10);
    }
}

TEST(OperatorsProperty, NestedDecimation) {
    // f = w - P D w has zero decimation; decimating once more stays zero.
    std::mt19937_64 rng(10);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal w = random_signal(rng, 0, 48);
        const Signal f = w - predict(s, decimate(s, w));
        const Signal once = decimate(s, f);
        EXPECT_LE(once.max_abs(), 1e-9);
        EXPECT_LE(decimate(s, once).max_abs(), 1e-7);
    }
}

TEST(Operators, InnerProductH) {
    const Scheme step(Mask::step());
    EXPECT_NEAR(inner_product_h(step, Signal::delta(0), Signal::delta(0), 0), 1.0, 1e-14);
    const Scheme hat(Mask::hat());
    EXPECT_NEAR(inner_product_h(hat, Signal::delta(0), Signal::delta(0), 1), 1.0 / 3.0, 1e-12);

    std::mt19937_64 rng(12);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal v = random_signal(rng, -3, 9), w = random_signal(rng, 1, 12);
        EXPECT_NEAR(inner_product_h(s, v, w, 2), inner_product_h(s, w, v, 2), 1e-14);
        EXPECT_GT(inner_product_h(s, v, v, 0), 0.0);
    }
}

TEST(Operators, InnerProductMatchesFunctionInnerProduct) {
    // <v, w>_{k,H} = integral of R_k v * R_k w, exact quadrature on the closed-form splines.
    std::mt19937_64 rng(13);
    const Scheme s(Mask::cubic_bspline());
    const Signal v = random_signal(rng, -2, 5), w = random_signal(rng, 0, 4);
    auto rk = [](const Signal& c, double t) {
        double acc = 0.0;
        for (Index i = c.lo(); i <= c.hi(); ++i) acc += c[i] * oracle::phi_cubic(2.0 * t - static_cast<double>(i));
        return acc;
    };
    // level k = 1: substitute x = 2t; integral dt = integral dx / 2
    const double ref = 0.5 * oracle::integrate_cells([&](double x) { return rk(v, x / 2) * rk(w, x / 2); }, -4, 12);
    EXPECT_NEAR(inner_product_h(s, v, w, 1), ref, 1e-12);
}

TEST(Operators, ReconstructEval) {
    const Scheme step(Mask::step());
    const DyadicSamples box = reconstruct_eval(step, Signal::delta(0), 0, 3);
    for (Index n = box.lo(); n <= box.hi(); ++n) EXPECT_EQ(box.at(n), n < 8 ? 1.0 : 0.0);
    EXPECT_EQ(box.at(-1), 0.0);

    const Scheme hat(Mask::hat());
    EXPECT_EQ(reconstruct_eval(hat, Signal::zeros({0, 3}), 1, 4).max_abs(), 0.0);
    EXPECT_THROW(reconstruct_eval(hat, Signal::delta(0), 3, 2), InputError);

    // against the closed-form cubic B-spline
    const Scheme cubic(Mask::cubic_bspline());
    const Signal v(-1, {0.3, -1.2, 2.0, 0.7});
    const DyadicSamples r = reconstruct_eval(cubic, v, 2, 7);
    for (Index n = r.lo(); n <= r.hi(); ++n) {
        double ref = 0.0;
        for (Index i = v.lo(); i <= v.hi(); ++i) ref += v[i] * oracle::phi_cubic(4.0 * r.point(n) - static_cast<double>(i));
        EXPECT_NEAR(r.at(n), ref, 1e-12);
    }
}

TEST(OperatorsProperty, HierarchicalReconstruction) {
    std::mt19937_64 rng(14);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        for (int k = 0; k <= 2; ++k) {
            const Signal v = random_signal(rng, -4, 9);
            const DyadicSamples a = reconstruct_eval(s, v, k, 8);
            const DyadicSamples b = reconstruct_eval(s, predict(s, v), k + 1, 8);
            for (Index n = std::min(a.lo(), b.lo()); n <= std::max(a.hi(), b.hi()); ++n)
                EXPECT_NEAR(a.at(n), b.at(n), 1e-12);
        }
    }
}

TEST(Operators, DiscretizeStepIsCellAverage) {
    const Scheme s(Mask::step());
    const Signal u = discretize(s, [](double t) { return t; }, 0, {-4, 8});
    for (Index j = -4; j <= 8; ++j) EXPECT_NEAR(u[j], static_cast<double>(j) + 0.5, 1e-8);

    const Signal u1 = discretize(s, [](double t) { return t; }, 1, {0, 6});
    for (Index j = 0; j <= 6; ++j) EXPECT_NEAR(u1[j], (2.0 * static_cast<double>(j) + 1.0) / 4.0, 1e-8);
}

TEST(Operators, DiscretizeRejectsCoarseQuadrature) {
    const Scheme s(Mask::hat());
    EXPECT_THROW(discretize(s, [](double) { return 1.0; }, 0, {0, 4}, 3), QuadratureUnderResolved);
    EXPECT_THROW(discretize(s, [](double) { return 1.0; }, 0, {4, 0}), InputError);
}

TEST(Operators, DiscretizeHatReproducesConstants) {
    const Scheme s(Mask::hat());
    const Window win{-40, 40};
    const Signal u = discretize(s, [](double) { return 1.0; }, 0, win);
    // dense oracle on the same finite section
    const Signal rho = discretization_rhs(s, [](double) { return 1.0; }, 0, win);
    const Eigen::VectorXd ref = oracle::toeplitz(as_seq(s.eta()), win.size())
                                    .partialPivLu()
                                    .solve(Eigen::Map<const Eigen::VectorXd>(rho.values().data(), rho.size()));
    for (Index j = win.lo; j <= win.hi; ++j) EXPECT_NEAR(u[j], ref(j - win.lo), 1e-12);
    for (Index j = -20; j <= 20; ++j) EXPECT_NEAR(u[j], 1.0, 1e-10);
}

TEST(Operators, DiscretizeIsLeftInverseOfReconstruction) {
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        for (int k : {0, 2}) {
            const ReconstructedFunction f(s, Signal::delta(0), k, 12);
            const Window win{-24, 24};
            const Signal u = discretize(s, f, k, win, 11);
            EXPECT_LE(max_abs_diff(u, Signal::delta(0), win), 2e-6) << "mask size " << m.size() << " k " << k;
            const Signal rho = discretization_rhs(s, f, k, win, 11);
            EXPECT_LE((assemble(s.eta(), win).apply(u) - rho).max_abs(), 1e-10);
        }
    }
}

TEST(Operators, DecimationViaCompositionStep) {
    const Scheme s(Mask::step());
    const Signal w(0, {1.0, 3.0});
    const Signal u = decimation_via_composition(s, w, 0);
    EXPECT_NEAR(u[0], 2.0, 1e-12);
    EXPECT_NEAR(u[0], decimate(s, w)[0], 1e-12);
}

TEST(Operators, DecimationViaCompositionMatchesDecimate) {
    std::mt19937_64 rng(15);
    for (const Mask& m : shipped()) {
        const Scheme s(m);
        const Signal v = random_signal(rng, 0, 6);
        const Signal from_pv = decimation_via_composition(s, predict(s, v), 0, 10);
        EXPECT_LE(max_abs_diff(from_pv, v, v.support()), 1e-5);
    }
    const Scheme hat(Mask::hat());
    const Signal w = random_signal(rng, 0, 16);
    const Signal a = decimate(hat, w);
    const Signal b = decimation_via_composition(hat, w, 0, 10);
    EXPECT_LE(max_abs_diff(a, b), 1e-6);
}

TEST(Equivalence, IdentityPair) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
    const EquivalenceResult r = equivalence_product(id, id);
    EXPECT_TRUE(r.gram.isApprox(id, 1e-14));
    EXPECT_TRUE(r.argmin_check);
}

TEST(Equivalence, PointSamplingWithLinearInterpolation) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 9), r = Eigen::MatrixXd::Zero(9, 5);
    for (int i = 0; i < 5; ++i) {
        d(i, 2 * i) = 1.0;
        r(2 * i, i) = 1.0;
        if (i < 4) {
            r(2 * i + 1, i) = 0.5;
            r(2 * i + 1, i + 1) = 0.5;
        }
    }
    const EquivalenceResult res = equivalence_product(d, r);
    EXPECT_GT(res.min_eigenvalue, 0.0);
    EXPECT_TRUE(res.argmin_check);
    EXPECT_LE(res.argmin_residual, 1e-10);
    EXPECT_LE(res.orthogonality_residual, 1e-12);
    EXPECT_LE((res.gram - res.gram.transpose()).cwiseAbs().maxCoeff(), 0.0);

    // D f really minimizes: random competitors never do better in the new norm
    std::mt19937_64 rng(16);
    for (int t = 0; t < 50; ++t) {
        const Eigen::VectorXd f = oracle::random_vector(rng, 9);
        const Eigen::VectorXd e0 = f - r * (d * f);
        const Eigen::VectorXd e1 = f - r * (d * f + 0.1 * oracle::random_vector(rng, 5));
        EXPECT_LE(product(res.gram, e0, e0), product(res.gram, e1, e1) + 1e-12);
    }
}

TEST(Equivalence, RandomConsistentPairs) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd r(9, 5);
        for (int i = 0; i < 9; ++i) r.row(i) = oracle::random_vector(rng, 5).transpose();
        Eigen::MatrixXd b(5, 9);
        for (int i = 0; i < 5; ++i) b.row(i) = oracle::random_vector(rng, 9).transpose();
        const Eigen::MatrixXd d = (b * r).inverse() * b;  // any left inverse
        const EquivalenceResult res = equivalence_product(d, r, 100 + t);
        EXPECT_GT(res.min_eigenvalue, 0.0);
        EXPECT_TRUE(res.argmin_check);
        EXPECT_LE(res.orthogonality_residual, 1e-9);
    }
}

TEST(Equivalence, InconsistentPairThrows) {
    const Eigen::MatrixXd d = 2.0 * Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(equivalence_product(d, Eigen::MatrixXd::Identity(3, 3)), NotConsistent);
    EXPECT_THROW(equivalence_product(Eigen::MatrixXd::Identity(3, 4), Eigen::MatrixXd::Identity(3, 3)), InputError);
}

TEST(Scheme, RejectsDegenerateMasks) {
    EXPECT_THROW(Scheme(Mask(0, {1.0, 1.0, 1.0})), NoUnitEigenvector);
    EXPECT_THROW(Scheme(Mask(0, {1.0, 0.0, 0.0, 1.0})), NoUnitEigenvector);
}

TEST(Scheme, PhiRestrictionMatchesCascade) {
    const Scheme s(Mask::chaikin());
    for (int level : {0, 3, 10, 11}) {
        const DyadicSamples a = s.phi(level), b = refine_to_level(s.mask(), level);
        ASSERT_EQ(a.lo(), b.lo());
        ASSERT_EQ(a.size(), b.size());
        for (Index n = a.lo(); n <= a.hi(); ++n) EXPECT_EQ(a.at(n), b.at(n));
    }
}
