#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mrsubdiv/cascade.hpp"
#include "mrsubdiv/gramian.hpp"
#include "mrsubdiv/mask.hpp"

namespace mrsubdiv {

struct SchemeOptions {
    int phi_level = 10;           // cached cascade resolution
    Index riesz_samples = 2048;
    double riesz_tol = 1e-12;
};

/// A subdivision mask together with everything the Harten operators built on
/// it need: its Gramian, the coarse Gram stencil of P^T E P, and cached
/// cascade samples of phi. Immutable after construction.
class Scheme {
public:
    explicit Scheme(Mask mask, SchemeOptions opts = {})
        : mask_(std::move(mask)), opts_(opts), eta_(gramian_eigen(mask_)) {
        eta_riesz_ = riesz_check(eta_, std::max(opts_.riesz_samples, 2 * eta_.radius() + 1), opts_.riesz_tol);
        if (!eta_riesz_.ok)
            throw NotPositiveDefinite("Gramian symbol is not positive (min " + std::to_string(eta_riesz_.min_symbol) +
                                      ")");
        gram_ = compute_coarse_gram();
        gram_riesz_ = riesz_check(gram_, std::max(opts_.riesz_samples, 2 * gram_.radius() + 1), opts_.riesz_tol);
        phi_ = refine_to_level(mask_, opts_.phi_level);
    }

    const Mask& mask() const { return mask_; }
    const SchemeOptions& options() const { return opts_; }
    const GramianSequence& eta() const { return eta_; }
    const SymmetricStencil& coarse_gram() const { return gram_; }
    const RieszReport& eta_riesz() const { return eta_riesz_; }
    const RieszReport& coarse_gram_riesz() const { return gram_riesz_; }

    Index default_margin() const { return 4 * (mask_.size() + eta_.radius()); }
    /// Distance from a window end beyond which finite-section effects are negligible.
    Index interior_inset() const { return mask_.size() + eta_.radius(); }

    /// phi sampled at the given level. Coarser levels are exact restrictions of
    /// the cached one.
    DyadicSamples phi(int level) const {
        if (level > phi_.level) return refine_to_level(mask_, level);
        if (level == phi_.level) return phi_;
        const Index step = Index{1} << (phi_.level - level);
        DyadicSamples out{level, mask_.lo() * (Index{1} << level), {}};
        for (Index n = out.offset; n <= mask_.hi() * (Index{1} << level); ++n) out.values.push_back(phi_.at(n * step));
        return out;
    }

private:
    // g_p = sum_{i,j} a_{i-2p} eta_{i-j} a_j
    SymmetricStencil compute_coarse_gram() const {
        const Signal ea = convolve(eta_.as_signal(), mask_.as_signal());
        const Signal g = downsample_correlate(mask_, ea);
        Index radius = std::max(-g.lo(), g.hi());
        std::vector<double> half(static_cast<std::size_t>(radius + 1));
        for (Index p = 0; p <= radius; ++p) half[static_cast<std::size_t>(p)] = 0.5 * (g[p] + g[-p]);
        while (half.size() > 1 && half.back() == 0.0) half.pop_back();
        return SymmetricStencil(std::move(half));
    }

    Mask mask_;
    SchemeOptions opts_;
    GramianSequence eta_;
    RieszReport eta_riesz_;
    SymmetricStencil gram_;
    RieszReport gram_riesz_;
    DyadicSamples phi_;
};

inline Signal predict(const Scheme& s, const Signal& v) { return upsample_convolve(s.mask(), v); }

inline const SymmetricStencil& coarse_gram(const Scheme& s) { return s.coarse_gram(); }

/// (P^T E w)_n = sum_{i,j} a_{i-2n} eta_{i-j} w_j.
inline Signal rhs_coarse(const Scheme& s, const Signal& w) {
    return downsample_correlate(s.mask(), convolve(s.eta().as_signal(), w));
}

/// Coarse indices n whose prediction column P delta^n overlaps w.
inline Window coarse_footprint(const Scheme& s, Window fine) {
    return {ceil_div(fine.lo - s.mask().hi(), 2), floor_div(fine.hi - s.mask().lo(), 2)};
}

/// The coarse window a decimation of w is solved on.
inline Window decimation_window(const Scheme& s, const Signal& w, Index margin = -1) {
    if (margin < 0) margin = s.default_margin();
    if (margin < s.mask().size())
        throw WindowTooSmall("margin " + std::to_string(margin) + " is smaller than the mask length " +
                             std::to_string(s.mask().size()));
    return coarse_footprint(s, w.support()).expanded(margin);
}

/// Least-squares decimation: argmin_u ||w - P u|| in the level-(k+1) H norm,
/// from the coarse normal equations (P^T E P) u = P^T E w on a finite section.
inline Signal decimate(const Scheme& s, const Signal& w, Index margin = -1) {
    const Window win = decimation_window(s, w, margin);
    if (w.empty()) return {};
    if (!s.coarse_gram_riesz().ok)
        throw NotPositiveDefinite("coarse Gram symbol is not positive; prediction is not injective");
    return solve_spd(assemble(s.coarse_gram(), win), rhs_coarse(s, w).on(win));
}

/// <v, w>_{k,H} = 2^{-k} v^T E w.
inline double inner_product_h(const Scheme& s, const Signal& v, const Signal& w, int k) {
    const Signal ew = convolve(s.eta().as_signal(), w);
    double acc = 0.0;
    for (Index i = v.lo(); i <= v.hi(); ++i) acc += v[i] * ew[i];
    return std::ldexp(acc, -k);
}

inline double norm_h(const Scheme& s, const Signal& v, int k) { return std::sqrt(inner_product_h(s, v, v, k)); }

/// Samples of sum_i v_i phi(2^k t - i) on 2^{-level} Z.
inline DyadicSamples reconstruct_eval(const Scheme& s, const Signal& v, int k, int level) {
    if (level < k) throw InputError("reconstruct_eval: level must be >= k");
    if (v.empty()) return {level, 0, {}};
    const int q = level - k;
    const DyadicSamples phi = s.phi(q);
    const Index stride = Index{1} << q;
    DyadicSamples out{level, (v.lo() + s.mask().lo()) * stride, {}};
    const Index last = (v.hi() + s.mask().hi()) * stride;
    out.values.assign(static_cast<std::size_t>(last - out.offset + 1), 0.0);
    for (Index i = v.lo(); i <= v.hi(); ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (Index m = phi.lo(); m <= phi.hi(); ++m)
            out.values[static_cast<std::size_t>(m + i * stride - out.offset)] += vi * phi.at(m);
    }
    return out;
}

/// t -> sum_i v_i phi(2^k t - i), evaluated from cascade samples of phi.
class ReconstructedFunction {
public:
    ReconstructedFunction(const Scheme& s, Signal v, int k, int phi_level)
        : v_(std::move(v)), k_(k), phi_(s.phi(phi_level)), lo_(s.mask().lo()), hi_(s.mask().hi()) {}

    double operator()(double t) const {
        if (v_.empty()) return 0.0;
        const double x = std::ldexp(t, k_);
        const Index i_lo = std::max(v_.lo(), static_cast<Index>(std::ceil(x - static_cast<double>(hi_))));
        const Index i_hi = std::min(v_.hi(), static_cast<Index>(std::floor(x - static_cast<double>(lo_))));
        double acc = 0.0;
        for (Index i = i_lo; i <= i_hi; ++i) acc += v_[i] * phi_.value_at(x - static_cast<double>(i));
        return acc;
    }

private:
    Signal v_;
    int k_;
    DyadicSamples phi_;
    Index lo_, hi_;
};

/// rho_j = 2^k integral phi(2^k t - j) f(t) dt for j in the window, by the
/// composite midpoint rule on the 2^{-(k + quad_level)} grid.
template <class F>
Signal discretization_rhs(const Scheme& s, const F& f, int k, Window window, int quad_level = 8) {
    if (quad_level < 4) throw QuadratureUnderResolved("quadrature level must be >= 4");
    if (window.empty()) throw InputError("discretize: empty window");
    const DyadicSamples phi = s.phi(quad_level + 1);
    const double h = std::ldexp(1.0, -quad_level);
    const Index m_lo = s.mask().lo() * (Index{1} << quad_level);
    const Index m_hi = s.mask().hi() * (Index{1} << quad_level) - 1;
    std::vector<double> rho(static_cast<std::size_t>(window.size()), 0.0);
    for (Index j = window.lo; j <= window.hi; ++j) {
        double acc = 0.0;
        for (Index m = m_lo; m <= m_hi; ++m) {
            const Index mid = 2 * m + 1;
            const double x = phi.point(mid);
            const double p = phi.at(mid);
            if (p != 0.0) acc += p * f(std::ldexp(x + static_cast<double>(j), -k));
        }
        rho[static_cast<std::size_t>(j - window.lo)] = acc * h;
    }
    return Signal(window.lo, std::move(rho));
}

/// Least-squares discretization of f at level k: solves E u = rho on the window.
template <class F>
Signal discretize(const Scheme& s, const F& f, int k, Window window, int quad_level = 8) {
    return solve_spd(assemble(s.eta(), window), discretization_rhs(s, f, k, window, quad_level));
}

/// Decimation computed as discretize(reconstruct(w, k+1), k). Cross-check
/// path only; subject to quadrature error.
inline Signal decimation_via_composition(const Scheme& s, const Signal& w, int k, int quad_level = 8,
                                         Index margin = -1) {
    const Window win = decimation_window(s, w, margin);
    if (w.empty()) return {};
    const ReconstructedFunction f(s, w, k + 1, quad_level);
    return discretize(s, f, k, win, quad_level);
}

struct EquivalenceResult {
    Eigen::MatrixXd gram;
    double min_eigenvalue = 0.0;
    double argmin_residual = 0.0;
    double orthogonality_residual = 0.0;
    bool argmin_check = false;
};

/// <<f, g>> = f^T gram g.
inline double product(const Eigen::MatrixXd& gram, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    return f.dot(gram * g);
}

/// For a consistent pair (D R = I) on finite-dimensional spaces, builds the
/// Gram matrix of <<f, g>> = <W f, W g> + <R D f, R D g> with W = I - R D and
/// checks that D f solves min_v |||f - R v||| for random f.
inline EquivalenceResult equivalence_product(const Eigen::MatrixXd& d, const Eigen::MatrixXd& r,
                                             std::uint64_t seed = 7, int trials = 16) {
    if (d.cols() != r.rows() || d.rows() != r.cols())
        throw InputError("equivalence_product: D must be n x m and R m x n");
    const Eigen::Index n = d.rows();
    const Eigen::Index m = d.cols();
    const double consistency = (d * r - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (consistency > 1e-10)
        throw NotConsistent("D R differs from the identity by " + std::to_string(consistency));

    const Eigen::MatrixXd rd = r * d;
    const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(m, m) - rd;
    EquivalenceResult out;
    out.gram = w.transpose() * w + rd.transpose() * rd;
    out.gram = 0.5 * (out.gram + out.gram.transpose());
    out.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(out.gram).eigenvalues().minCoeff();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto random_vec = [&] {
        Eigen::VectorXd f(m);
        for (Eigen::Index i = 0; i < m; ++i) f(i) = unif(rng);
        return f;
    };
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXd f = random_vec();
        const Eigen::VectorXd g = random_vec();
        const Eigen::VectorXd normal = r.transpose() * out.gram * (f - r * (d * f));
        out.argmin_residual = std::max(out.argmin_residual, normal.cwiseAbs().maxCoeff());
        out.orthogonality_residual =
            std::max(out.orthogonality_residual, std::abs(product(out.gram, w * f, rd * g)));
    }
    out.argmin_check = out.min_eigenvalue > 0.0 && out.argmin_residual <= 1e-10;
    return out;
}

} // namespace mrsubdiv
