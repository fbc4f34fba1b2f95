#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fspca/error.hpp"
#include "fspca/estimate.hpp"
#include "fspca/matrix.hpp"
#include "fspca/rng.hpp"
#include "fspca/support.hpp"

namespace fspca {

// Solvers for the row-sparse principal subspace problem
//
//     max Tr(W' A W)   s.t.  W'W = I_m,  at most k nonzero rows of W,
//
// with A a d x d PSD matrix and m <= k <= d.  Two strategies are provided:
//
//   go   -- non-iterative: sort diag(A), keep the k largest, eigendecompose
//           the selected principal submatrix.  Globally optimal whenever
//           rank(A) <= m; otherwise a heuristic that go_lowrank_init turns
//           into a (1 - eps)-approximation by truncating A to rank m first.
//
//   ipu  -- iterative proxy update for general A: build the rank-<=m PSD
//           proxy P = A W (W'AW)^+ W'A, re-select the support from diag(P),
//           then refine the block as eigenvectors of the selected submatrix
//           of A.  Every step increases the objective, so the iteration
//           converges; only diag(P) is ever formed, never P itself.

struct SolverConfig {
    int m = 1;
    int k = 1;
    double ridge_eps = 0.1;       // solver works on A + ridge_eps * I
    int max_iter = 100;
    double objective_tol = 1e-10; // plateau safeguard, relative
    double pinv_rel_tol = 1e-12;
    std::uint64_t seed = 0;

    void validate(int d) const {
        if (!(1 <= m && m <= k && k <= d))
            throw input_error("config: need 1 <= m <= k <= d, got m=" + std::to_string(m) +
                              " k=" + std::to_string(k) + " d=" + std::to_string(d));
        if (ridge_eps < 0.0) throw input_error("config: ridge_eps must be >= 0");
        if (max_iter < 1) throw input_error("config: max_iter must be >= 1");
    }
};

enum class ConvergedBy { support_repeat, objective_plateau, max_iter };

inline const char* to_string(ConvergedBy c) {
    switch (c) {
        case ConvergedBy::support_repeat: return "support_repeat";
        case ConvergedBy::objective_plateau: return "objective_plateau";
        case ConvergedBy::max_iter: return "max_iter";
    }
    return "?";
}

/// Result of an iterative solve.  objective_trace holds Tr(W_t' A W_t) for the
/// initial estimate and every iterate, always on the matrix the caller passed
/// in (never the ridged working copy); it is nondecreasing.
struct SolveReport {
    SubspaceEstimate estimate;
    std::vector<double> objective_trace;
    std::vector<SupportIndices> support_history;
    int iterations = 0;
    ConvergedBy converged_by = ConvergedBy::max_iter;
};

namespace detail {

/// Indices of the k largest entries (stable: equal values keep the lower
/// index first), returned sorted ascending.
inline std::vector<int> select_top_k(const Eigen::VectorXd& values, int k) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return values(i) > values(j); });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace detail

/// Top-m eigenvectors of A_{I,I} placed on the given support; the best block
/// for a fixed support.
inline SubspaceEstimate refine_eigenvectors(const SymMat& a, const SupportIndices& support,
                                            int m) {
    if (m < 1 || m > support.k())
        throw input_error("refine_eigenvectors: need 1 <= m <= k");
    const EigPair top = sym_eig(principal_submatrix(a, support), m);
    return SubspaceEstimate(support, top.vectors);
}

/// Sort diag(A) descending, keep the k largest entries as the support, and
/// eigendecompose the selected principal submatrix.  The objective achieved is
/// the sum of the m leading eigenvalues of A_{I,I}; when rank(A) <= m this is
/// the global optimum of the sparse subspace problem.
inline SubspaceEstimate go(const SymMat& a, int m, int k) {
    const int d = a.dim();
    if (!(1 <= m && m <= k && k <= d))
        throw input_error("go: need 1 <= m <= k <= d");
    const std::vector<int> picked = detail::select_top_k(a.diag(), k);
    return refine_eigenvectors(a, SupportIndices(picked, d), m);
}

/// go applied to the best rank-m approximation of a.  Serves both as the
/// low-rank-approximation initializer and as a standalone approximate solver
/// whose objective on the original a is within a factor 1 - min{dG1/k, dG2/m}
/// of the optimum.
inline SubspaceEstimate go_lowrank_init(const SymMat& a, int m, int k) {
    return go(best_rank_m(a, m), m, k);
}

/// diag(P) for the proxy P = A W (W'AW)^+ W'A, computed without materializing
/// P: with B = A W and M = (W'AW)^+, entry i is row_i(B M) . row_i(B).
/// Cost O(dkm + dm^2).
inline Eigen::VectorXd proxy_diag(const SymMat& a, const SubspaceEstimate& w,
                                  double pinv_rel_tol = 1e-12) {
    if (w.d() != a.dim()) throw input_error("proxy_diag: dimension mismatch");
    const Eigen::MatrixXd b =
        detail::gather_columns(a.mat(), w.support().indices()) * w.block();  // d x m
    const Eigen::MatrixXd gram =
        detail::gather_submatrix(a.mat(), w.support().indices());
    const SymMat waw(Eigen::MatrixXd(w.block().transpose() * gram * w.block()));
    const SymMat m_inv = pinv_psd(waw, pinv_rel_tol);
    return ((b * m_inv.mat()).cwiseProduct(b)).rowwise().sum();
}

/// The full proxy matrix, for verification: PSD with numerical rank <= m.
inline SymMat proxy_full(const SymMat& a, const SubspaceEstimate& w,
                         double pinv_rel_tol = 1e-12) {
    if (w.d() != a.dim()) throw input_error("proxy_full: dimension mismatch");
    const Eigen::MatrixXd b =
        detail::gather_columns(a.mat(), w.support().indices()) * w.block();
    const Eigen::MatrixXd gram =
        detail::gather_submatrix(a.mat(), w.support().indices());
    const SymMat waw(Eigen::MatrixXd(w.block().transpose() * gram * w.block()));
    const SymMat m_inv = pinv_psd(waw, pinv_rel_tol);
    return SymMat(Eigen::MatrixXd(b * m_inv.mat() * b.transpose()));
}

/// Called with every estimate the iteration visits: iter 0 is the initial
/// estimate, iter t >= 1 the t-th update.
using IterateObserver = std::function<void(int iter, const SubspaceEstimate&)>;

/// Iterative proxy update.  Works on A + ridge_eps * I internally (which
/// keeps W'AW invertible without moving the optimizer); every reported
/// objective is Tr(W' A W) on the unridged input.  Stops when the support
/// repeats, when the objective gain falls below objective_tol (supports can
/// in principle cycle between equal-objective sets), or at max_iter.
inline SolveReport ipu(const SymMat& a, const SolverConfig& cfg, const SubspaceEstimate& w0,
                       const IterateObserver& observer = {}) {
    const int d = a.dim();
    cfg.validate(d);
    if (w0.d() != d || w0.m() != cfg.m || w0.k() != cfg.k)
        throw input_error("ipu: initial estimate does not match (d, m, k)");

    const SymMat working = cfg.ridge_eps > 0.0 ? a.add_ridge(cfg.ridge_eps) : a;

    SolveReport report{w0, {}, {}, 0, ConvergedBy::max_iter};
    report.objective_trace.push_back(objective_value(a, w0));
    report.support_history.push_back(w0.support());
    if (observer) observer(0, report.estimate);

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const Eigen::VectorXd diag = proxy_diag(working, report.estimate, cfg.pinv_rel_tol);
        SupportIndices next_support(detail::select_top_k(diag, cfg.k), d);
        SubspaceEstimate next = refine_eigenvectors(working, next_support, cfg.m);

        const double obj = objective_value(a, next);
        // The repeat rule compares two *selected* supports; at iter 1 the
        // previous support is the caller's initial estimate, not a selection,
        // so the plateau check below is what stops an already-converged run.
        const bool support_repeated = iter >= 2 && next_support == report.estimate.support();
        const double gain = obj - report.objective_trace.back();

        report.estimate = std::move(next);
        report.objective_trace.push_back(obj);
        report.support_history.push_back(std::move(next_support));
        report.iterations = iter;
        if (observer) observer(iter, report.estimate);

        if (support_repeated) {
            report.converged_by = ConvergedBy::support_repeat;
            return report;
        }
        if (gain < cfg.objective_tol * std::max(1.0, std::abs(obj))) {
            report.converged_by = ConvergedBy::objective_plateau;
            return report;
        }
    }
    report.converged_by = ConvergedBy::max_iter;
    return report;
}

/// ipu started from the low-rank-approximation initializer; inherits the
/// 1 - min{dG1/k, dG2/m} approximation bound through the ascent property.
inline SolveReport ipu_from_lowrank(const SymMat& a, const SolverConfig& cfg,
                                    const IterateObserver& observer = {}) {
    return ipu(a, cfg, go_lowrank_init(a, cfg.m, cfg.k), observer);
}

/// Uniform random support of size k plus an orthonormalized Gaussian block.
inline SubspaceEstimate random_subspace_init(int d, int m, int k, Rng& rng) {
    if (!(1 <= m && m <= k && k <= d))
        throw input_error("random_subspace_init: need 1 <= m <= k <= d");
    // Partial Fisher-Yates: first k slots are a uniform sample without
    // replacement.
    std::vector<int> pool(static_cast<std::size_t>(d));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> picked(pool.begin(), pool.begin() + k);
    std::sort(picked.begin(), picked.end());

    Eigen::MatrixXd gaussian(k, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < k; ++i) gaussian(i, j) = rng.gaussian();
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ() *
                        Eigen::MatrixXd::Identity(k, m);
    apply_sign_convention(q);
    return SubspaceEstimate(SupportIndices(std::move(picked), d), std::move(q));
}

/// MM auxiliary value g(W; W_t) = Tr(W' A W_t (W_t'AW_t)^+ W_t'A W).  It
/// minorizes Tr(W'AW) and touches it at W = W_t.
inline double mm_auxiliary(const SymMat& a, const SubspaceEstimate& w,
                           const SubspaceEstimate& w_t, double pinv_rel_tol = 1e-12) {
    if (w.d() != a.dim() || w_t.d() != a.dim())
        throw input_error("mm_auxiliary: dimension mismatch");
    if (w.m() != w_t.m()) throw input_error("mm_auxiliary: estimates disagree on m");
    const Eigen::MatrixXd dense_w = w.dense();
    const Eigen::MatrixXd dense_wt = w_t.dense();
    const Eigen::MatrixXd waw_t = dense_w.transpose() * a.mat() * dense_wt;  // m x m
    const SymMat gram(Eigen::MatrixXd(dense_wt.transpose() * a.mat() * dense_wt));
    const SymMat inv = pinv_psd(gram, pinv_rel_tol);
    return (waw_t * inv.mat() * waw_t.transpose()).trace();
}

/// Eigenvalues of Gamma = X' W (W'AW)^+ W' X with X the symmetric square root
/// of A: within numerical error they are 0 or 1, with as many ones as the
/// rank of X'W.
inline Eigen::VectorXd gram_projector_spectrum(const SymMat& a, const SubspaceEstimate& w_t,
                                               double pinv_rel_tol = 1e-12) {
    if (w_t.d() != a.dim()) throw input_error("gram_projector_spectrum: dimension mismatch");
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    detail::sym_eig_full(a.mat(), values, &vectors);
    const Eigen::VectorXd sqrt_values = values.cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd x = vectors * sqrt_values.asDiagonal() * vectors.transpose();

    const Eigen::MatrixXd xw = x * w_t.dense();  // d x m
    const SymMat gram(Eigen::MatrixXd(w_t.dense().transpose() * a.mat() * w_t.dense()));
    const SymMat inv = pinv_psd(gram, pinv_rel_tol);
    const SymMat gamma(Eigen::MatrixXd(xw * inv.mat() * xw.transpose()));
    return sym_eigenvalues(gamma);
}

}  // namespace fspca
