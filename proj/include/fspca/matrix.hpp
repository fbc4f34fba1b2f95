#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fspca/error.hpp"
#include "fspca/support.hpp"

namespace fspca {

/// Dense symmetric d x d matrix.  Construction validates symmetry (within
/// 1e-12 relative to the largest entry) and finiteness, then mirrors the lower
/// triangle so the stored entries are exactly symmetric.  Positive
/// semi-definiteness is a property of most matrices passing through here but
/// is checked by assert_psd, not by construction: differences like A_m - A
/// need the same type.
class SymMat {
  public:
    explicit SymMat(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw input_error("SymMat: matrix must be square and non-empty");
        double max_abs = 0.0;
        for (Eigen::Index j = 0; j < entries_.cols(); ++j)
            for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
                const double v = entries_(i, j);
                if (!std::isfinite(v))
                    throw input_error("SymMat: non-finite entry at (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
                max_abs = std::max(max_abs, std::abs(v));
            }
        const double tol = 1e-12 * std::max(1.0, max_abs);
        for (Eigen::Index j = 0; j < entries_.cols(); ++j)
            for (Eigen::Index i = j + 1; i < entries_.rows(); ++i) {
                if (std::abs(entries_(i, j) - entries_(j, i)) > tol)
                    throw input_error("SymMat: asymmetric at (" + std::to_string(j) + ", " +
                                      std::to_string(i) + "): " + std::to_string(entries_(j, i)) +
                                      " vs " + std::to_string(entries_(i, j)));
                const double avg = 0.5 * (entries_(i, j) + entries_(j, i));
                entries_(i, j) = avg;
                entries_(j, i) = avg;
            }
    }

    static SymMat identity(int d) { return SymMat(Eigen::MatrixXd::Identity(d, d)); }
    static SymMat zero(int d) { return SymMat(Eigen::MatrixXd::Zero(d, d)); }
    static SymMat diagonal(const Eigen::VectorXd& diag) {
        return SymMat(Eigen::MatrixXd(diag.asDiagonal()));
    }

    int dim() const { return static_cast<int>(entries_.rows()); }
    double operator()(int i, int j) const { return entries_(i, j); }
    const Eigen::MatrixXd& mat() const { return entries_; }
    Eigen::VectorXd diag() const { return entries_.diagonal(); }
    double trace() const { return entries_.trace(); }

    SymMat add_ridge(double eps) const {
        return SymMat(entries_ + eps * Eigen::MatrixXd::Identity(dim(), dim()));
    }

  private:
    Eigen::MatrixXd entries_;
};

/// Leading eigenpairs: values sorted descending, vectors column-orthonormal,
/// signs fixed so the largest-magnitude entry in each column is nonnegative.
struct EigPair {
    Eigen::VectorXd values;   // length p, descending
    Eigen::MatrixXd vectors;  // d x p
};

/// Fix eigenvector signs deterministically: in each column the entry of
/// largest absolute value is made nonnegative (ties resolved by lowest row).
inline void apply_sign_convention(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index pivot = 0;
        double best = std::abs(vectors(0, j));
        for (Eigen::Index i = 1; i < vectors.rows(); ++i) {
            const double v = std::abs(vectors(i, j));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (vectors(pivot, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

/// Count of eigenvalues above rel_tol * lambda_max (descending input).
inline int numerical_rank(const Eigen::VectorXd& values_desc, double rel_tol = 1e-10) {
    if (values_desc.size() == 0) return 0;
    const double threshold = rel_tol * std::max(values_desc(0), 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < values_desc.size(); ++i)
        if (values_desc(i) > threshold) ++rank;
    return rank;
}

namespace detail {

/// Full symmetric eigendecomposition, eigenvalues descending.  Throws
/// solver_error if the iteration inside Eigen fails to converge.
inline void sym_eig_full(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                         Eigen::MatrixXd* vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw solver_error("sym_eig: eigensolver did not converge");
    values = solver.eigenvalues().reverse();
    if (vectors) *vectors = solver.eigenvectors().rowwise().reverse();
}

inline Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& a) {
    Eigen::VectorXd values;
    sym_eig_full(a, values, nullptr);
    return values;
}

}  // namespace detail

/// p leading eigenpairs of a.  Deterministic: identical input bits give
/// identical output bits (the sign convention removes the only ambiguity
/// outside of degenerate eigenvalues).
inline EigPair sym_eig(const SymMat& a, int p) {
    if (p < 1 || p > a.dim())
        throw input_error("sym_eig: p must be in [1, " + std::to_string(a.dim()) + "]");
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    detail::sym_eig_full(a.mat(), values, &vectors);
    EigPair out;
    out.values = values.head(p);
    out.vectors = vectors.leftCols(p);
    apply_sign_convention(out.vectors);
    return out;
}

/// Eigenvalues only, descending, all d of them.
inline Eigen::VectorXd sym_eigenvalues(const SymMat& a) {
    return detail::eigenvalues_desc(a.mat());
}

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix: eigenvalues above
/// rel_tol * max(lambda_max, 1) are inverted, the rest are treated as zero.
inline SymMat pinv_psd(const SymMat& b, double rel_tol = 1e-12) {
    if (rel_tol <= 0.0) throw input_error("pinv_psd: rel_tol must be positive");
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    detail::sym_eig_full(b.mat(), values, &vectors);
    const double cutoff = rel_tol * std::max(values(0), 1.0);
    Eigen::VectorXd inverted = Eigen::VectorXd::Zero(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values(i) > cutoff) inverted(i) = 1.0 / values(i);
    Eigen::MatrixXd result = vectors * inverted.asDiagonal() * vectors.transpose();
    return SymMat(std::move(result));
}

namespace detail {

inline Eigen::MatrixXd gather_submatrix(const Eigen::MatrixXd& a, const std::vector<int>& idx) {
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd out(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) out(i, j) = a(idx[i], idx[j]);
    return out;
}

inline Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& a, const std::vector<int>& idx) {
    Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(idx[j]);
    return out;
}

}  // namespace detail

/// Principal submatrix A_{I,I}.
inline SymMat principal_submatrix(const SymMat& a, const SupportIndices& idx) {
    if (idx.d() != a.dim())
        throw input_error("principal_submatrix: support is for dimension " +
                          std::to_string(idx.d()) + ", matrix has " + std::to_string(a.dim()));
    return SymMat(detail::gather_submatrix(a.mat(), idx.indices()));
}

/// Best rank-m approximation in Frobenius norm: sum of the m leading
/// eigenpairs.
inline SymMat best_rank_m(const SymMat& a, int m) {
    if (m < 1 || m > a.dim())
        throw input_error("best_rank_m: m must be in [1, " + std::to_string(a.dim()) + "]");
    const EigPair top = sym_eig(a, m);
    Eigen::MatrixXd result =
        top.vectors * top.values.asDiagonal() * top.vectors.transpose();
    return SymMat(std::move(result));
}

/// True iff lambda_min(a) >= -tol * max(1, lambda_max).
inline bool assert_psd(const SymMat& a, double tol = 1e-9) {
    const Eigen::VectorXd values = sym_eigenvalues(a);
    const double lambda_max = values(0);
    const double lambda_min = values(values.size() - 1);
    return lambda_min >= -tol * std::max(1.0, lambda_max);
}

}  // namespace fspca
