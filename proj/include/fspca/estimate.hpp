#pragma once

#include <Eigen/Dense>
#include <utility>

#include "fspca/error.hpp"
#include "fspca/matrix.hpp"
#include "fspca/support.hpp"

namespace fspca {

/// A row-sparse subspace estimate W = S * V kept in factored form: the support
/// indices of the k nonzero rows plus a k x m column-orthonormal block V.  The
/// factored form is canonical; a dense d x m embedding exists only for output.
class SubspaceEstimate {
  public:
    SubspaceEstimate(SupportIndices support, Eigen::MatrixXd block)
        : support_(std::move(support)), block_(std::move(block)) {
        if (block_.rows() != support_.k())
            throw input_error("estimate: block has " + std::to_string(block_.rows()) +
                              " rows, support selects " + std::to_string(support_.k()));
        if (block_.cols() < 1 || block_.cols() > block_.rows())
            throw input_error("estimate: need 1 <= m <= k");
        const Eigen::MatrixXd gram = block_.transpose() * block_;
        const double defect =
            (gram - Eigen::MatrixXd::Identity(m(), m())).norm();
        if (!(defect <= 1e-10))
            throw input_error("estimate: block is not column-orthonormal (defect " +
                              std::to_string(defect) + ")");
    }

    int d() const { return support_.d(); }
    int k() const { return support_.k(); }
    int m() const { return static_cast<int>(block_.cols()); }
    const SupportIndices& support() const { return support_; }
    const Eigen::MatrixXd& block() const { return block_; }

    /// Dense d x m embedding, zero outside the support rows.
    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d(), m());
        for (int i = 0; i < k(); ++i) w.row(support_[i]) = block_.row(i);
        return w;
    }

  private:
    SupportIndices support_;
    Eigen::MatrixXd block_;
};

/// Tr(W' A W), evaluated on the factored form through the principal submatrix.
inline double objective_value(const SymMat& a, const SubspaceEstimate& w) {
    if (w.d() != a.dim()) throw input_error("objective: dimension mismatch");
    const Eigen::MatrixXd sub = detail::gather_submatrix(a.mat(), w.support().indices());
    return (w.block().transpose() * sub * w.block()).trace();
}

}  // namespace fspca
