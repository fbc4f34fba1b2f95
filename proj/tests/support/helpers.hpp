#pragma once

#include <Eigen/Dense>
#include <vector>

#include <fspca/fspca.hpp>

namespace testsupport {

/// Random PSD matrix with the given rank: Q diag(lambda) Q' with lambda_i
/// drawn from [0.5, scale] for the first `rank` positions and zero after.
inline fspca::SymMat random_psd(int d, int rank, fspca::Rng& rng, double scale = 10.0) {
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < rank; ++i) lambda(i) = 0.5 + (scale - 0.5) * rng.uniform01();
    std::sort(lambda.data(), lambda.data() + d, std::greater<>());
    const Eigen::MatrixXd q = fspca::random_orthogonal(d, rng);
    return fspca::SymMat(Eigen::MatrixXd(q * lambda.asDiagonal() * q.transpose()));
}

/// Random symmetric (not necessarily PSD) matrix with iid Gaussian entries.
inline fspca::SymMat random_symmetric(int d, fspca::Rng& rng) {
    Eigen::MatrixXd g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian();
    return fspca::SymMat(Eigen::MatrixXd(0.5 * (g + g.transpose())));
}

/// Dense column-orthonormal d x m block (no sparsity).
inline Eigen::MatrixXd random_orthonormal_block(int d, int m, fspca::Rng& rng) {
    Eigen::MatrixXd g(d, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian();
    return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() *
           Eigen::MatrixXd::Identity(d, m);
}

/// PSD matrix whose range lies inside the given support coordinates, with
/// exactly `rank` positive eigenvalues there.
inline fspca::SymMat embedded_psd(int d, const std::vector<int>& coords, int rank,
                                  fspca::Rng& rng, double scale = 10.0) {
    const int k = static_cast<int>(coords.size());
    const fspca::SymMat core = random_psd(k, rank, rng, scale);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) a(coords[i], coords[j]) = core(i, j);
    return fspca::SymMat(std::move(a));
}

inline bool trace_nondecreasing(const std::vector<double>& trace, double rel_tol = 1e-9) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const double allowed = rel_tol * std::max(1.0, std::abs(trace[i]));
        if (trace[i] < trace[i - 1] - allowed) return false;
    }
    return true;
}

}  // namespace testsupport
