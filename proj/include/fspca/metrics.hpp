#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fspca/error.hpp"
#include "fspca/estimate.hpp"
#include "fspca/matrix.hpp"
#include "fspca/oracle.hpp"
#include "fspca/support.hpp"

namespace fspca {

/// |estimated ∩ optimal| / k.
inline double intersection_ratio(const SupportIndices& estimated, const SupportIndices& optimal) {
    if (estimated.k() != optimal.k() || estimated.d() != optimal.d())
        throw input_error("intersection_ratio: supports disagree on (d, k)");
    return static_cast<double>(support_intersection_size(estimated, optimal)) /
           static_cast<double>(estimated.k());
}

/// Intersection ratio against the best-matching optimal support when the
/// optimum is not unique (ties within tolerance are all considered).
inline double best_intersection_ratio(const SupportIndices& estimated, const OracleResult& oracle) {
    double best = intersection_ratio(estimated, oracle.optimal_support);
    for (const SupportIndices& tie : oracle.ties)
        best = std::max(best, intersection_ratio(estimated, tie));
    return best;
}

/// Nonnegative relative gap (opt - obj) / opt.  A solver objective above the
/// exhaustive optimum means the oracle was violated and is reported as an
/// error, not clamped away.
inline double relative_error(double obj, double opt_obj) {
    if (!(opt_obj > 0.0)) throw input_error("relative_error: optimal objective must be positive");
    const double scale = std::max(1.0, std::abs(opt_obj));
    if (obj > opt_obj + 1e-8 * scale)
        throw solver_error("relative_error: objective " + std::to_string(obj) +
                           " exceeds exhaustive optimum " + std::to_string(opt_obj));
    const double gap = (opt_obj - obj) / opt_obj;
    return gap < 0.0 ? 0.0 : gap;
}

/// Fraction of runs with relative error at or below the threshold.
inline double hit_frequency(const std::vector<double>& relative_errors, double threshold = 1e-3) {
    if (relative_errors.empty()) throw input_error("hit_frequency: empty input");
    std::size_t hits = 0;
    for (double re : relative_errors)
        if (re <= threshold) ++hits;
    return static_cast<double>(hits) / static_cast<double>(relative_errors.size());
}

/// Tr(W'AW) / (sum of the m leading eigenvalues of A); 1 when A = 0.
inline double normalized_explained_variance(const SymMat& a, const SubspaceEstimate& w) {
    const Eigen::VectorXd values = sym_eigenvalues(a);
    double denom = 0.0;
    for (int i = 0; i < w.m(); ++i) denom += values(i);
    if (denom <= 0.0) return 1.0;
    return objective_value(a, w) / denom;
}

/// Eigenvalue-decay constants controlling the low-rank approximation gap:
/// with r = min{rank(A), 2m},
///   G1 = sum_{i=m+1}^{r} lambda_i / sum_{i=1}^{m} lambda_i
///   G2 = sum_{i=m+1}^{r} lambda_i / sum_{i=1}^{d} lambda_i
/// and the bound epsilon = min{d G1 / k, d G2 / m}.
struct BoundConstants {
    double g1 = 0.0;
    double g2 = 0.0;
    double epsilon_bound = 0.0;
    int r = 0;
};

inline BoundConstants bound_constants_from_spectrum(const Eigen::VectorXd& values_desc, int m,
                                                    int k) {
    const int d = static_cast<int>(values_desc.size());
    if (!(1 <= m && m <= k && k <= d))
        throw input_error("bound_constants: need 1 <= m <= k <= d");
    BoundConstants out;
    out.r = std::min(numerical_rank(values_desc), 2 * m);
    double head = 0.0, mid = 0.0, total = 0.0;
    for (int i = 0; i < d; ++i) {
        const double v = values_desc(i);
        total += v;
        if (i < m) head += v;
        if (i >= m && i < out.r) mid += v;
    }
    out.g1 = head > 0.0 ? mid / head : 0.0;
    out.g2 = total > 0.0 ? mid / total : 0.0;
    out.epsilon_bound = std::min(d * out.g1 / k, d * out.g2 / m);
    return out;
}

inline BoundConstants bound_constants(const SymMat& a, int m, int k) {
    return bound_constants_from_spectrum(sym_eigenvalues(a), m, k);
}

/// Closed-form ceiling on G1 for a Zipf spectrum lambda_i = c * i^(-t):
/// min{1 / m^(t-1), 1 / 2^t}.
inline double zipf_g1_bound(int m, double t) {
    if (m < 1 || !(t > 1.0)) throw input_error("zipf_g1_bound: need m >= 1 and t > 1");
    return std::min(std::pow(static_cast<double>(m), -(t - 1.0)), std::pow(2.0, -t));
}

}  // namespace fspca
