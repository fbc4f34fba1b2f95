#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fspca/error.hpp"
#include "fspca/matrix.hpp"
#include "fspca/support.hpp"

namespace fspca {

/// C(d, k), saturating at 2^63-1 instead of overflowing.
inline std::uint64_t binomial(int d, int k) {
    if (k < 0 || k > d) return 0;
    k = std::min(k, d - k);
    const std::uint64_t cap = ~std::uint64_t{0} >> 1;
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(d - k + i) / static_cast<unsigned>(i);
        if (result > cap) return cap;
    }
    return static_cast<std::uint64_t>(result);
}

/// Yields every ascending k-subset of {0, ..., d-1} exactly once, in
/// lexicographic order.
class SupportEnumerator {
  public:
    SupportEnumerator(int d, int k) : d_(d), k_(k) {
        if (k < 1 || k > d) throw input_error("enumerate_supports: need 1 <= k <= d");
    }

    /// Fills `out` with the next subset; false once all C(d,k) are exhausted.
    bool next(std::vector<int>& out) {
        if (done_) return false;
        if (current_.empty()) {
            current_.resize(static_cast<std::size_t>(k_));
            for (int i = 0; i < k_; ++i) current_[static_cast<std::size_t>(i)] = i;
            out = current_;
            return true;
        }
        // Advance the rightmost index that can still move.
        int pos = k_ - 1;
        while (pos >= 0 && current_[static_cast<std::size_t>(pos)] == d_ - k_ + pos) --pos;
        if (pos < 0) {
            done_ = true;
            return false;
        }
        ++current_[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k_; ++i)
            current_[static_cast<std::size_t>(i)] = current_[static_cast<std::size_t>(i - 1)] + 1;
        out = current_;
        return true;
    }

  private:
    int d_, k_;
    std::vector<int> current_;
    bool done_ = false;
};

/// Exhaustive-search result: the best support, every support that matches it
/// within tolerance (ties is empty when the optimum is unique), and the size
/// of the search space actually walked.
struct OracleResult {
    SupportIndices optimal_support;
    double optimal_objective = 0.0;
    std::uint64_t num_supports_examined = 0;
    std::vector<SupportIndices> ties;  // near-optimal supports, optimum excluded
};

/// Global solution by exhaustive enumeration: for every k-subset I, score
/// sum of the m leading eigenvalues of A_{I,I}; the maximizer wins, with ties
/// broken toward the lexicographically smallest support.  Refuses to run when
/// C(d,k) exceeds `cap`.
inline OracleResult brute_force(const SymMat& a, int m, int k,
                                std::uint64_t cap = 200000) {
    const int d = a.dim();
    if (!(1 <= m && m <= k && k <= d))
        throw input_error("brute_force: need 1 <= m <= k <= d");
    const std::uint64_t total = binomial(d, k);
    if (total > cap)
        throw oracle_cap_error("brute_force: C(" + std::to_string(d) + ", " + std::to_string(k) +
                               ") = " + std::to_string(total) + " exceeds cap " +
                               std::to_string(cap));

    SupportEnumerator en(d, k);
    std::vector<int> idx;
    Eigen::MatrixXd sub(k, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;

    std::vector<int> best_idx;
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t examined = 0;
    // Candidate ties collected against the running maximum; the running
    // maximum only grows, so this is a superset of the final tie set.
    std::vector<std::pair<double, std::vector<int>>> candidates;

    const auto tie_tol = [](double opt) { return 1e-9 * std::max(1.0, std::abs(opt)); };

    while (en.next(idx)) {
        ++examined;
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i) sub(i, j) = a.mat()(idx[i], idx[j]);
        solver.compute(sub, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw solver_error("brute_force: eigensolver failed on a submatrix");
        double objective = 0.0;
        for (int i = 0; i < m; ++i) objective += solver.eigenvalues()(k - 1 - i);

        if (objective > best) {
            best = objective;
            best_idx = idx;
        }
        if (objective >= best - tie_tol(best)) {
            candidates.emplace_back(objective, idx);
            if (candidates.size() > 8192) {
                std::erase_if(candidates, [&](const auto& c) {
                    return c.first < best - tie_tol(best);
                });
            }
        }
    }

    OracleResult result{SupportIndices(best_idx, d), best, examined, {}};
    for (auto& [objective, support] : candidates)
        if (objective >= best - tie_tol(best) && support != best_idx)
            result.ties.emplace_back(std::move(support), d);
    return result;
}

}  // namespace fspca
