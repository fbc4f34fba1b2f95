#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fspca/error.hpp"

namespace fspca {

/// A sorted set of k distinct row indices out of d, the row-selection part of
/// an estimate.  Left-multiplying by the selection matrix these indices encode
/// is realized everywhere as a gather, never as an actual 0/1 matrix.
class SupportIndices {
  public:
    SupportIndices(std::vector<int> indices, int d) : indices_(std::move(indices)), d_(d) {
        if (d_ <= 0) throw input_error("support: d must be positive");
        if (indices_.empty()) throw input_error("support: empty index set");
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            if (indices_[i] < 0 || indices_[i] >= d_)
                throw input_error("support: index " + std::to_string(indices_[i]) +
                                  " out of range [0, " + std::to_string(d_) + ")");
            if (i > 0 && indices_[i] <= indices_[i - 1])
                throw input_error("support: indices must be strictly ascending");
        }
    }

    int d() const { return d_; }
    int k() const { return static_cast<int>(indices_.size()); }
    const std::vector<int>& indices() const { return indices_; }
    int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }

    bool contains(int idx) const {
        return std::binary_search(indices_.begin(), indices_.end(), idx);
    }

    friend bool operator==(const SupportIndices& a, const SupportIndices& b) {
        return a.d_ == b.d_ && a.indices_ == b.indices_;
    }
    friend bool operator!=(const SupportIndices& a, const SupportIndices& b) {
        return !(a == b);
    }

  private:
    std::vector<int> indices_;
    int d_;
};

/// Size of the intersection of two sorted index sets.
inline int support_intersection_size(const SupportIndices& a, const SupportIndices& b) {
    std::vector<int> common;
    std::set_intersection(a.indices().begin(), a.indices().end(),
                          b.indices().begin(), b.indices().end(),
                          std::back_inserter(common));
    return static_cast<int>(common.size());
}

}  // namespace fspca
