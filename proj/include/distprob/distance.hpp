#pragma once

#include "distprob/dataset.hpp"

#include <cstddef>
#include <vector>

namespace distprob::core {

/// m query rows x n reference columns of nonnegative distances.
///
/// Closed-world matrices are square and mark the diagonal as self-pairs;
/// the mask is structural, so masked cells never contribute to neighbor
/// search or to normalization sets. Open-world matrices carry no mask:
/// a query that duplicates a reference point legitimately sees distance 0.
class DistanceMatrix {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    static DistanceMatrix closed_world(std::size_t n, std::vector<double> values);
    static DistanceMatrix open_world(std::size_t rows, std::size_t cols,
                                     std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    /// Column masked as this row's self-pair, or npos.
    std::size_t self_pair(std::size_t row) const { return self_pair_[row]; }
    bool is_self_pair(std::size_t i, std::size_t j) const { return self_pair_[i] == j; }

    /// Square with the full diagonal masked.
    bool closed_world_square() const noexcept { return closed_world_; }

    std::size_t unmasked_in_row(std::size_t row) const {
        return cols_ - (self_pair_[row] == npos ? 0 : 1);
    }

private:
    DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                   std::vector<std::size_t> self_pair, bool closed_world);

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::vector<std::size_t> self_pair_;
    bool closed_world_;
};

/// Square symmetric distance matrix over one dataset, diagonal masked.
/// Each unordered pair is evaluated once and mirrored, so symmetry is exact.
DistanceMatrix pairwise_distances(const Dataset& ref);

/// Rectangular query x reference distances, no masking.
DistanceMatrix cross_distances(const Dataset& query, const Dataset& ref);

} // namespace distprob::core
