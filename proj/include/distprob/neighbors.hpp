#pragma once

#include "distprob/distance.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace distprob::core {

/// Per-row k nearest distances (ascending) and the reference indices they
/// belong to. Closed-world rows never contain the row's own index.
class NeighborLists {
public:
    NeighborLists(std::size_t rows, std::size_t k, std::vector<double> distances,
                  std::vector<std::size_t> indices);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t k() const noexcept { return k_; }

    double distance(std::size_t i, std::size_t j) const { return distances_[i * k_ + j]; }
    std::size_t index(std::size_t i, std::size_t j) const { return indices_[i * k_ + j]; }

    std::span<const double> row_distances(std::size_t i) const {
        return {distances_.data() + i * k_, k_};
    }
    std::span<const std::size_t> row_indices(std::size_t i) const {
        return {indices_.data() + i * k_, k_};
    }

private:
    std::size_t rows_;
    std::size_t k_;
    std::vector<double> distances_;
    std::vector<std::size_t> indices_;
};

/// The k smallest unmasked distances per row, ascending, ties broken by
/// ascending reference index.
NeighborLists knn_from_matrix(const DistanceMatrix& dist, std::size_t k);

} // namespace distprob::core
