#include "distprob/neighbors.hpp"

#include "distprob/errors.hpp"
#include "distprob/parallel.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace distprob::core {

NeighborLists::NeighborLists(std::size_t rows, std::size_t k,
                             std::vector<double> distances,
                             std::vector<std::size_t> indices)
    : rows_(rows), k_(k), distances_(std::move(distances)), indices_(std::move(indices)) {
    if (distances_.size() != rows_ * k_ || indices_.size() != rows_ * k_) {
        throw InputError("neighbor lists: buffer size mismatch");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 1; j < k_; ++j) {
            if (distance(i, j) < distance(i, j - 1)) {
                throw InputError("neighbor lists: row " + std::to_string(i) +
                                 " is not sorted ascending");
            }
        }
    }
}

NeighborLists knn_from_matrix(const DistanceMatrix& dist, std::size_t k) {
    if (k == 0) {
        throw InputError("knn_from_matrix: k must be positive");
    }
    const std::size_t m = dist.rows();
    std::size_t available = dist.cols();
    for (std::size_t i = 0; i < m; ++i) {
        available = std::min(available, dist.unmasked_in_row(i));
    }
    if (k > available) {
        throw InputError("knn_from_matrix: k=" + std::to_string(k) + " exceeds the " +
                         std::to_string(available) + " unmasked entries per row");
    }

    std::vector<double> distances(m * k);
    std::vector<std::size_t> indices(m * k);
    parallel_for(m, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> row;
        row.reserve(dist.cols());
        for (std::size_t j = 0; j < dist.cols(); ++j) {
            if (!dist.is_self_pair(i, j)) {
                row.emplace_back(dist.at(i, j), j);
            }
        }
        // pair ordering breaks distance ties by ascending reference index
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k),
                          row.end());
        for (std::size_t j = 0; j < k; ++j) {
            distances[i * k + j] = row[j].first;
            indices[i * k + j] = row[j].second;
        }
    });
    return NeighborLists(m, k, std::move(distances), std::move(indices));
}

} // namespace distprob::core
