#include "distprob/distance.hpp"

#include "distprob/errors.hpp"
#include "distprob/parallel.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace distprob::core {

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols,
                               std::vector<double> values,
                               std::vector<std::size_t> self_pair, bool closed_world)
    : rows_(rows), cols_(cols), values_(std::move(values)),
      self_pair_(std::move(self_pair)), closed_world_(closed_world) {
    if (values_.size() != rows_ * cols_) {
        throw InputError("distance matrix: value buffer size mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw InputError("distance matrix: invalid distance at row " +
                             std::to_string(i / cols_) + ", column " +
                             std::to_string(i % cols_));
        }
    }
}

DistanceMatrix DistanceMatrix::closed_world(std::size_t n, std::vector<double> values) {
    std::vector<std::size_t> self_pair(n);
    std::iota(self_pair.begin(), self_pair.end(), std::size_t{0});
    return DistanceMatrix(n, n, std::move(values), std::move(self_pair), true);
}

DistanceMatrix DistanceMatrix::open_world(std::size_t rows, std::size_t cols,
                                          std::vector<double> values) {
    return DistanceMatrix(rows, cols, std::move(values),
                          std::vector<std::size_t>(rows, npos), false);
}

DistanceMatrix pairwise_distances(const Dataset& ref) {
    const std::size_t n = ref.size();
    if (n < 2) {
        throw InputError("pairwise_distances: need at least 2 points, got " +
                         std::to_string(n));
    }
    std::vector<double> values(n * n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean(ref.point(i), ref.point(j));
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    });
    return DistanceMatrix::closed_world(n, std::move(values));
}

DistanceMatrix cross_distances(const Dataset& query, const Dataset& ref) {
    if (query.dimension() != ref.dimension()) {
        throw InputError("cross_distances: dimension mismatch (" +
                         std::to_string(query.dimension()) + " vs " +
                         std::to_string(ref.dimension()) + ")");
    }
    if (query.size() == 0 || ref.size() == 0) {
        throw InputError("cross_distances: empty dataset");
    }
    const std::size_t m = query.size();
    const std::size_t n = ref.size();
    std::vector<double> values(m * n, 0.0);
    parallel_for(m, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            values[i * n + j] = euclidean(query.point(i), ref.point(j));
        }
    });
    return DistanceMatrix::open_world(m, n, std::move(values));
}

} // namespace distprob::core
