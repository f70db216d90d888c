#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace distprob::core {

/// Row-major matrix of n points x d features with optional binary labels
/// (0 = normal, 1 = outlier). Every entry must be finite.
class Dataset {
public:
    Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
            std::optional<std::vector<int>> labels = std::nullopt);

    std::size_t size() const noexcept { return rows_; }
    std::size_t dimension() const noexcept { return cols_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    std::span<const double> point(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }

    bool has_labels() const noexcept { return labels_.has_value(); }
    const std::vector<int>& labels() const;

    /// Row subset in the given order; labels are carried along.
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::optional<std::vector<int>> labels_;
};

/// Euclidean distance between two equal-length vectors.
double euclidean(std::span<const double> a, std::span<const double> b);

/// Maps each feature column onto [0, 1]. A constant column maps to all
/// zeros, which removes it from every Euclidean distance.
Dataset minmax_scale(const Dataset& data);

} // namespace distprob::core
