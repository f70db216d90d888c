#include "distprob/dataset.hpp"

#include "distprob/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace distprob::core {

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::optional<std::vector<int>> labels)
    : rows_(rows), cols_(cols), values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.size() != rows_ * cols_) {
        throw InputError("dataset: value buffer has " + std::to_string(values_.size()) +
                         " entries, expected " + std::to_string(rows_ * cols_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InputError("dataset: non-finite value at row " +
                             std::to_string(i / cols_) + ", column " +
                             std::to_string(i % cols_));
        }
    }
    if (labels_) {
        if (labels_->size() != rows_) {
            throw InputError("dataset: " + std::to_string(labels_->size()) +
                             " labels for " + std::to_string(rows_) + " points");
        }
        for (int label : *labels_) {
            if (label != 0 && label != 1) {
                throw InputError("dataset: labels must be 0 or 1");
            }
        }
    }
}

const std::vector<int>& Dataset::labels() const {
    if (!labels_) {
        throw InputError("dataset: no labels present");
    }
    return *labels_;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    std::vector<double> values;
    values.reserve(rows.size() * cols_);
    std::optional<std::vector<int>> labels;
    if (labels_) {
        labels.emplace();
        labels->reserve(rows.size());
    }
    for (std::size_t r : rows) {
        if (r >= rows_) {
            throw InputError("dataset: subset row " + std::to_string(r) + " out of range");
        }
        const auto p = point(r);
        values.insert(values.end(), p.begin(), p.end());
        if (labels) {
            labels->push_back((*labels_)[r]);
        }
    }
    return Dataset(rows.size(), cols_, std::move(values), std::move(labels));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InputError("euclidean: dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

Dataset minmax_scale(const Dataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.dimension();
    std::vector<double> scaled(n * d, 0.0);
    for (std::size_t j = 0; n > 0 && j < d; ++j) {
        double lo = data.at(0, j);
        double hi = lo;
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, data.at(i, j));
            hi = std::max(hi, data.at(i, j));
        }
        if (hi > lo) {
            for (std::size_t i = 0; i < n; ++i) {
                scaled[i * d + j] = (data.at(i, j) - lo) / (hi - lo);
            }
        }
        // constant column: stays all zeros
    }
    std::optional<std::vector<int>> labels;
    if (data.has_labels()) {
        labels = data.labels();
    }
    return Dataset(n, d, std::move(scaled), std::move(labels));
}

} // namespace distprob::core
