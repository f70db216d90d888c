#pragma once

// Deterministic data generators and brute-force oracles shared by the
// test suites. Oracles are written against the raw definitions, not the
// library code paths they check.

#include "distprob/dataset.hpp"
#include "distprob/distance.hpp"
#include "distprob/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace testutil {

inline double uniform(std::mt19937_64& gen) {
    return distprob::rng::uniform_double(gen);
}

inline double gaussian(std::mt19937_64& gen) {
    const double u1 = 1.0 - uniform(gen); // (0, 1]
    const double u2 = uniform(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// n x d points uniform in [0,1]^d; labels, when requested, mark roughly
/// 20% outliers with at least one member per class.
inline distprob::core::Dataset random_dataset(std::size_t n, std::size_t d,
                                              std::uint64_t seed,
                                              bool with_labels = false) {
    std::mt19937_64 gen(seed);
    std::vector<double> values(n * d);
    for (double& v : values) {
        v = uniform(gen);
    }
    std::optional<std::vector<int>> labels;
    if (with_labels) {
        labels.emplace(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            (*labels)[i] = uniform(gen) < 0.2 ? 1 : 0;
        }
        (*labels)[0] = 0;
        (*labels)[1] = 1;
    }
    return distprob::core::Dataset(n, d, std::move(values), std::move(labels));
}

/// Unit-Gaussian inliers around the origin plus outliers on a radius-10
/// ring, labeled 0/1.
inline distprob::core::Dataset planted_dataset(std::size_t inliers, std::size_t outliers,
                                               std::uint64_t seed, double radius = 10.0) {
    std::mt19937_64 gen(seed);
    std::vector<double> values;
    values.reserve((inliers + outliers) * 2);
    for (std::size_t i = 0; i < inliers; ++i) {
        values.push_back(gaussian(gen));
        values.push_back(gaussian(gen));
    }
    for (std::size_t i = 0; i < outliers; ++i) {
        const double angle = 2.0 * M_PI * uniform(gen);
        values.push_back(radius * std::cos(angle));
        values.push_back(radius * std::sin(angle));
    }
    std::vector<int> labels(inliers + outliers, 0);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(inliers), labels.end(), 1);
    return distprob::core::Dataset(inliers + outliers, 2, std::move(values),
                                   std::move(labels));
}

/// ROC AUC by exhaustive (outlier, inlier) pair counting, ties worth 0.5.
inline double auc_pair_oracle(std::span<const double> scores, std::span<const int> labels) {
    double u = 0.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) {
            continue;
        }
        ++positives;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) {
                continue;
            }
            if (scores[i] > scores[j]) {
                u += 1.0;
            } else if (scores[i] == scores[j]) {
                u += 0.5;
            }
        }
    }
    for (int label : labels) {
        if (label == 0) {
            ++negatives;
        }
    }
    return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

/// Regular simplex: n vertices e_i in R^n, all pairwise distances sqrt(2).
inline distprob::core::Dataset simplex_dataset(std::size_t n) {
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = 1.0;
    }
    return distprob::core::Dataset(n, n, std::move(values));
}

/// Full row sort of a distance matrix row (unmasked entries), value then
/// index ascending.
inline std::vector<std::pair<double, std::size_t>>
sorted_row_oracle(const distprob::core::DistanceMatrix& dist, std::size_t row) {
    std::vector<std::pair<double, std::size_t>> entries;
    for (std::size_t j = 0; j < dist.cols(); ++j) {
        if (!dist.is_self_pair(row, j)) {
            entries.emplace_back(dist.at(row, j), j);
        }
    }
    std::sort(entries.begin(), entries.end());
    return entries;
}

} // namespace testutil
