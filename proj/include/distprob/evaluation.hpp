#pragma once

#include "distprob/dataset.hpp"
#include "distprob/detectors.hpp"
#include "distprob/normalization.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace distprob::evaluation {

/// ROC AUC as the Mann-Whitney statistic: the probability that a random
/// outlier outscores a random inlier, ties credited 0.5. Computed from
/// midranks in O(n log n).
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdResult {
    double threshold;
    double f1;
};

/// Threshold maximizing the outlier-class F1. Candidates are midpoints
/// between consecutive distinct scores plus the +-infinity sentinels; a
/// point is predicted outlier when its score is strictly above the
/// threshold. Ties prefer the larger threshold.
ThresholdResult f1_optimal_threshold(std::span<const double> scores,
                                     std::span<const int> labels);

/// Fold assignment: per class, indices are shuffled by the seed and dealt
/// round-robin, so fold class counts differ by at most one member.
std::vector<std::size_t> stratified_kfold(std::span<const int> labels,
                                          std::size_t folds, std::uint64_t seed);

/// True when no strictly ordered raw pair is inverted by the
/// transformation; raw ties may stay tied or separate.
bool rank_stability_check(std::span<const double> raw,
                          std::span<const double> transformed);

struct BenchmarkConfig {
    std::vector<std::size_t> k_grid;
    std::vector<detectors::WeightScheme> schemes;
    std::vector<normalization::DistributionKind> distributions;
    normalization::SetStrategy strategy = normalization::SetStrategy::full;
    std::size_t m = 0; // m_neighborhood strategy only
    std::size_t folds = 2;
    std::uint64_t seed = 42;
};

struct ReportEntry {
    std::string detector;
    std::size_t k = 0;
    std::string scheme;
    std::string distribution;
    std::size_t fold = 0;
    double auc_raw = 0.0;
    double auc_transformed = 0.0;
    bool rank_stable = false;
    double f1_threshold = 0.0;
    double f1 = 0.0;

    bool operator==(const ReportEntry&) const = default;
};

struct BestK {
    std::string scheme;
    std::string distribution;
    std::size_t k = 0;
    double mean_auc = 0.0;
};

struct EvaluationReport {
    std::vector<ReportEntry> entries; // sorted by (detector, k, scheme, distribution, fold)
    std::vector<BestK> best_k;        // per (scheme, distribution), ties to smallest k
    std::vector<std::string> warnings;
};

/// Cross-validated open-world protocol: per fold, the training split is
/// the reference set; neighbor distances, normalization sets and
/// distributions are fitted on it, and the held-out split is scored
/// against it. Configurations whose k exceeds a fold's training size are
/// skipped with a warning.
EvaluationReport benchmark_run(const core::Dataset& data, const BenchmarkConfig& config);

} // namespace distprob::evaluation
