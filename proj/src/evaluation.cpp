#include "distprob/evaluation.hpp"

#include "distprob/errors.hpp"
#include "distprob/parallel.hpp"
#include "distprob/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

namespace distprob::evaluation {

namespace {

void check_binary_labels(std::span<const int> labels, const char* who) {
    bool has_inlier = false;
    bool has_outlier = false;
    for (int label : labels) {
        if (label == 0) {
            has_inlier = true;
        } else if (label == 1) {
            has_outlier = true;
        } else {
            throw InputError(std::string(who) + ": labels must be 0 or 1");
        }
    }
    if (!has_inlier || !has_outlier) {
        throw InputError(std::string(who) + ": both classes must be present");
    }
}

} // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw InputError("roc_auc: scores and labels must have equal length");
    }
    check_binary_labels(labels, "roc_auc");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midrank sum over outliers; tied scores share the average rank
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        const double midrank = 0.5 * static_cast<double>(i + 1 + j); // ranks are 1-based
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == 1) {
                positive_rank_sum += midrank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = scores.size() - positives;
    const double u = positive_rank_sum -
                     0.5 * static_cast<double>(positives) * static_cast<double>(positives + 1);
    return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

ThresholdResult f1_optimal_threshold(std::span<const double> scores,
                                     std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw InputError("f1_optimal_threshold: scores and labels must have equal length");
    }
    check_binary_labels(labels, "f1_optimal_threshold");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    const std::size_t positives =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));

    // walk thresholds from +inf downward; each step admits one group of
    // tied scores into the predicted-outlier set
    double best_threshold = std::numeric_limits<double>::infinity();
    double best_f1 = 0.0;
    std::size_t tp = 0;
    std::size_t predicted = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]] == 1) {
                ++tp;
            }
            ++predicted;
            ++j;
        }
        const double threshold =
            j < order.size()
                ? 0.5 * (scores[order[i]] + scores[order[j]])
                : -std::numeric_limits<double>::infinity();
        const double f1 = 2.0 * static_cast<double>(tp) /
                          static_cast<double>(predicted + positives);
        if (f1 > best_f1) {
            best_f1 = f1;
            best_threshold = threshold;
        }
        i = j;
    }
    return {best_threshold, best_f1};
}

std::vector<std::size_t> stratified_kfold(std::span<const int> labels,
                                          std::size_t folds, std::uint64_t seed) {
    if (folds < 2) {
        throw InputError("stratified_kfold: need at least 2 folds");
    }
    check_binary_labels(labels, "stratified_kfold");

    std::vector<std::size_t> assignment(labels.size());
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) {
                members.push_back(i);
            }
        }
        if (members.size() < folds) {
            throw InputError("stratified_kfold: class " + std::to_string(cls) + " has " +
                             std::to_string(members.size()) + " members for " +
                             std::to_string(folds) + " folds");
        }
        std::mt19937_64 gen(rng::derive(seed, static_cast<std::uint64_t>(cls)));
        rng::shuffle(members, gen);
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            assignment[members[pos]] = pos % folds;
        }
    }
    return assignment;
}

bool rank_stability_check(std::span<const double> raw,
                          std::span<const double> transformed) {
    if (raw.size() != transformed.size()) {
        throw InputError("rank_stability_check: length mismatch");
    }
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });

    double running_max = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        double group_min = std::numeric_limits<double>::infinity();
        double group_max = -std::numeric_limits<double>::infinity();
        while (j < order.size() && raw[order[j]] == raw[order[i]]) {
            group_min = std::min(group_min, transformed[order[j]]);
            group_max = std::max(group_max, transformed[order[j]]);
            ++j;
        }
        if (group_min < running_max) {
            return false; // a strictly smaller raw score ended up above us
        }
        running_max = std::max(running_max, group_max);
        i = j;
    }
    return true;
}

EvaluationReport benchmark_run(const core::Dataset& data, const BenchmarkConfig& config) {
    if (!data.has_labels()) {
        throw InputError("benchmark_run: labeled dataset required");
    }
    if (config.k_grid.empty() || config.schemes.empty() || config.distributions.empty()) {
        throw InputError("benchmark_run: k grid, schemes and distributions must be nonempty");
    }
    const auto& labels = data.labels();
    const auto assignment = stratified_kfold(labels, config.folds, config.seed);

    std::vector<std::size_t> k_grid = config.k_grid;
    std::sort(k_grid.begin(), k_grid.end());
    k_grid.erase(std::unique(k_grid.begin(), k_grid.end()), k_grid.end());
    if (k_grid.front() == 0) {
        throw InputError("benchmark_run: k must be positive");
    }

    EvaluationReport report;
    for (std::size_t fold = 0; fold < config.folds; ++fold) {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> test_idx;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            (assignment[i] == fold ? test_idx : train_idx).push_back(i);
        }
        const core::Dataset train = data.subset(train_idx);
        const core::Dataset test = data.subset(test_idx);
        const auto& test_labels = test.labels();

        if (config.strategy == normalization::SetStrategy::m_neighborhood &&
            (config.m < 1 || config.m > train.size() - 1)) {
            throw InputError("benchmark_run: m=" + std::to_string(config.m) +
                             " invalid for training size " + std::to_string(train.size()));
        }

        // reference-set structures are fitted on the training fold only
        const auto train_matrix = core::pairwise_distances(train);
        std::map<normalization::DistributionKind, normalization::DistanceDistribution>
            fitted;
        for (auto kind : config.distributions) {
            if (kind != normalization::DistributionKind::none) {
                fitted.emplace(kind, normalization::DistanceDistribution::fit(
                                         kind, normalization::build_normalization_set(
                                                   train_matrix, config.strategy, config.m)));
            }
        }

        std::vector<std::size_t> usable;
        for (std::size_t k : k_grid) {
            if (k <= train.size()) {
                usable.push_back(k);
            } else {
                report.warnings.push_back(
                    "fold " + std::to_string(fold) + ": k=" + std::to_string(k) +
                    " exceeds training size " + std::to_string(train.size()) +
                    "; configuration skipped");
            }
        }
        if (usable.empty()) {
            continue;
        }

        const auto cross = core::cross_distances(test, train);
        const auto nbrs = core::knn_from_matrix(cross, usable.back());

        const std::size_t jobs = usable.size() * config.schemes.size();
        std::vector<std::vector<ReportEntry>> produced(jobs);
        parallel_for(jobs, [&](std::size_t job) {
            const std::size_t k = usable[job / config.schemes.size()];
            const auto& scheme = config.schemes[job % config.schemes.size()];
            const auto raw = detectors::score_knnw(nbrs, scheme, k);
            const double auc_raw = roc_auc(raw.scores, test_labels);
            for (auto kind : config.distributions) {
                detectors::ScoreVector transformed =
                    kind == normalization::DistributionKind::none
                        ? raw
                        : normalization::transform_scores(raw, fitted.at(kind));
                ReportEntry entry;
                entry.detector = "knnw";
                entry.k = k;
                entry.scheme = detectors::weight_kind_name(scheme.kind);
                entry.distribution = normalization::distribution_kind_name(kind);
                entry.fold = fold;
                entry.auc_raw = auc_raw;
                entry.auc_transformed = roc_auc(transformed.scores, test_labels);
                entry.rank_stable = rank_stability_check(raw.scores, transformed.scores);
                const auto best = f1_optimal_threshold(transformed.scores, test_labels);
                entry.f1_threshold = best.threshold;
                entry.f1 = best.f1;
                produced[job].push_back(std::move(entry));
            }
        });
        for (auto& group : produced) {
            for (auto& entry : group) {
                report.entries.push_back(std::move(entry));
            }
        }
    }

    std::sort(report.entries.begin(), report.entries.end(),
              [](const ReportEntry& a, const ReportEntry& b) {
                  return std::tie(a.detector, a.k, a.scheme, a.distribution, a.fold) <
                         std::tie(b.detector, b.k, b.scheme, b.distribution, b.fold);
              });

    // best k per (scheme, distribution) by mean transformed AUC across folds
    std::map<std::pair<std::string, std::string>,
             std::map<std::size_t, std::pair<double, std::size_t>>>
        sums;
    for (const auto& entry : report.entries) {
        auto& cell = sums[{entry.scheme, entry.distribution}][entry.k];
        cell.first += entry.auc_transformed;
        cell.second += 1;
    }
    for (const auto& [key, by_k] : sums) {
        BestK best;
        best.scheme = key.first;
        best.distribution = key.second;
        bool first = true;
        for (const auto& [k, cell] : by_k) {
            const double mean = cell.first / static_cast<double>(cell.second);
            if (first || mean > best.mean_auc) {
                best.k = k;
                best.mean_auc = mean;
                first = false;
            }
        }
        report.best_k.push_back(std::move(best));
    }
    return report;
}

} // namespace distprob::evaluation
