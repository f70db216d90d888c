#include "distprob/normalization.hpp"

#include "distprob/errors.hpp"
#include "distprob/neighbors.hpp"
#include "distprob/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace distprob::normalization {

const char* set_strategy_name(SetStrategy strategy) {
    switch (strategy) {
    case SetStrategy::full: return "full";
    case SetStrategy::triangular: return "triangular";
    case SetStrategy::m_neighborhood: return "m_neighborhood";
    }
    return "?";
}

SetStrategy set_strategy_from_name(const std::string& name) {
    if (name == "full") return SetStrategy::full;
    if (name == "triangular") return SetStrategy::triangular;
    if (name == "m_neighborhood") return SetStrategy::m_neighborhood;
    throw InputError("unknown normalization strategy '" + name + "'");
}

const char* distribution_kind_name(DistributionKind kind) {
    switch (kind) {
    case DistributionKind::none: return "none";
    case DistributionKind::normal: return "normal";
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::empirical: return "empirical";
    }
    return "?";
}

DistributionKind distribution_kind_from_name(const std::string& name) {
    if (name == "none") return DistributionKind::none;
    if (name == "normal") return DistributionKind::normal;
    if (name == "exponential") return DistributionKind::exponential;
    if (name == "empirical") return DistributionKind::empirical;
    throw InputError("unknown distribution kind '" + name + "'");
}

NormalizationSet build_normalization_set(const core::DistanceMatrix& dist,
                                         SetStrategy strategy, std::size_t m) {
    if (!dist.closed_world_square()) {
        throw InputError("build_normalization_set: requires a closed-world square matrix");
    }
    const std::size_t n = dist.rows();
    NormalizationSet set;
    set.strategy = strategy;
    switch (strategy) {
    case SetStrategy::full:
        set.values.reserve(n * (n - 1));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    set.values.push_back(dist.at(i, j));
                }
            }
        }
        break;
    case SetStrategy::triangular:
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double a = dist.at(i, j);
                const double b = dist.at(j, i);
                if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
                    throw InputError("build_normalization_set: triangular strategy "
                                     "requires a symmetric matrix");
                }
            }
        }
        set.values.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                set.values.push_back(dist.at(i, j));
            }
        }
        break;
    case SetStrategy::m_neighborhood: {
        if (m < 1 || m > n - 1) {
            throw InputError("build_normalization_set: m=" + std::to_string(m) +
                             " outside [1, " + std::to_string(n - 1) + "]");
        }
        return m_neighborhood_set(core::knn_from_matrix(dist, m), m);
    }
    }
    return set;
}

NormalizationSet m_neighborhood_set(const core::NeighborLists& nbrs, std::size_t m) {
    if (m < 1 || m > nbrs.k()) {
        throw InputError("m_neighborhood_set: m=" + std::to_string(m) +
                         " outside [1, " + std::to_string(nbrs.k()) + "]");
    }
    NormalizationSet set;
    set.strategy = SetStrategy::m_neighborhood;
    set.m = m;
    set.values.reserve(nbrs.rows() * m);
    for (std::size_t i = 0; i < nbrs.rows(); ++i) {
        const auto row = nbrs.row_distances(i).subspan(0, m);
        set.values.insert(set.values.end(), row.begin(), row.end());
    }
    return set;
}

DistanceDistribution DistanceDistribution::fit(DistributionKind kind,
                                               const NormalizationSet& set) {
    if (kind != DistributionKind::none && set.values.empty()) {
        throw InputError("fit: empty normalization set");
    }
    DistanceDistribution d(kind);
    switch (kind) {
    case DistributionKind::none:
        break;
    case DistributionKind::normal: {
        const std::size_t n = set.values.size();
        double mean = 0.0;
        for (double v : set.values) {
            mean += v;
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : set.values) {
            const double diff = v - mean;
            var += diff * diff;
        }
        var /= static_cast<double>(n); // maximum-likelihood estimator
        if (var <= 0.0) {
            throw FitError("fit: normal distribution needs at least 2 distinct values");
        }
        d.mu_ = mean;
        d.sigma_ = std::sqrt(var);
        break;
    }
    case DistributionKind::exponential: {
        double mean = 0.0;
        for (double v : set.values) {
            mean += v;
        }
        mean /= static_cast<double>(set.values.size());
        if (mean <= 0.0) {
            throw FitError("fit: exponential distribution needs a positive mean");
        }
        d.lambda_ = 1.0 / mean;
        break;
    }
    case DistributionKind::empirical:
        d.sample_ = set.values;
        std::sort(d.sample_.begin(), d.sample_.end());
        break;
    }
    return d;
}

double DistanceDistribution::cdf(double value) const {
    switch (kind_) {
    case DistributionKind::none:
        throw InputError("cdf: undefined for the 'none' kind");
    case DistributionKind::normal: {
        const double z = (value - mu_) / sigma_;
        return 0.5 * std::erfc(-z / std::sqrt(2.0));
    }
    case DistributionKind::exponential:
        return value < 0.0 ? 0.0 : -std::expm1(-lambda_ * value);
    case DistributionKind::empirical: {
        const auto it = std::upper_bound(sample_.begin(), sample_.end(), value);
        return static_cast<double>(it - sample_.begin()) /
               static_cast<double>(sample_.size());
    }
    }
    return 0.0;
}

double DistanceDistribution::density(double value) const {
    switch (kind_) {
    case DistributionKind::normal: {
        const double z = (value - mu_) / sigma_;
        return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * M_PI));
    }
    case DistributionKind::exponential:
        return value < 0.0 ? 0.0 : lambda_ * std::exp(-lambda_ * value);
    default:
        throw InputError("density: defined only for normal and exponential kinds");
    }
}

detectors::ScoreVector transform_scores(const detectors::ScoreVector& scores,
                                        const DistanceDistribution& dist) {
    detectors::ScoreVector out;
    out.detector_id = scores.detector_id;
    out.scores.reserve(scores.scores.size());
    if (dist.kind() == DistributionKind::none) {
        out.scores = scores.scores;
        return out;
    }
    for (double s : scores.scores) {
        if (!std::isfinite(s)) {
            throw InputError("transform_scores: non-finite score");
        }
        out.scores.push_back(dist.cdf(s));
    }
    return out;
}

const char* measure_name(Measure measure) {
    switch (measure) {
    case Measure::ks: return "ks";
    case Measure::wasserstein1: return "wasserstein1";
    }
    return "?";
}

Measure measure_from_name(const std::string& name) {
    if (name == "ks") return Measure::ks;
    if (name == "wasserstein1") return Measure::wasserstein1;
    throw InputError("unknown statistical distance '" + name + "'");
}

double statistical_distance(std::span<const double> a, std::span<const double> b,
                            Measure measure) {
    if (a.empty() || b.empty()) {
        throw InputError("statistical_distance: empty score multiset");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double result = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    while (ia < sa.size() || ib < sb.size()) {
        const double v = (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib]))
                             ? sa[ia]
                             : sb[ib];
        if (measure == Measure::wasserstein1 && have_prev && v > prev) {
            const double fa = static_cast<double>(ia) / na;
            const double fb = static_cast<double>(ib) / nb;
            result += std::abs(fa - fb) * (v - prev);
        }
        while (ia < sa.size() && sa[ia] == v) {
            ++ia;
        }
        while (ib < sb.size() && sb[ib] == v) {
            ++ib;
        }
        if (measure == Measure::ks) {
            const double fa = static_cast<double>(ia) / na;
            const double fb = static_cast<double>(ib) / nb;
            result = std::max(result, std::abs(fa - fb));
        }
        prev = v;
        have_prev = true;
    }
    return result;
}

ContrastCurve contrast_scan(const core::DistanceMatrix& dist,
                            const detectors::ScoreVector& raw,
                            const std::vector<int>& labels, DistributionKind kind,
                            std::span<const std::size_t> m_grid, Measure measure) {
    if (labels.size() != raw.scores.size() || labels.size() != dist.rows()) {
        throw InputError("contrast_scan: scores, labels and matrix rows must agree");
    }
    const std::size_t outliers =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (outliers == 0 || outliers == labels.size()) {
        throw InputError("contrast_scan: both classes must be present in the labels");
    }
    if (m_grid.empty()) {
        throw InputError("contrast_scan: empty m grid");
    }
    std::vector<std::size_t> grid(m_grid.begin(), m_grid.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::size_t n = dist.rows();
    for (std::size_t m : grid) {
        if (m < 1 || m > n - 1) {
            throw InputError("contrast_scan: m=" + std::to_string(m) + " outside [1, " +
                             std::to_string(n - 1) + "]");
        }
    }

    ContrastCurve curve;
    curve.points.resize(grid.size());
    const auto nbrs = core::knn_from_matrix(dist, grid.back());
    parallel_for(grid.size(), [&](std::size_t g) {
        const std::size_t m = grid[g];
        const auto set = m_neighborhood_set(nbrs, m);
        const auto fitted = DistanceDistribution::fit(kind, set);
        const auto transformed = transform_scores(raw, fitted);
        std::vector<double> inlier;
        std::vector<double> outlier;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            (labels[i] == 1 ? outlier : inlier).push_back(transformed.scores[i]);
        }
        curve.points[g] = {m, statistical_distance(inlier, outlier, measure)};
    });

    curve.best_m = curve.points.front().m;
    curve.best_contrast = curve.points.front().contrast;
    for (const auto& p : curve.points) {
        if (p.contrast > curve.best_contrast) {
            curve.best_contrast = p.contrast;
            curve.best_m = p.m;
        }
    }
    return curve;
}

} // namespace distprob::normalization
