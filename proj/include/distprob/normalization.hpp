#pragma once

#include "distprob/detectors.hpp"
#include "distprob/distance.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace distprob::normalization {

enum class SetStrategy { full, triangular, m_neighborhood };

const char* set_strategy_name(SetStrategy strategy);
SetStrategy set_strategy_from_name(const std::string& name);

/// A subset of the distance-matrix values used to fit a distance
/// distribution. Self-pairs are never part of a normalization set.
struct NormalizationSet {
    std::vector<double> values;
    SetStrategy strategy = SetStrategy::full;
    std::size_t m = 0; // m_neighborhood only
};

/// Extracts a normalization set from a closed-world distance matrix.
///   full:            all n(n-1) off-diagonal values
///   triangular:      the n(n-1)/2 upper-triangle values (symmetric input only)
///   m_neighborhood:  each point's m smallest distances, pooled (n*m values)
NormalizationSet build_normalization_set(const core::DistanceMatrix& dist,
                                         SetStrategy strategy, std::size_t m = 0);

/// m-neighborhood set pooled from already-extracted neighbor lists; equal to
/// build_normalization_set(dist, m_neighborhood, m) when nbrs came from the
/// same matrix with width >= m. Lets a scan over many m reuse one extraction.
NormalizationSet m_neighborhood_set(const core::NeighborLists& nbrs, std::size_t m);

enum class DistributionKind { none, normal, exponential, empirical };

const char* distribution_kind_name(DistributionKind kind);
DistributionKind distribution_kind_from_name(const std::string& name);

/// A distance distribution fitted on a normalization set. Its CDF maps a
/// distance-based score to the probability that a normalization-set
/// distance is smaller or equal, so 0.99 puts a score in the top 1% of
/// observed distances.
class DistanceDistribution {
public:
    static DistanceDistribution fit(DistributionKind kind, const NormalizationSet& set);

    DistributionKind kind() const noexcept { return kind_; }

    /// P(r <= value). Monotonically non-decreasing with range [0, 1].
    double cdf(double value) const;

    /// Density at value; defined for the normal and exponential kinds.
    double density(double value) const;

    double mu() const { return mu_; }        // normal
    double sigma() const { return sigma_; }  // normal
    double lambda() const { return lambda_; }// exponential
    const std::vector<double>& sample() const { return sample_; } // empirical

private:
    explicit DistanceDistribution(DistributionKind kind) : kind_(kind) {}

    DistributionKind kind_;
    double mu_ = 0.0;
    double sigma_ = 0.0;
    double lambda_ = 0.0;
    std::vector<double> sample_;
};

/// Element-wise CDF application; the 'none' kind passes scores through
/// unchanged.
detectors::ScoreVector transform_scores(const detectors::ScoreVector& scores,
                                        const DistanceDistribution& dist);

enum class Measure { ks, wasserstein1 };

const char* measure_name(Measure measure);
Measure measure_from_name(const std::string& name);

/// Statistical distance between two score multisets:
///   ks:           sup |ECDF_a - ECDF_b|
///   wasserstein1: area between the ECDFs
double statistical_distance(std::span<const double> a, std::span<const double> b,
                            Measure measure);

struct ContrastPoint {
    std::size_t m;
    double contrast;
};

struct ContrastCurve {
    std::vector<ContrastPoint> points; // ascending in m
    std::size_t best_m = 0;            // smallest argmax
    double best_contrast = 0.0;
};

/// For each m in the grid: fit the chosen distribution on the
/// m-neighborhood set, transform the raw scores, and measure the
/// statistical distance between inlier and outlier score distributions.
ContrastCurve contrast_scan(const core::DistanceMatrix& dist,
                            const detectors::ScoreVector& raw,
                            const std::vector<int>& labels, DistributionKind kind,
                            std::span<const std::size_t> m_grid, Measure measure);

} // namespace distprob::normalization
