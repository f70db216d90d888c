#pragma once

#include "distprob/distance.hpp"
#include "distprob/neighbors.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace distprob::detectors {

enum class WeightKind { max, mean, distance, exponential, linear, rank };

/// Neighbor weighting scheme. The farthest neighbor always receives the
/// largest weight; s shapes the distance scheme, a and b the exponential
/// scheme. Negative a or s is accepted but reverses that emphasis, which
/// is outside the intended usage.
struct WeightScheme {
    WeightKind kind = WeightKind::mean;
    double s = 1.0;
    double a = 1.0;
    double b = 1.0;
};

const char* weight_kind_name(WeightKind kind);
WeightKind weight_kind_from_name(const std::string& name);

/// Sum-normalized weights for an ascending vector of neighbor distances.
/// The result always sums to 1; degenerate all-zero raw weights fall back
/// to uniform.
std::vector<double> weights(const WeightScheme& scheme, std::span<const double> d);

/// Outlier scores; higher means more outlying.
struct ScoreVector {
    std::vector<double> scores;
    std::string detector_id;
};

/// Weighted neighbor distance: dot product of each row's distances with
/// its normalized weight vector. `k` restricts rows to their first k
/// neighbors; 0 means the full width.
ScoreVector score_knnw(const core::NeighborLists& nbrs, const WeightScheme& scheme,
                       std::size_t k = 0);

/// Distance to the kth nearest neighbor.
ScoreVector score_kthnn(const core::NeighborLists& nbrs, std::size_t k);

/// Mean distance to the k nearest neighbors.
ScoreVector score_knn(const core::NeighborLists& nbrs, std::size_t k);

/// Binary flags: 1 when at least alpha * n points lie farther than delta.
std::vector<int> score_db_outlier(const core::DistanceMatrix& dist, double delta,
                                  double alpha);

/// kth nearest neighbor distance within a fresh per-point random sample of
/// the unmasked columns; the sample for point i is seeded from (seed, i).
ScoreVector score_kth_isnn(const core::DistanceMatrix& dist, std::size_t k,
                           std::size_t sample_size, std::uint64_t seed);

/// Minimum distance to an explicit shared sample of reference columns,
/// skipping masked self-pairs.
ScoreVector score_snn(const core::DistanceMatrix& dist,
                      std::span<const std::size_t> sample);

/// Minimum distance to one shared sample of `sample_size` columns drawn
/// with the given seed.
ScoreVector score_snn(const core::DistanceMatrix& dist, std::size_t sample_size,
                      std::uint64_t seed);

/// Mean of `rounds` independent shared-sample scores; round i draws its
/// sample with the sub-seed derive(seed, i).
ScoreVector score_rsnn(const core::DistanceMatrix& dist, std::size_t rounds,
                       std::size_t sample_size, std::uint64_t seed);

/// Simplified local outlier factor: own kth distance times the mean inverse
/// kth distance of the k nearest neighbors. Zero distances are floored at
/// 1e-12 before inversion.
ScoreVector score_slof(const core::NeighborLists& nbrs, std::size_t k);

/// Open-world variant: query rows are scored against reference neighbor
/// lists that supply each reference point's kth distance.
ScoreVector score_slof(const core::NeighborLists& query_nbrs,
                       const core::NeighborLists& ref_nbrs, std::size_t k);

/// Local outlier factor with reachability distances max(kdist(x'), d(x, x')).
ScoreVector score_lof(const core::NeighborLists& nbrs, std::size_t k);

ScoreVector score_lof(const core::NeighborLists& query_nbrs,
                      const core::NeighborLists& ref_nbrs, std::size_t k);

} // namespace distprob::detectors
