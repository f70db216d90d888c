#include "distprob/detectors.hpp"

#include "distprob/errors.hpp"
#include "distprob/parallel.hpp"
#include "distprob/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace distprob::detectors {

namespace {

// floor applied to distances before inversion in density estimates
constexpr double kDensityFloor = 1e-12;

void check_k(const core::NeighborLists& nbrs, std::size_t k, const char* who) {
    if (k == 0 || k > nbrs.k()) {
        throw InputError(std::string(who) + ": k=" + std::to_string(k) +
                         " out of range for neighbor lists of width " +
                         std::to_string(nbrs.k()));
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

} // namespace

const char* weight_kind_name(WeightKind kind) {
    switch (kind) {
    case WeightKind::max: return "max";
    case WeightKind::mean: return "mean";
    case WeightKind::distance: return "distance";
    case WeightKind::exponential: return "exponential";
    case WeightKind::linear: return "linear";
    case WeightKind::rank: return "rank";
    }
    return "?";
}

WeightKind weight_kind_from_name(const std::string& name) {
    if (name == "max") return WeightKind::max;
    if (name == "mean") return WeightKind::mean;
    if (name == "distance") return WeightKind::distance;
    if (name == "exponential") return WeightKind::exponential;
    if (name == "linear") return WeightKind::linear;
    if (name == "rank") return WeightKind::rank;
    throw InputError("unknown weighting scheme '" + name + "'");
}

std::vector<double> weights(const WeightScheme& scheme, std::span<const double> d) {
    const std::size_t k = d.size();
    if (k == 0) {
        throw InputError("weights: empty distance vector");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(d[i]) || d[i] < 0.0) {
            throw InputError("weights: distances must be finite and nonnegative");
        }
        if (i > 0 && d[i] < d[i - 1]) {
            throw InputError("weights: distances must be ascending");
        }
    }

    std::vector<double> w(k);
    switch (scheme.kind) {
    case WeightKind::max:
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = (d[i] == d[k - 1]) ? 1.0 : 0.0;
        }
        break;
    case WeightKind::mean:
        std::fill(w.begin(), w.end(), 1.0);
        break;
    case WeightKind::distance:
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = std::pow(d[i], scheme.s);
        }
        break;
    case WeightKind::exponential: {
        // shift exponents by their maximum so large distances cannot
        // overflow; the shift cancels under sum-normalization
        double shift = scheme.a * std::pow(d[0], scheme.b);
        for (std::size_t i = 1; i < k; ++i) {
            shift = std::max(shift, scheme.a * std::pow(d[i], scheme.b));
        }
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = std::exp(scheme.a * std::pow(d[i], scheme.b) - shift);
        }
        break;
    }
    case WeightKind::linear: {
        const double lo = d[0];
        const double hi = d[k - 1];
        if (hi > lo) {
            for (std::size_t i = 0; i < k; ++i) {
                w[i] = (d[i] - lo) / (hi - lo);
            }
        } else {
            std::fill(w.begin(), w.end(), 1.0); // 0/0 case: uniform
        }
        break;
    }
    case WeightKind::rank:
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = static_cast<double>(i + 1);
        }
        break;
    }

    double sum = 0.0;
    for (double v : w) {
        if (!std::isfinite(v)) {
            throw InputError("weights: non-finite raw weight");
        }
        sum += v;
    }
    if (sum == 0.0) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(k));
        return w;
    }
    for (double& v : w) {
        v /= sum;
    }
    return w;
}

ScoreVector score_knnw(const core::NeighborLists& nbrs, const WeightScheme& scheme,
                       std::size_t k) {
    if (k == 0) {
        k = nbrs.k();
    }
    check_k(nbrs, k, "score_knnw");
    std::vector<double> scores(nbrs.rows());
    parallel_for(nbrs.rows(), [&](std::size_t i) {
        const auto d = nbrs.row_distances(i).subspan(0, k);
        scores[i] = dot(d, weights(scheme, d));
    });
    return {std::move(scores), std::string("knnw(") + weight_kind_name(scheme.kind) + ")"};
}

ScoreVector score_kthnn(const core::NeighborLists& nbrs, std::size_t k) {
    check_k(nbrs, k, "score_kthnn");
    std::vector<double> scores(nbrs.rows());
    for (std::size_t i = 0; i < nbrs.rows(); ++i) {
        scores[i] = nbrs.distance(i, k - 1);
    }
    return {std::move(scores), "kthnn"};
}

ScoreVector score_knn(const core::NeighborLists& nbrs, std::size_t k) {
    check_k(nbrs, k, "score_knn");
    std::vector<double> scores(nbrs.rows());
    for (std::size_t i = 0; i < nbrs.rows(); ++i) {
        const auto d = nbrs.row_distances(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            sum += d[j];
        }
        scores[i] = sum / static_cast<double>(k);
    }
    return {std::move(scores), "knn"};
}

std::vector<int> score_db_outlier(const core::DistanceMatrix& dist, double delta,
                                  double alpha) {
    if (!dist.closed_world_square()) {
        throw InputError("score_db_outlier: requires a closed-world square matrix");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("score_db_outlier: alpha must lie in [0, 1]");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InputError("score_db_outlier: delta must be a positive real");
    }
    const std::size_t n = dist.rows();
    const double required = alpha * static_cast<double>(n);
    std::vector<int> flags(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t far = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!dist.is_self_pair(i, j) && dist.at(i, j) > delta) {
                ++far;
            }
        }
        flags[i] = static_cast<double>(far) >= required ? 1 : 0;
    }
    return flags;
}

namespace {

// column of the p-th unmasked entry in row i
std::size_t unmasked_column(const core::DistanceMatrix& dist, std::size_t row,
                            std::size_t p) {
    const std::size_t self = dist.self_pair(row);
    return (self == core::DistanceMatrix::npos || p < self) ? p : p + 1;
}

} // namespace

ScoreVector score_kth_isnn(const core::DistanceMatrix& dist, std::size_t k,
                           std::size_t sample_size, std::uint64_t seed) {
    std::size_t candidates = dist.cols();
    for (std::size_t i = 0; i < dist.rows(); ++i) {
        candidates = std::min(candidates, dist.unmasked_in_row(i));
    }
    if (k == 0 || sample_size < k || sample_size > candidates) {
        throw InputError("score_kth_isnn: need 1 <= k <= sample_size <= " +
                         std::to_string(candidates));
    }
    std::vector<double> scores(dist.rows());
    parallel_for(dist.rows(), [&](std::size_t i) {
        std::mt19937_64 gen(rng::derive(seed, i));
        const std::size_t pool = dist.unmasked_in_row(i);
        auto picks = rng::sample_without_replacement(pool, sample_size, gen);
        std::vector<double> values;
        values.reserve(sample_size);
        for (std::size_t p : picks) {
            values.push_back(dist.at(i, unmasked_column(dist, i, p)));
        }
        std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         values.end());
        scores[i] = values[k - 1];
    });
    return {std::move(scores), "kthisnn"};
}

ScoreVector score_snn(const core::DistanceMatrix& dist,
                      std::span<const std::size_t> sample) {
    if (sample.empty()) {
        throw InputError("score_snn: empty sample");
    }
    for (std::size_t j : sample) {
        if (j >= dist.cols()) {
            throw InputError("score_snn: sample index " + std::to_string(j) +
                             " out of range");
        }
    }
    std::vector<double> scores(dist.rows());
    for (std::size_t i = 0; i < dist.rows(); ++i) {
        double best = -1.0;
        for (std::size_t j : sample) {
            if (dist.is_self_pair(i, j)) {
                continue;
            }
            const double v = dist.at(i, j);
            if (best < 0.0 || v < best) {
                best = v;
            }
        }
        if (best < 0.0) {
            throw InputError("score_snn: sample leaves point " + std::to_string(i) +
                             " with no neighbor (self-pair only)");
        }
        scores[i] = best;
    }
    return {std::move(scores), "snn"};
}

ScoreVector score_snn(const core::DistanceMatrix& dist, std::size_t sample_size,
                      std::uint64_t seed) {
    if (sample_size == 0 || sample_size > dist.cols()) {
        throw InputError("score_snn: sample_size must lie in [1, " +
                         std::to_string(dist.cols()) + "]");
    }
    std::mt19937_64 gen(seed);
    const auto sample = rng::sample_without_replacement(dist.cols(), sample_size, gen);
    return score_snn(dist, sample);
}

ScoreVector score_rsnn(const core::DistanceMatrix& dist, std::size_t rounds,
                       std::size_t sample_size, std::uint64_t seed) {
    if (rounds == 0) {
        throw InputError("score_rsnn: need at least one round");
    }
    std::vector<double> scores(dist.rows(), 0.0);
    for (std::size_t r = 0; r < rounds; ++r) {
        const auto round = score_snn(dist, sample_size, rng::derive(seed, r));
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] += round.scores[i];
        }
    }
    for (double& s : scores) {
        s /= static_cast<double>(rounds);
    }
    return {std::move(scores), "rsnn"};
}

ScoreVector score_slof(const core::NeighborLists& query_nbrs,
                       const core::NeighborLists& ref_nbrs, std::size_t k) {
    check_k(query_nbrs, k, "score_slof");
    check_k(ref_nbrs, k, "score_slof");
    std::vector<double> ref_kdist(ref_nbrs.rows());
    for (std::size_t j = 0; j < ref_nbrs.rows(); ++j) {
        ref_kdist[j] = std::max(ref_nbrs.distance(j, k - 1), kDensityFloor);
    }
    std::vector<double> scores(query_nbrs.rows());
    for (std::size_t i = 0; i < query_nbrs.rows(); ++i) {
        double inv_sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t idx = query_nbrs.index(i, j);
            if (idx >= ref_kdist.size()) {
                throw InputError("score_slof: neighbor index out of range");
            }
            inv_sum += 1.0 / ref_kdist[idx];
        }
        const double own = std::max(query_nbrs.distance(i, k - 1), kDensityFloor);
        scores[i] = own * inv_sum / static_cast<double>(k);
    }
    return {std::move(scores), "slof"};
}

ScoreVector score_slof(const core::NeighborLists& nbrs, std::size_t k) {
    return score_slof(nbrs, nbrs, k);
}

namespace {

// inverse mean reachability of each row of `nbrs` against reference kth distances
std::vector<double> reachability_density(const core::NeighborLists& nbrs,
                                         std::span<const double> ref_kdist,
                                         std::size_t k) {
    std::vector<double> lrd(nbrs.rows());
    for (std::size_t i = 0; i < nbrs.rows(); ++i) {
        double reach_sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t idx = nbrs.index(i, j);
            if (idx >= ref_kdist.size()) {
                throw InputError("score_lof: neighbor index out of range");
            }
            reach_sum += std::max(ref_kdist[idx], nbrs.distance(i, j));
        }
        const double mean_reach = reach_sum / static_cast<double>(k);
        lrd[i] = 1.0 / std::max(mean_reach, kDensityFloor);
    }
    return lrd;
}

} // namespace

ScoreVector score_lof(const core::NeighborLists& query_nbrs,
                      const core::NeighborLists& ref_nbrs, std::size_t k) {
    check_k(query_nbrs, k, "score_lof");
    check_k(ref_nbrs, k, "score_lof");
    std::vector<double> ref_kdist(ref_nbrs.rows());
    for (std::size_t j = 0; j < ref_nbrs.rows(); ++j) {
        ref_kdist[j] = ref_nbrs.distance(j, k - 1);
    }
    const auto ref_lrd = reachability_density(ref_nbrs, ref_kdist, k);
    const auto query_lrd = reachability_density(query_nbrs, ref_kdist, k);

    std::vector<double> scores(query_nbrs.rows());
    for (std::size_t i = 0; i < query_nbrs.rows(); ++i) {
        double lrd_sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            lrd_sum += ref_lrd[query_nbrs.index(i, j)];
        }
        scores[i] = lrd_sum / static_cast<double>(k) / query_lrd[i];
    }
    return {std::move(scores), "lof"};
}

ScoreVector score_lof(const core::NeighborLists& nbrs, std::size_t k) {
    return score_lof(nbrs, nbrs, k);
}

} // namespace distprob::detectors
