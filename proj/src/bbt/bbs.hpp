#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "bbt/embedding.hpp"
#include "bbt/random.hpp"

namespace bbt {

/// Fraction of best-buddies pairs, normalized by the smaller set size.
struct BbsScore {
  double value = 0.0;
  std::size_t pair_count = 0;
  std::size_t normalizer = 0;

  friend bool operator==(const BbsScore&, const BbsScore&) = default;
};

namespace strategy {
struct None {};
struct RandomSample {
  std::size_t k = 1;
};
struct Cluster {};
}  // namespace strategy

using EqualizationStrategy =
    std::variant<strategy::None, strategy::RandomSample, strategy::Cluster>;

/// Index of the closest point of q (point_distance); ties go to the lowest index.
std::size_t nearest_neighbor(const FeaturePoint& p, const PointSet& q, double lambda);

/// Best-buddies similarity. Each pairwise distance is evaluated exactly once;
/// both nearest-neighbor directions are reduced from that single sweep with
/// lowest-index tie breaking.
BbsScore compute_bbs(const PointSet& p, const PointSet& q, double lambda);

/// Mutual nearest-neighbor pairs (i, j) in increasing i.
std::vector<std::pair<std::size_t, std::size_t>> best_buddy_pairs(const PointSet& p,
                                                                  const PointSet& q,
                                                                  double lambda);

/// k indices drawn uniformly without replacement from [0, n), in increasing order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng);

/// Draws k points from each set uniformly without replacement.
std::pair<PointSet, PointSet> equalize_random(const PointSet& p, const PointSet& q,
                                              std::size_t k, Rng& rng);

struct KMeansOptions {
  std::size_t max_iterations = 50;
};

/// Lloyd's k-means under point_distance with k-means++ seeding. Returns
/// the cluster centers; empty clusters keep their previous center.
PointSet kmeans_centers(const PointSet& points, std::size_t k, double lambda, Rng& rng,
                        KMeansOptions options = {});

/// Replaces the larger set by k-means centers, k = size of the smaller set.
std::pair<PointSet, PointSet> equalize_cluster(const PointSet& p, const PointSet& q,
                                               double lambda, Rng& rng);

BbsScore bbs_with_strategy(const PointSet& p, const PointSet& q,
                           const EqualizationStrategy& strategy, double lambda, Rng& rng);

}  // namespace bbt
