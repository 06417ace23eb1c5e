#include "bbt/bbs.hpp"

#include <algorithm>
#include <limits>
#include <iterator>
#include <numeric>
#include <string>

#include "bbt/error.hpp"

namespace bbt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_compatible(const PointSet& p, const PointSet& q, const char* what) {
  if (p.empty() || q.empty()) throw InvalidInput(std::string(what) + ": point sets must be nonempty");
  if (p.dim() != q.dim())
    throw InvalidInput(std::string(what) + ": dimensionality mismatch (" + std::to_string(p.dim()) +
                       " vs " + std::to_string(q.dim()) + ")");
}

struct NearestNeighbors {
  std::vector<std::size_t> p_to_q;
  std::vector<std::size_t> q_to_p;
};

// One sweep over the N x M distance matrix. Rows are visited in increasing i
// and columns in increasing j, and only a strictly smaller distance replaces
// the running minimum, which yields lowest-index tie breaking both ways.
NearestNeighbors mutual_nearest(const PointSet& p, const PointSet& q, double lambda) {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  const std::size_t dim = p.dim();
  const double* pa = p.appearance_data().data();
  const double* pl = p.location_data().data();
  const double* qa = q.appearance_data().data();
  const double* ql = q.location_data().data();

  NearestNeighbors nn{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(m, 0)};
  std::vector<double> col_best(m, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = pa + i * dim;
    const double lx = pl[2 * i];
    const double ly = pl[2 * i + 1];
    double row_best = kInf;
    std::size_t row_arg = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double* b = qa + j * dim;
      double app = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        const double diff = a[t] - b[t];
        app += diff * diff;
      }
      const double dx = lx - ql[2 * j];
      const double dy = ly - ql[2 * j + 1];
      const double dist = app + lambda * (dx * dx + dy * dy);
      if (dist < row_best) {
        row_best = dist;
        row_arg = j;
      }
      if (dist < col_best[j]) {
        col_best[j] = dist;
        nn.q_to_p[j] = i;
      }
    }
    nn.p_to_q[i] = row_arg;
  }
  return nn;
}

}  // namespace

std::size_t nearest_neighbor(const FeaturePoint& p, const PointSet& q, double lambda) {
  if (q.empty()) throw InvalidInput("nearest_neighbor: empty point set");
  if (p.appearance.size() != q.dim()) throw InvalidInput("nearest_neighbor: dimensionality mismatch");
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double d = point_distance(p.appearance, p.location, q.appearance(j), q.location(j), lambda);
    if (d < best) {
      best = d;
      arg = j;
    }
  }
  return arg;
}

std::vector<std::pair<std::size_t, std::size_t>> best_buddy_pairs(const PointSet& p,
                                                                  const PointSet& q,
                                                                  double lambda) {
  require_compatible(p, q, "best_buddy_pairs");
  const NearestNeighbors nn = mutual_nearest(p, q, lambda);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < nn.p_to_q.size(); ++i) {
    const std::size_t j = nn.p_to_q[i];
    if (nn.q_to_p[j] == i) pairs.emplace_back(i, j);
  }
  return pairs;
}

BbsScore compute_bbs(const PointSet& p, const PointSet& q, double lambda) {
  require_compatible(p, q, "compute_bbs");
  const NearestNeighbors nn = mutual_nearest(p, q, lambda);
  std::size_t count = 0;
  for (std::size_t i = 0; i < nn.p_to_q.size(); ++i) {
    if (nn.q_to_p[nn.p_to_q[i]] == i) ++count;
  }
  const std::size_t normalizer = std::min(p.size(), q.size());
  return BbsScore{static_cast<double>(count) / static_cast<double>(normalizer), count, normalizer};
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw InvalidInput("cannot sample " + std::to_string(k) + " of " + std::to_string(n));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(k), rng);
  return out;
}

std::pair<PointSet, PointSet> equalize_random(const PointSet& p, const PointSet& q,
                                              std::size_t k, Rng& rng) {
  if (k < 1 || k > std::min(p.size(), q.size()))
    throw InvalidInput("equalize_random: K=" + std::to_string(k) + " outside [1, " +
                       std::to_string(std::min(p.size(), q.size())) + "]");
  const auto pi = sample_indices(p.size(), k, rng);
  const auto qi = sample_indices(q.size(), k, rng);
  return {p.subset(pi), q.subset(qi)};
}

PointSet kmeans_centers(const PointSet& points, std::size_t k, double lambda, Rng& rng,
                        KMeansOptions options) {
  const std::size_t n = points.size();
  if (k < 1 || k > n) throw InvalidInput("kmeans: k must lie in [1, n]");
  const std::size_t dim = points.dim();

  auto dist_to = [&](std::size_t i, std::span<const double> ca, std::array<double, 2> cl) {
    return point_distance(points.appearance(i), points.location(i), ca, cl, lambda);
  };

  // k-means++ seeding.
  std::vector<std::size_t> seeds;
  seeds.reserve(k);
  seeds.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> d2(n, kInf);
  while (seeds.size() < k) {
    const std::size_t last = seeds.back();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], dist_to(i, points.appearance(last), points.location(last)));
      total += d2[i];
    }
    std::size_t next = 0;
    if (total > 0.0) {
      const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      next = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          next = i;
          break;
        }
      }
    } else {
      next = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    seeds.push_back(next);
  }

  std::vector<double> app(k * dim);
  std::vector<double> loc(2 * k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto a = points.appearance(seeds[c]);
    std::copy(a.begin(), a.end(), app.begin() + static_cast<std::ptrdiff_t>(c * dim));
    const auto l = points.location(seeds[c]);
    loc[2 * c] = l[0];
    loc[2 * c + 1] = l[1];
  }

  std::vector<std::size_t> assign(n, k);
  std::vector<double> sum_app(k * dim);
  std::vector<double> sum_loc(2 * k);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInf;
      std::size_t arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d = dist_to(i, {app.data() + c * dim, dim}, {loc[2 * c], loc[2 * c + 1]});
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      if (assign[i] != arg) {
        assign[i] = arg;
        changed = true;
      }
    }
    if (!changed) break;

    std::fill(sum_app.begin(), sum_app.end(), 0.0);
    std::fill(sum_loc.begin(), sum_loc.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = assign[i];
      const auto a = points.appearance(i);
      for (std::size_t t = 0; t < dim; ++t) sum_app[c * dim + t] += a[t];
      const auto l = points.location(i);
      sum_loc[2 * c] += l[0];
      sum_loc[2 * c + 1] += l[1];
      ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t t = 0; t < dim; ++t) app[c * dim + t] = sum_app[c * dim + t] * inv;
      loc[2 * c] = sum_loc[2 * c] * inv;
      loc[2 * c + 1] = sum_loc[2 * c + 1] * inv;
    }
  }

  PointSet centers(dim);
  centers.reserve(k);
  for (std::size_t c = 0; c < k; ++c)
    centers.push_back({app.data() + c * dim, dim}, {loc[2 * c], loc[2 * c + 1]});
  return centers;
}

std::pair<PointSet, PointSet> equalize_cluster(const PointSet& p, const PointSet& q,
                                               double lambda, Rng& rng) {
  require_compatible(p, q, "equalize_cluster");
  if (p.size() == q.size()) return {p, q};
  if (p.size() > q.size()) return {kmeans_centers(p, q.size(), lambda, rng), q};
  return {p, kmeans_centers(q, p.size(), lambda, rng)};
}

BbsScore bbs_with_strategy(const PointSet& p, const PointSet& q,
                           const EqualizationStrategy& strategy, double lambda, Rng& rng) {
  struct Visitor {
    const PointSet& p;
    const PointSet& q;
    double lambda;
    Rng& rng;

    BbsScore operator()(strategy::None) const { return compute_bbs(p, q, lambda); }
    BbsScore operator()(strategy::RandomSample s) const {
      auto [ps, qs] = equalize_random(p, q, s.k, rng);
      return compute_bbs(ps, qs, lambda);
    }
    BbsScore operator()(strategy::Cluster) const {
      auto [pc, qc] = equalize_cluster(p, q, lambda, rng);
      return compute_bbs(pc, qc, lambda);
    }
  };
  return std::visit(Visitor{p, q, lambda, rng}, strategy);
}

}  // namespace bbt
