#include "bbt/particle_filter.hpp"

#include <cmath>
#include <string>

#include "bbt/error.hpp"

namespace bbt {

ParticleCloud init_particles(const BoundingBox& box, std::size_t n) {
  if (n < 1) throw InvalidInput("particle count must be at least 1");
  if (!(box.w > 0.0 && box.h > 0.0)) throw InvalidInput("initial box must have positive size");
  return ParticleCloud{std::vector<BoundingBox>(n, box),
                       std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

ParticleCloud propagate(ParticleCloud cloud, const MotionModel& model, int frame_w, int frame_h,
                        Rng& rng) {
  if (frame_w < 1 || frame_h < 1) throw InvalidInput("frame dimensions must be positive");
  if (model.pos_sigma_frac < 0.0 || model.scale_sigma < 0.0)
    throw InvalidInput("motion noise must be nonnegative");
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& b : cloud.particles) {
    const double zx = normal(rng);
    const double zy = normal(rng);
    const double zs = normal(rng);
    b.x += zx * model.pos_sigma_frac * b.w;
    b.y += zy * model.pos_sigma_frac * b.h;
    const double s = std::exp(zs * model.scale_sigma);
    const double cx = b.center_x();
    const double cy = b.center_y();
    b.w *= s;
    b.h *= s;
    b.x = cx - 0.5 * b.w;
    b.y = cy - 0.5 * b.h;
    b = clamp_to_frame(b, frame_w, frame_h, kMinBoxSide);
  }
  return cloud;
}

ParticleCloud weigh(ParticleCloud cloud, std::span<const double> scores) {
  if (scores.size() != cloud.size())
    throw InvalidInput("weigh: " + std::to_string(scores.size()) + " scores for " +
                       std::to_string(cloud.size()) + " particles");
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) throw InvalidInput("weigh: scores must lie in [0,1]");
    cloud.weights[i] = std::exp(scores[i]);
    total += cloud.weights[i];
  }
  for (double& w : cloud.weights) w /= total;
  return cloud;
}

std::size_t map_index(const ParticleCloud& cloud) {
  if (cloud.size() == 0) throw InvalidInput("map_estimate: empty cloud");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cloud.size(); ++i) {
    if (cloud.weights[i] > cloud.weights[best]) best = i;
  }
  return best;
}

BoundingBox map_estimate(const ParticleCloud& cloud) { return cloud.particles[map_index(cloud)]; }

ParticleCloud resample(const ParticleCloud& cloud, Rng& rng) {
  const std::size_t n = cloud.size();
  if (n == 0) throw InvalidInput("resample: empty cloud");
  const double step = 1.0 / static_cast<double>(n);
  const double u = std::uniform_real_distribution<double>(0.0, step)(rng);

  ParticleCloud out;
  out.particles.reserve(n);
  out.weights.assign(n, step);
  std::size_t j = 0;
  double cumulative = cloud.weights[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double position = u + static_cast<double>(i) * step;
    while (position >= cumulative && j + 1 < n) cumulative += cloud.weights[++j];
    out.particles.push_back(cloud.particles[j]);
  }
  return out;
}

std::pair<double, double> mean_particle_size(const ParticleCloud& cloud) {
  double w = 0.0, h = 0.0, total = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    w += cloud.weights[i] * cloud.particles[i].w;
    h += cloud.weights[i] * cloud.particles[i].h;
    total += cloud.weights[i];
  }
  if (total <= 0.0) throw InvalidInput("mean_particle_size: weights sum to zero");
  return {w / total, h / total};
}

}  // namespace bbt
