#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bbt/box.hpp"
#include "bbt/random.hpp"

namespace bbt {

inline constexpr double kMinBoxSide = 8.0;

struct MotionModel {
  /// Position noise standard deviation as a fraction of the box side.
  double pos_sigma_frac = 0.05;
  /// Standard deviation of the log scale change per frame.
  double scale_sigma = 0.0;
};

struct ParticleCloud {
  std::vector<BoundingBox> particles;
  std::vector<double> weights;

  std::size_t size() const { return particles.size(); }
};

ParticleCloud init_particles(const BoundingBox& box, std::size_t n);

/// Gaussian random walk on position, log-normal scale change about the box
/// center, then clamping into the frame (minimum side kMinBoxSide). Every
/// particle consumes exactly three normal draws regardless of the sigmas.
ParticleCloud propagate(ParticleCloud cloud, const MotionModel& model, int frame_w, int frame_h,
                        Rng& rng);

/// Weights proportional to exp(score), normalized.
ParticleCloud weigh(ParticleCloud cloud, std::span<const double> scores);

/// Index of the largest weight; ties go to the lowest index.
std::size_t map_index(const ParticleCloud& cloud);
BoundingBox map_estimate(const ParticleCloud& cloud);

/// Systematic resampling with stratified positions u + i/n, u ~ U[0, 1/n).
/// Output weights are uniform.
ParticleCloud resample(const ParticleCloud& cloud, Rng& rng);

/// Weighted mean width and height of the cloud.
std::pair<double, double> mean_particle_size(const ParticleCloud& cloud);

}  // namespace bbt
