#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bbt/bbs.hpp"

namespace bbt::synth {

struct Gaussian2 {
  std::array<double, 2> mean{0.0, 0.0};
  /// Row-major 2x2 covariance, symmetric positive-definite.
  std::array<double, 4> cov{1.0, 0.0, 0.0, 1.0};
};

struct GmmComponent {
  Gaussian2 gaussian;
  double weight = 1.0;
};

struct GmmSpec {
  std::vector<GmmComponent> components;

  /// Throws InvalidInput unless weights are nonnegative, sum to 1 (1e-9) and
  /// every covariance is SPD.
  void validate() const;
  static GmmSpec two_component(const Gaussian2& a, const Gaussian2& b, double weight_a = 0.5);
};

/// n i.i.d. draws; points carry the 2D sample as appearance and location (0,0).
PointSet sample_gmm(const GmmSpec& spec, std::size_t n, Rng& rng);

struct BiasParams {
  Gaussian2 foreground{{0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}};
  Gaussian2 background_p{{4.0, 0.0}, {1.0, 0.0, 0.0, 1.0}};
  Gaussian2 background_q{{-4.0, 0.0}, {1.0, 0.0, 0.0, 1.0}};
  std::size_t base_n = 200;
  std::vector<double> ratios{1, 2, 5, 10, 50};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
};

enum class Strategy { None, RandomSample, Cluster, Baseline };
inline constexpr std::array<Strategy, 4> kAllStrategies{Strategy::None, Strategy::RandomSample,
                                                        Strategy::Cluster, Strategy::Baseline};
std::string to_string(Strategy s);

struct CurvePoint {
  double ratio = 0.0;
  Strategy strategy = Strategy::None;
  double mean = 0.0;
  double std = 0.0;
  std::size_t trials = 0;
};

/// One row per (ratio, strategy); means of BBS for Curve, seconds for timing.
struct BiasCurve {
  std::vector<CurvePoint> points;
  const CurvePoint& at(double ratio, Strategy s) const;
};

/// For each ratio r and trial: P ~ (fg, bgP) of size base_n, Q ~ (fg, bgQ) of
/// size round(r * base_n), and an equal-size baseline Q' of size base_n.
BiasCurve run_bias_experiment(const BiasParams& params);

struct TimingParams {
  BiasParams sweep;
  std::size_t repetitions = 5;
};

/// Per (ratio, strategy): median over repetitions of the mean wall-clock
/// seconds of one bbs_with_strategy call. Set generation is not timed.
BiasCurve run_timing_experiment(const TimingParams& params);

struct ConvergenceParams {
  GmmSpec gmm;  // shared by P and Q; empty means the default (fg, bgP) mixture
  std::size_t p_size = 20;
  std::vector<std::size_t> q_sizes{20, 1000, 100000};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
};

struct ConvergenceRow {
  std::size_t q_size = 0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t trials = 0;
};

/// Mean BBS of a fixed-size P against growing Q drawn from the same mixture.
std::vector<ConvergenceRow> verify_convergence_claim(const ConvergenceParams& params);

GmmSpec default_mixture_p(const BiasParams& params = {});
GmmSpec default_mixture_q(const BiasParams& params = {});

}  // namespace bbt::synth
