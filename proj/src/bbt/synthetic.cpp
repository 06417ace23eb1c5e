#include "bbt/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bbt/error.hpp"

namespace bbt::synth {
namespace {

struct Cholesky2 {
  double l11, l21, l22;
};

Cholesky2 cholesky(const std::array<double, 4>& c) {
  const double l11 = std::sqrt(c[0]);
  const double l21 = c[2] / l11;
  return {l11, l21, std::sqrt(c[3] - l21 * l21)};
}

bool is_spd(const std::array<double, 4>& c) {
  const bool symmetric = std::abs(c[1] - c[2]) <= 1e-12 * std::max(1.0, std::abs(c[1]));
  return symmetric && c[0] > 0.0 && c[0] * c[3] - c[1] * c[2] > 0.0;
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats summarize(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t scaled_size(double ratio, std::size_t base_n) {
  if (!(ratio > 0.0)) throw InvalidInput("set-size ratios must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(base_n))));
}

void validate(const BiasParams& p) {
  if (p.trials < 1) throw InvalidInput("trials must be at least 1");
  if (p.base_n < 1) throw InvalidInput("base_n must be at least 1");
  if (p.ratios.empty()) throw InvalidInput("at least one ratio is required");
  for (double r : p.ratios) {
    if (scaled_size(r, p.base_n) < p.base_n)
      throw InvalidInput("ratios must be >= 1 so that |Q| >= |P|");
  }
}

struct TrialSets {
  PointSet p, q, q_baseline;
};

TrialSets draw_trial(const BiasParams& params, const GmmSpec& fp, const GmmSpec& fq,
                     std::size_t q_size, Rng& rng) {
  TrialSets s;
  s.p = sample_gmm(fp, params.base_n, rng);
  s.q = sample_gmm(fq, q_size, rng);
  s.q_baseline = sample_gmm(fq, params.base_n, rng);
  return s;
}

BbsScore run_strategy(Strategy strategy, const TrialSets& sets, std::size_t base_n, Rng& rng) {
  constexpr double kLambda = 0.0;  // locations are all (0,0) in 2D experiments
  switch (strategy) {
    case Strategy::None:
      return bbs_with_strategy(sets.p, sets.q, strategy::None{}, kLambda, rng);
    case Strategy::RandomSample:
      return bbs_with_strategy(sets.p, sets.q, strategy::RandomSample{base_n}, kLambda, rng);
    case Strategy::Cluster:
      return bbs_with_strategy(sets.p, sets.q, strategy::Cluster{}, kLambda, rng);
    case Strategy::Baseline:
      return bbs_with_strategy(sets.p, sets.q_baseline, strategy::None{}, kLambda, rng);
  }
  throw InvalidInput("unknown strategy");
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::None: return "none";
    case Strategy::RandomSample: return "random_sample";
    case Strategy::Cluster: return "cluster";
    case Strategy::Baseline: return "baseline";
  }
  return "unknown";
}

void GmmSpec::validate() const {
  if (components.empty()) throw InvalidInput("GMM needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (c.weight < 0.0) throw InvalidInput("GMM weights must be nonnegative");
    if (!is_spd(c.gaussian.cov)) throw InvalidInput("GMM covariance must be symmetric positive-definite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("GMM weights must sum to 1");
}

GmmSpec GmmSpec::two_component(const Gaussian2& a, const Gaussian2& b, double weight_a) {
  return GmmSpec{{GmmComponent{a, weight_a}, GmmComponent{b, 1.0 - weight_a}}};
}

PointSet sample_gmm(const GmmSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  std::vector<double> weights;
  std::vector<Cholesky2> factors;
  for (const auto& c : spec.components) {
    weights.push_back(c.weight);
    factors.push_back(cholesky(c.gaussian.cov));
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);

  PointSet out(2);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = pick(rng);
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const auto& m = spec.components[c].gaussian.mean;
    const auto& f = factors[c];
    const std::array<double, 2> v{m[0] + f.l11 * z1, m[1] + f.l21 * z1 + f.l22 * z2};
    out.push_back(v, {0.0, 0.0});
  }
  return out;
}

GmmSpec default_mixture_p(const BiasParams& params) {
  return GmmSpec::two_component(params.foreground, params.background_p);
}

GmmSpec default_mixture_q(const BiasParams& params) {
  return GmmSpec::two_component(params.foreground, params.background_q);
}

const CurvePoint& BiasCurve::at(double ratio, Strategy s) const {
  for (const auto& p : points) {
    if (p.ratio == ratio && p.strategy == s) return p;
  }
  throw InvalidInput("no curve point for the requested ratio/strategy");
}

BiasCurve run_bias_experiment(const BiasParams& params) {
  validate(params);
  const GmmSpec fp = default_mixture_p(params);
  const GmmSpec fq = default_mixture_q(params);
  BiasCurve curve;
  for (std::size_t ri = 0; ri < params.ratios.size(); ++ri) {
    const double ratio = params.ratios[ri];
    const std::size_t q_size = scaled_size(ratio, params.base_n);
    std::array<std::vector<double>, kAllStrategies.size()> scores;
    for (std::size_t t = 0; t < params.trials; ++t) {
      Rng rng(derive_seed(params.seed, {ri, t}));
      const TrialSets sets = draw_trial(params, fp, fq, q_size, rng);
      for (std::size_t s = 0; s < kAllStrategies.size(); ++s)
        scores[s].push_back(run_strategy(kAllStrategies[s], sets, params.base_n, rng).value);
    }
    for (std::size_t s = 0; s < kAllStrategies.size(); ++s) {
      const Stats st = summarize(scores[s]);
      curve.points.push_back({ratio, kAllStrategies[s], st.mean, st.std, params.trials});
    }
  }
  return curve;
}

BiasCurve run_timing_experiment(const TimingParams& params) {
  validate(params.sweep);
  if (params.repetitions < 1) throw InvalidInput("timing needs at least one repetition");
  const BiasParams& sweep = params.sweep;
  const GmmSpec fp = default_mixture_p(sweep);
  const GmmSpec fq = default_mixture_q(sweep);
  BiasCurve curve;
  for (std::size_t ri = 0; ri < sweep.ratios.size(); ++ri) {
    const double ratio = sweep.ratios[ri];
    const std::size_t q_size = scaled_size(ratio, sweep.base_n);
    std::vector<TrialSets> sets;
    for (std::size_t t = 0; t < sweep.trials; ++t) {
      Rng rng(derive_seed(sweep.seed, {ri, t}));
      sets.push_back(draw_trial(sweep, fp, fq, q_size, rng));
    }
    for (Strategy strategy : kAllStrategies) {
      std::vector<double> per_call;
      volatile double sink = 0.0;
      for (std::size_t rep = 0; rep < params.repetitions; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t t = 0; t < sets.size(); ++t) {
          Rng rng(derive_seed(sweep.seed, {ri, t, 1}));
          sink = sink + run_strategy(strategy, sets[t], sweep.base_n, rng).value;
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        per_call.push_back(elapsed.count() / static_cast<double>(sets.size()));
      }
      const Stats st = summarize(per_call);
      curve.points.push_back({ratio, strategy, median(per_call), st.std, sweep.trials});
    }
  }
  return curve;
}

std::vector<ConvergenceRow> verify_convergence_claim(const ConvergenceParams& params) {
  if (params.trials < 1) throw InvalidInput("trials must be at least 1");
  if (params.p_size < 1) throw InvalidInput("|P| must be at least 1");
  const GmmSpec gmm = params.gmm.components.empty() ? default_mixture_p() : params.gmm;
  std::vector<ConvergenceRow> rows;
  for (std::size_t qi = 0; qi < params.q_sizes.size(); ++qi) {
    const std::size_t m = params.q_sizes[qi];
    if (m < 1) throw InvalidInput("|Q| must be at least 1");
    std::vector<double> scores;
    for (std::size_t t = 0; t < params.trials; ++t) {
      Rng rng(derive_seed(params.seed, {qi, t}));
      const PointSet p = sample_gmm(gmm, params.p_size, rng);
      const PointSet q = sample_gmm(gmm, m, rng);
      scores.push_back(compute_bbs(p, q, 0.0).value);
    }
    const Stats st = summarize(scores);
    rows.push_back({m, st.mean, st.std, params.trials});
  }
  return rows;
}

}  // namespace bbt::synth
