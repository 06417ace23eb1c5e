#include "bbt/config.hpp"

#include <charconv>
#include <fstream>
#include <iterator>

#include "bbt/ensemble.hpp"
#include "bbt/error.hpp"

namespace bbt {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw InvalidInput("config key '" + std::string(key) + "': '" + std::string(value) +
                     "' is not " + expected);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string_view v = trim(text);
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
    bad_value(key, text, std::is_integral_v<T> ? "an integer" : "a number");
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    if (v.front() == '-') bad_value(key, text, "a nonnegative integer");
  }
  return out;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::string_view v = trim(text);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad_value(key, text, "a [..] list");
  v = v.substr(1, v.size() - 2);
  std::vector<T> out;
  while (!trim(v).empty()) {
    const std::size_t comma = v.find(',');
    out.push_back(parse_number<T>(key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  TrackerConfig& t = tracker;
  if (key == "patch_size") t.patch_size = parse_number<int>(key, value);
  else if (key == "lambda") t.lambda = parse_number<double>(key, value);
  else if (key == "buffer_size") t.buffer_capacity = parse_number<std::size_t>(key, value);
  else if (key == "templates_per_frame") t.templates_per_frame = parse_number<std::size_t>(key, value);
  else if (key == "gamma1") t.gamma1 = parse_number<double>(key, value);
  else if (key == "f1") t.f1 = parse_number<int>(key, value);
  else if (key == "gamma2") t.gamma2 = parse_number<double>(key, value);
  else if (key == "f2") t.f2 = parse_number<int>(key, value);
  else if (key == "particles") t.n_particles = parse_number<std::size_t>(key, value);
  else if (key == "sample_points") t.k_sample = parse_number<std::size_t>(key, value);
  else if (key == "pos_sigma_frac") t.motion.pos_sigma_frac = parse_number<double>(key, value);
  else if (key == "fb_radius_frac") t.fb_grid.radius_frac = parse_number<double>(key, value);
  else if (key == "fb_steps") t.fb_grid.steps = parse_number<int>(key, value);
  else if (key == "scales") scales = parse_list<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "synth_base_n") synth.base_n = parse_number<std::size_t>(key, value);
  else if (key == "synth_ratios") synth.ratios = parse_list<double>(key, value);
  else if (key == "synth_trials") synth.trials = parse_number<std::size_t>(key, value);
  else if (key == "synth_timing_trials") synth.timing_trials = parse_number<std::size_t>(key, value);
  else if (key == "synth_timing_repetitions") synth.timing_repetitions = parse_number<std::size_t>(key, value);
  else if (key == "synth_convergence_p") synth.convergence_p = parse_number<std::size_t>(key, value);
  else if (key == "synth_convergence_q_sizes") synth.convergence_q_sizes = parse_list<std::size_t>(key, value);
  else if (key == "synth_convergence_trials") synth.convergence_trials = parse_number<std::size_t>(key, value);
  else throw InvalidInput("unknown config key '" + std::string(key) + "'");
}

void RunConfig::apply_override(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) throw InvalidInput("override '" + std::string(assignment) + "' is not key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::load_text(std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    try {
      apply_override(line);
    } catch (const InvalidInput& e) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read config file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  load_text(text);
}

void RunConfig::validate() const {
  tracker.validate();
  if (scales.empty()) throw InvalidInput("scales must list at least one tracker");
  for (double s : scales) {
    if (!(s >= 0.0)) throw InvalidInput("scales must be nonnegative");
  }
  if (synth.base_n < 1 || synth.trials < 1 || synth.timing_trials < 1 || synth.timing_repetitions < 1 ||
      synth.convergence_p < 1 || synth.convergence_trials < 1)
    throw InvalidInput("synthetic sizes, trials and repetitions must be >= 1");
  if (synth.ratios.empty() || synth.convergence_q_sizes.empty())
    throw InvalidInput("synthetic sweeps must not be empty");
}

std::vector<TrackerConfig> RunConfig::ensemble() const { return ensemble_configs(tracker, scales); }

nlohmann::ordered_json RunConfig::to_json() const {
  const TrackerConfig& t = tracker;
  return nlohmann::ordered_json{
      {"patch_size", t.patch_size},
      {"lambda", t.lambda},
      {"buffer_size", t.buffer_capacity},
      {"templates_per_frame", t.templates_per_frame},
      {"gamma1", t.gamma1},
      {"f1", t.f1},
      {"gamma2", t.gamma2},
      {"f2", t.f2},
      {"particles", t.n_particles},
      {"sample_points", t.k_sample},
      {"pos_sigma_frac", t.motion.pos_sigma_frac},
      {"fb_radius_frac", t.fb_grid.radius_frac},
      {"fb_steps", t.fb_grid.steps},
      {"scales", scales},
      {"seed", seed},
      {"synth_base_n", synth.base_n},
      {"synth_ratios", synth.ratios},
      {"synth_trials", synth.trials},
      {"synth_timing_trials", synth.timing_trials},
      {"synth_timing_repetitions", synth.timing_repetitions},
      {"synth_convergence_p", synth.convergence_p},
      {"synth_convergence_q_sizes", synth.convergence_q_sizes},
      {"synth_convergence_trials", synth.convergence_trials},
  };
}

}  // namespace bbt
