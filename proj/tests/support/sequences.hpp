#pragma once

// Synthetic image sequences with known ground truth.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "bbt/evaluation.hpp"

namespace bbt::test {

struct SyntheticSequence {
  std::vector<ImageRegion> frames;
  std::vector<BoundingBox> ground_truth;
};

inline ImageRegion noise_frame(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  ImageRegion f(w, h, 1);
  for (auto& v : f.data) v = u(rng);
  return f;
}

/// Smooth random texture: a coarse noise grid (one cell per 8 px) upsampled
/// bilinearly, so nearby patches look alike.
inline ImageRegion smooth_texture(int side, std::mt19937_64& rng) {
  const int cells = std::max(2, side / 8 + 1);
  return resize_region(noise_frame(cells, cells, rng), side, side);
}

/// A fixed smooth texture of side `side` moving `speed` px/frame to the right
/// over a fresh uniform-noise background each frame.
inline SyntheticSequence translating_square(int frames, int side = 40, int speed = 5,
                                            std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  const int margin = 12;
  const int w = 2 * margin + side + speed * (frames - 1);
  const int h = side + 2 * margin;
  const ImageRegion texture = smooth_texture(side, rng);
  SyntheticSequence seq;
  for (int t = 0; t < frames; ++t) {
    ImageRegion f = noise_frame(w, h, rng);
    const int x0 = margin + speed * t;
    const int y0 = margin;
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) f.at(x0 + x, y0 + y) = texture.at(x, y);
    seq.frames.push_back(std::move(f));
    seq.ground_truth.push_back({static_cast<double>(x0), static_cast<double>(y0), double(side), double(side)});
  }
  return seq;
}

/// The same noise frame repeated; ground truth never moves.
inline SyntheticSequence static_sequence(int frames, int w = 64, int h = 64, BoundingBox box = {16, 16, 24, 24},
                                         std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  const ImageRegion frame = noise_frame(w, h, rng);
  SyntheticSequence seq;
  for (int t = 0; t < frames; ++t) {
    seq.frames.push_back(frame);
    seq.ground_truth.push_back(box);
  }
  return seq;
}

/// Writes the sequence as an OTB directory (img/0001.png..., 1-based ground truth).
inline void write_otb_sequence(const std::filesystem::path& dir, const SyntheticSequence& seq) {
  std::filesystem::create_directories(dir / "img");
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "%04zu.png", t + 1);
    save_frame(dir / "img" / name, seq.frames[t]);
  }
  std::ofstream gt(dir / "groundtruth_rect.txt");
  gt << format_ground_truth(seq.ground_truth);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bbt_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace bbt::test
