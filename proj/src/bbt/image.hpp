#pragma once

#include <cstddef>
#include <vector>

#include "bbt/box.hpp"

namespace bbt {

/// Row-major, channel-interleaved raster with values in [0,1].
struct ImageRegion {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> data;

  ImageRegion() = default;
  ImageRegion(int w, int h, int c, float fill = 0.0f);
  ImageRegion(int w, int h, int c, std::vector<float> values);

  bool empty() const { return width == 0 || height == 0; }
  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  float at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
  float& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }

  friend bool operator==(const ImageRegion&, const ImageRegion&) = default;
};

/// Checks shape consistency and the [0,1] value range; throws InvalidInput.
void validate_region(const ImageRegion& region);

/// Bilinear resize with corner-aligned sampling (first and last pixels map
/// onto each other), so an identity resize is exact.
ImageRegion resize_region(const ImageRegion& source, int target_w, int target_h);

/// Integer pixel rectangle covered by a box after rounding and clipping to the
/// frame. Width or height is zero when the box lies outside the frame.
struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};
PixelRect pixel_rect(const BoundingBox& box, int frame_w, int frame_h);

/// Copies the pixels under a box. Throws FrameError if nothing remains after
/// clipping.
ImageRegion crop_region(const ImageRegion& frame, const BoundingBox& box);

}  // namespace bbt
