#include "bbt/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbt/error.hpp"

namespace bbt {

ImageRegion::ImageRegion(int w, int h, int c, float fill)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0) * std::max(c, 0), fill) {}

ImageRegion::ImageRegion(int w, int h, int c, std::vector<float> values)
    : width(w), height(h), channels(c), data(std::move(values)) {
  validate_region(*this);
}

void validate_region(const ImageRegion& region) {
  if (region.width < 0 || region.height < 0) throw InvalidInput("negative region size");
  if (region.channels != 1 && region.channels != 3)
    throw InvalidInput("region must have 1 or 3 channels, got " + std::to_string(region.channels));
  const std::size_t expected =
      static_cast<std::size_t>(region.width) * region.height * region.channels;
  if (region.data.size() != expected)
    throw InvalidInput("region data length " + std::to_string(region.data.size()) +
                       " does not match " + std::to_string(expected));
  for (float v : region.data) {
    if (!(v >= 0.0f && v <= 1.0f)) throw InvalidInput("region values must lie in [0,1]");
  }
}

ImageRegion resize_region(const ImageRegion& source, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) throw InvalidInput("resize target must be at least 1x1");
  if (source.empty()) throw InvalidInput("cannot resize an empty region");
  if (target_w == source.width && target_h == source.height) return source;

  ImageRegion out(target_w, target_h, source.channels);
  const auto src_coord = [](int dst, int dst_n, int src_n) {
    if (dst_n == 1) return 0.5 * (src_n - 1);
    return static_cast<double>(dst) * (src_n - 1) / (dst_n - 1);
  };
  for (int y = 0; y < target_h; ++y) {
    const double sy = src_coord(y, target_h, source.height);
    const int y0 = std::min(static_cast<int>(sy), source.height - 1);
    const int y1 = std::min(y0 + 1, source.height - 1);
    const double fy = sy - y0;
    for (int x = 0; x < target_w; ++x) {
      const double sx = src_coord(x, target_w, source.width);
      const int x0 = std::min(static_cast<int>(sx), source.width - 1);
      const int x1 = std::min(x0 + 1, source.width - 1);
      const double fx = sx - x0;
      for (int c = 0; c < source.channels; ++c) {
        const double top = (1.0 - fx) * source.at(x0, y0, c) + fx * source.at(x1, y0, c);
        const double bottom = (1.0 - fx) * source.at(x0, y1, c) + fx * source.at(x1, y1, c);
        const double v = (1.0 - fy) * top + fy * bottom;
        out.at(x, y, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return out;
}

PixelRect pixel_rect(const BoundingBox& box, int frame_w, int frame_h) {
  const long x0 = std::lround(box.x);
  const long y0 = std::lround(box.y);
  const long x1 = x0 + std::lround(box.w);
  const long y1 = y0 + std::lround(box.h);
  const long cx0 = std::clamp<long>(x0, 0, frame_w);
  const long cy0 = std::clamp<long>(y0, 0, frame_h);
  const long cx1 = std::clamp<long>(x1, 0, frame_w);
  const long cy1 = std::clamp<long>(y1, 0, frame_h);
  return PixelRect{static_cast<int>(cx0), static_cast<int>(cy0),
                   static_cast<int>(std::max(0L, cx1 - cx0)),
                   static_cast<int>(std::max(0L, cy1 - cy0))};
}

ImageRegion crop_region(const ImageRegion& frame, const BoundingBox& box) {
  const PixelRect r = pixel_rect(box, frame.width, frame.height);
  if (r.w < 1 || r.h < 1) throw FrameError("crop box lies outside the frame");
  ImageRegion out(r.w, r.h, frame.channels);
  const std::size_t row_len = static_cast<std::size_t>(r.w) * frame.channels;
  for (int y = 0; y < r.h; ++y) {
    const auto src = frame.data.begin() + static_cast<std::ptrdiff_t>(frame.index(r.x, r.y + y));
    std::copy(src, src + static_cast<std::ptrdiff_t>(row_len),
              out.data.begin() + static_cast<std::ptrdiff_t>(out.index(0, y)));
  }
  return out;
}

}  // namespace bbt
