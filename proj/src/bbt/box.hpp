#pragma once

#include <algorithm>
#include <ostream>

namespace bbt {

/// Axis-aligned box, top-left origin. Coordinates stay continuous and are
/// rounded only when pixels are accessed.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
  return os << '[' << b.x << ", " << b.y << ", " << b.w << ", " << b.h << ']';
}

/// Intersection over union; 0 for disjoint or degenerate boxes.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

/// Forces the box inside a frame_w x frame_h frame with sides of at least
/// min_side (or the frame side, if the frame is smaller).
inline BoundingBox clamp_to_frame(BoundingBox b, double frame_w, double frame_h,
                                  double min_side) {
  b.w = std::clamp(b.w, std::min(min_side, frame_w), frame_w);
  b.h = std::clamp(b.h, std::min(min_side, frame_h), frame_h);
  b.x = std::clamp(b.x, 0.0, frame_w - b.w);
  b.y = std::clamp(b.y, 0.0, frame_h - b.h);
  return b;
}

}  // namespace bbt
