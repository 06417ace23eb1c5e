#include "bbt/embedding.hpp"

#include <string>

#include "bbt/error.hpp"

namespace bbt {

void PointSet::reserve(std::size_t n) {
  appearances_.reserve(n * dim_);
  locations_.reserve(2 * n);
}

void PointSet::push_back(const FeaturePoint& p) { push_back(p.appearance, p.location); }

void PointSet::push_back(std::span<const double> appearance, std::array<double, 2> location) {
  if (empty() && dim_ == 0) dim_ = appearance.size();
  if (appearance.size() != dim_)
    throw InvalidInput("point dimensionality " + std::to_string(appearance.size()) +
                       " does not match set dimensionality " + std::to_string(dim_));
  appearances_.insert(appearances_.end(), appearance.begin(), appearance.end());
  locations_.push_back(location[0]);
  locations_.push_back(location[1]);
}

void PointSet::append(const PointSet& other) {
  if (other.empty()) return;
  if (empty()) dim_ = other.dim_;
  if (other.dim_ != dim_) throw InvalidInput("cannot append point sets of different dimensionality");
  appearances_.insert(appearances_.end(), other.appearances_.begin(), other.appearances_.end());
  locations_.insert(locations_.end(), other.locations_.begin(), other.locations_.end());
}

FeaturePoint PointSet::operator[](std::size_t i) const {
  const auto a = appearance(i);
  return FeaturePoint{{a.begin(), a.end()}, location(i)};
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  PointSet out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw InvalidInput("subset index out of range");
    out.push_back(appearance(i), location(i));
  }
  return out;
}

double point_distance(const FeaturePoint& p, const FeaturePoint& q, double lambda) {
  if (p.appearance.size() != q.appearance.size())
    throw InvalidInput("point_distance: appearance dimensionality mismatch");
  if (lambda < 0.0) throw InvalidInput("point_distance: lambda must be nonnegative");
  return point_distance(p.appearance, p.location, q.appearance, q.location, lambda);
}

PointSet embed_region(const ImageRegion& region, int k) {
  if (k < 1) throw InvalidInput("patch size must be positive");
  if (region.width < k || region.height < k)
    throw InvalidInput("region " + std::to_string(region.width) + "x" +
                       std::to_string(region.height) + " is smaller than patch size " +
                       std::to_string(k));
  const int cols = region.width / k;
  const int rows = region.height / k;
  const std::size_t dim = static_cast<std::size_t>(k) * k * region.channels;
  const double x_den = region.width > 1 ? region.width - 1 : 0.0;
  const double y_den = region.height > 1 ? region.height - 1 : 0.0;
  const double half = 0.5 * (k - 1);

  PointSet points(dim);
  points.reserve(static_cast<std::size_t>(cols) * rows);
  std::vector<double> appearance(dim);
  for (int py = 0; py < rows; ++py) {
    for (int px = 0; px < cols; ++px) {
      std::size_t n = 0;
      for (int y = py * k; y < (py + 1) * k; ++y) {
        for (int x = px * k; x < (px + 1) * k; ++x) {
          for (int c = 0; c < region.channels; ++c) appearance[n++] = region.at(x, y, c);
        }
      }
      const double cx = px * k + half;
      const double cy = py * k + half;
      points.push_back(appearance, {x_den > 0 ? cx / x_den : 0.5, y_den > 0 ? cy / y_den : 0.5});
    }
  }
  return points;
}

}  // namespace bbt
