#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bbt/image.hpp"

namespace bbt {

/// One k x k patch: k*k*d appearance values and the patch-center location,
/// both normalized to [0,1].
struct FeaturePoint {
  std::vector<double> appearance;
  std::array<double, 2> location{0.0, 0.0};

  friend bool operator==(const FeaturePoint&, const FeaturePoint&) = default;
};

/// Ordered set of feature points sharing one appearance dimensionality.
/// Storage is flat so distance loops run over contiguous memory.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}

  std::size_t size() const { return locations_.size() / 2; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return locations_.empty(); }

  void reserve(std::size_t n);
  void push_back(const FeaturePoint& p);
  void push_back(std::span<const double> appearance, std::array<double, 2> location);
  /// Appends every point of other; dimensions must agree unless this set is empty.
  void append(const PointSet& other);

  std::span<const double> appearance(std::size_t i) const {
    return {appearances_.data() + i * dim_, dim_};
  }
  std::array<double, 2> location(std::size_t i) const {
    return {locations_[2 * i], locations_[2 * i + 1]};
  }
  FeaturePoint operator[](std::size_t i) const;

  /// Points at the given indices, in that order.
  PointSet subset(std::span<const std::size_t> indices) const;

  const std::vector<double>& appearance_data() const { return appearances_; }
  const std::vector<double>& location_data() const { return locations_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> appearances_;
  std::vector<double> locations_;
};

/// Squared appearance distance plus lambda times squared location distance.
double point_distance(const FeaturePoint& p, const FeaturePoint& q, double lambda);

/// Same quantity on raw views. Summation order is fixed (appearance terms in
/// index order, then the location term) so every caller gets bit-identical
/// values.
inline double point_distance(std::span<const double> pa, std::array<double, 2> pl,
                             std::span<const double> qa, std::array<double, 2> ql,
                             double lambda) {
  double app = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - qa[i];
    app += d * d;
  }
  const double dx = pl[0] - ql[0];
  const double dy = pl[1] - ql[1];
  return app + lambda * (dx * dx + dy * dy);
}

/// Splits the region into non-overlapping k x k patches (top-left aligned,
/// trailing remainder dropped) in row-major patch order.
PointSet embed_region(const ImageRegion& region, int k);

}  // namespace bbt
