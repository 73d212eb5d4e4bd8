#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "covertnet/geometry.hpp"

namespace covertnet {

/// Uniform bucket grid over the disk's bounding square for exact
/// nearest-neighbour queries against a fixed subset of points.
class GridIndex {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Hit {
    std::size_t id = kNone;
    double dist_sq = std::numeric_limits<double>::infinity();
  };

  /// Indexes points[ids[k]] for every k. `ids` need not be sorted.
  GridIndex(std::span<const Point> points, std::span<const std::size_t> ids);

  /// Nearest indexed point to q other than `exclude`; ties go to the lowest id.
  Hit nearest(Point q, std::size_t exclude = kNone) const;

  /// True when some indexed point lies strictly closer than `radius` to q.
  bool any_within(Point q, double radius) const;

  std::size_t size() const { return size_; }

 private:
  std::size_t cell_of(double coord) const;
  bool scan_cell(std::size_t cx, std::size_t cy, Point q, std::size_t exclude, Hit& best) const;

  std::span<const Point> points_;
  std::size_t side_ = 1;
  double cell_ = 1.0;
  double origin_ = 0.0;
  std::size_t size_ = 0;
  std::vector<std::size_t> start_;   // CSR offsets, side_*side_ + 1
  std::vector<std::size_t> items_;   // node ids grouped by cell
};

}  // namespace covertnet
