#include "covertnet/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace covertnet {

GridIndex::GridIndex(std::span<const Point> points, std::span<const std::size_t> ids)
    : points_(points), size_(ids.size()) {
  const double extent = 2.0 * Disk::kRadius;
  side_ = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(ids.size())))), 1, 4096);
  cell_ = extent / static_cast<double>(side_);
  origin_ = -Disk::kRadius;

  std::vector<std::size_t> cell_ids(ids.size());
  start_.assign(side_ * side_ + 1, 0);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Point p = points_[ids[k]];
    cell_ids[k] = cell_of(p.y) * side_ + cell_of(p.x);
    ++start_[cell_ids[k] + 1];
  }
  for (std::size_t c = 0; c < side_ * side_; ++c) start_[c + 1] += start_[c];
  items_.resize(ids.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t k = 0; k < ids.size(); ++k) items_[fill[cell_ids[k]]++] = ids[k];
}

std::size_t GridIndex::cell_of(double coord) const {
  const double f = std::floor((coord - origin_) / cell_);
  if (f <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(f), side_ - 1);
}

bool GridIndex::scan_cell(std::size_t cx, std::size_t cy, Point q, std::size_t exclude,
                          Hit& best) const {
  const std::size_t c = cy * side_ + cx;
  bool changed = false;
  for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
    const std::size_t id = items_[k];
    if (id == exclude) continue;
    const double d2 = distance_sq(points_[id], q);
    if (d2 < best.dist_sq || (d2 == best.dist_sq && id < best.id)) {
      best = {id, d2};
      changed = true;
    }
  }
  return changed;
}

GridIndex::Hit GridIndex::nearest(Point q, std::size_t exclude) const {
  Hit best;
  if (size_ == 0) return best;
  const auto cx = static_cast<std::ptrdiff_t>(cell_of(q.x));
  const auto cy = static_cast<std::ptrdiff_t>(cell_of(q.y));
  const auto side = static_cast<std::ptrdiff_t>(side_);
  for (std::ptrdiff_t ring = 0; ring <= side; ++ring) {
    for (std::ptrdiff_t y = cy - ring; y <= cy + ring; ++y) {
      if (y < 0 || y >= side) continue;
      const bool edge_row = (y == cy - ring || y == cy + ring);
      const std::ptrdiff_t step = edge_row ? 1 : 2 * ring;
      for (std::ptrdiff_t x = cx - ring; x <= cx + ring; x += (step == 0 ? 1 : step)) {
        if (x < 0 || x >= side) continue;
        scan_cell(static_cast<std::size_t>(x), static_cast<std::size_t>(y), q, exclude, best);
      }
    }
    // Every point outside the scanned block is at least ring*cell_ away.
    const double reach = static_cast<double>(ring) * cell_ * (1.0 - 1e-12);
    if (best.id != kNone && best.dist_sq < reach * reach) break;
  }
  return best;
}

bool GridIndex::any_within(Point q, double radius) const {
  if (size_ == 0 || radius <= 0.0) return false;
  const std::size_t x0 = cell_of(q.x - radius), x1 = cell_of(q.x + radius);
  const std::size_t y0 = cell_of(q.y - radius), y1 = cell_of(q.y + radius);
  const double r2 = radius * radius;
  for (std::size_t y = y0; y <= y1; ++y) {
    for (std::size_t x = x0; x <= x1; ++x) {
      const std::size_t c = y * side_ + x;
      for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
        if (distance_sq(points_[items_[k]], q) < r2) return true;
      }
    }
  }
  return false;
}

}  // namespace covertnet
