#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "covertnet/config.hpp"
#include "covertnet/rng.hpp"

namespace covertnet {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance_sq(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point a, Point b);

/// The unit-area disk centred at the origin.
struct Disk {
  static constexpr double kRadius = std::numbers::inv_sqrtpi;

  static double area() { return std::numbers::pi * kRadius * kRadius; }
  static bool contains(Point p) { return p.x * p.x + p.y * p.y <= kRadius * kRadius; }

  /// Exactly uniform point: r = R sqrt(u), angle uniform.
  static Point sample(Stream& stream);
};

/// Node and warden positions for one time slot.
struct Placement {
  std::vector<Point> nodes;
  std::vector<Point> wardens;
  std::uint64_t slot = 0;
};

/// Node and warden positions for `slot`. Node positions are i.i.d. uniform and
/// redrawn every slot; wardens are redrawn only when config.warden_mobile.
/// Streams are derived from (config.seed, slot), so slots can be sampled in
/// any order or in parallel.
Placement sample_placement(const NetworkConfig& config, std::uint64_t slot);

enum class Role : std::uint8_t { kSender, kReceiver };

struct Link {
  std::size_t sender = 0;
  std::size_t receiver = 0;
};

struct PairAssignment {
  Centric centric = Centric::kSender;
  std::vector<Role> role;               // indexed by node id
  std::vector<std::size_t> senders;     // ascending node ids
  std::vector<std::size_t> receivers;   // ascending node ids
  std::vector<Link> pairs;              // sorted by (sender, receiver)
  std::vector<bool> suppressed;         // indexed by node id; senders only

  std::size_t suppressed_count() const;
};

/// Draws round(theta n) senders uniformly, pairs them by the nearest-neighbour
/// rule of `centric`, and flags senders within `preservation_radius` of any
/// warden. Exact distance ties go to the lowest node id.
PairAssignment assign_pairs(const Placement& placement, double theta, Centric centric,
                            double preservation_radius, Stream& roles);

/// Same pairing and suppression with roles fixed by the caller.
PairAssignment assign_pairs_with_roles(const Placement& placement, std::vector<Role> role,
                                       Centric centric, double preservation_radius);

struct NearestDistances {
  std::vector<double> pair_dist;            // per sender: nearest receiver
  std::vector<double> rcv_nearest_sender;   // per receiver: nearest sender
  std::vector<double> node_nearest_node;    // per node: nearest other node
};

NearestDistances nearest_distances(const Placement& placement, const PairAssignment& assignment);

/// Preservation region radius and its total area for a given warden count.
struct PreservationSpec {
  double c_p = 0.0;
  double eps_p = 0.0;
  double radius = 0.0;

  static PreservationSpec for_network(std::int64_t n, double s, double c_p, double eps_p);
  double total_area(std::int64_t wardens) const;
};

}  // namespace covertnet
