#include "covertnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "covertnet/errors.hpp"
#include "covertnet/spatial_index.hpp"

namespace covertnet {

double distance(Point a, Point b) { return std::sqrt(distance_sq(a, b)); }

Point Disk::sample(Stream& stream) {
  const double r = kRadius * std::sqrt(stream.uniform());
  const double angle = 2.0 * std::numbers::pi * stream.uniform();
  return {r * std::cos(angle), r * std::sin(angle)};
}

Placement sample_placement(const NetworkConfig& config, std::uint64_t slot) {
  Placement placement;
  placement.slot = slot;

  Stream nodes(derive_seed(config.seed, StreamTag::kNodes, slot));
  placement.nodes.resize(static_cast<std::size_t>(config.n));
  for (auto& p : placement.nodes) p = Disk::sample(nodes);

  Stream wardens(config.warden_mobile ? derive_seed(config.seed, StreamTag::kWardens, slot)
                                      : derive_seed(config.seed, StreamTag::kWardens));
  placement.wardens.resize(static_cast<std::size_t>(config.warden_count()));
  for (auto& p : placement.wardens) p = Disk::sample(wardens);
  return placement;
}

std::size_t PairAssignment::suppressed_count() const {
  return static_cast<std::size_t>(std::count(suppressed.begin(), suppressed.end(), true));
}

PairAssignment assign_pairs_with_roles(const Placement& placement, std::vector<Role> role,
                                       Centric centric, double preservation_radius) {
  const std::size_t n = placement.nodes.size();
  if (role.size() != n) throw ConfigError("role vector does not match node count");

  PairAssignment out;
  out.centric = centric;
  out.role = std::move(role);
  for (std::size_t id = 0; id < n; ++id) {
    (out.role[id] == Role::kSender ? out.senders : out.receivers).push_back(id);
  }
  if (out.senders.empty() || out.receivers.empty()) {
    throw ConfigError("degenerate role split: need at least one sender and one receiver");
  }

  const std::span<const Point> nodes(placement.nodes);
  if (centric == Centric::kSender) {
    const GridIndex index(nodes, out.receivers);
    out.pairs.reserve(out.senders.size());
    for (std::size_t s : out.senders) out.pairs.push_back({s, index.nearest(nodes[s]).id});
  } else {
    const GridIndex index(nodes, out.senders);
    out.pairs.reserve(out.receivers.size());
    for (std::size_t r : out.receivers) out.pairs.push_back({index.nearest(nodes[r]).id, r});
    std::sort(out.pairs.begin(), out.pairs.end(), [](const Link& a, const Link& b) {
      return a.sender != b.sender ? a.sender < b.sender : a.receiver < b.receiver;
    });
  }

  out.suppressed.assign(n, false);
  std::vector<std::size_t> warden_ids(placement.wardens.size());
  std::iota(warden_ids.begin(), warden_ids.end(), std::size_t{0});
  const GridIndex wardens(placement.wardens, warden_ids);
  for (std::size_t s : out.senders) {
    out.suppressed[s] = wardens.any_within(nodes[s], preservation_radius);
  }
  return out;
}

PairAssignment assign_pairs(const Placement& placement, double theta, Centric centric,
                            double preservation_radius, Stream& roles) {
  const std::size_t n = placement.nodes.size();
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0, 1)");
  const auto senders = static_cast<std::size_t>(std::llround(theta * static_cast<double>(n)));
  if (senders < 1 || senders + 1 > n) {
    throw ConfigError("degenerate role split: need at least one sender and one receiver");
  }

  // Partial Fisher-Yates: the first `senders` entries become senders.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < senders; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(roles.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  std::vector<Role> role(n, Role::kReceiver);
  for (std::size_t i = 0; i < senders; ++i) role[perm[i]] = Role::kSender;
  return assign_pairs_with_roles(placement, std::move(role), centric, preservation_radius);
}

NearestDistances nearest_distances(const Placement& placement, const PairAssignment& assignment) {
  const std::span<const Point> nodes(placement.nodes);
  NearestDistances out;

  const GridIndex receivers(nodes, assignment.receivers);
  out.pair_dist.reserve(assignment.senders.size());
  for (std::size_t s : assignment.senders) {
    out.pair_dist.push_back(std::sqrt(receivers.nearest(nodes[s]).dist_sq));
  }

  const GridIndex senders(nodes, assignment.senders);
  out.rcv_nearest_sender.reserve(assignment.receivers.size());
  for (std::size_t r : assignment.receivers) {
    out.rcv_nearest_sender.push_back(std::sqrt(senders.nearest(nodes[r]).dist_sq));
  }

  std::vector<std::size_t> all(nodes.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const GridIndex everyone(nodes, all);
  out.node_nearest_node.reserve(nodes.size());
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    out.node_nearest_node.push_back(std::sqrt(everyone.nearest(nodes[id], id).dist_sq));
  }
  return out;
}

PreservationSpec PreservationSpec::for_network(std::int64_t n, double s, double c_p,
                                               double eps_p) {
  if (!(c_p > 0.0) || eps_p < 0.0) throw ConfigError("invalid preservation parameters");
  return {c_p, eps_p, c_p * std::pow(static_cast<double>(n), -(s / 2.0 + eps_p))};
}

double PreservationSpec::total_area(std::int64_t wardens) const {
  return static_cast<double>(wardens) * std::numbers::pi * radius * radius;
}

}  // namespace covertnet
