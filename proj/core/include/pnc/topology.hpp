#pragma once

// Random single-relay network geometry. The relay sits at the origin;
// peripheral nodes are drawn uniformly by area from an annulus around it with
// outer radius 1 (the communication range), so every node can always reach
// the relay but not necessarily each other.

#include <cstdint>
#include <vector>

namespace pnc {

// Interference clearance factor: an interferer is negligible at a receiver
// when it is more than alpha times the guarded link's length away.
inline constexpr double kDefaultAlpha = 1.78;

inline constexpr int kRelayNode = -1;

struct Point {
  double x = 0;
  double y = 0;
};

struct Network {
  double alpha = kDefaultAlpha;
  std::vector<Point> nodes;  // peripherals; the relay is implicit at (0, 0)

  int size() const { return static_cast<int>(nodes.size()); }

  /// Position of a peripheral id or kRelayNode; throws std::out_of_range.
  Point position(int id) const;

  double dist(int a, int b) const;

  /// Closed communication range: dist <= 1 and distinct nodes.
  bool in_range(int a, int b) const;

  /// Strict clearance: the interferer is far enough from the receiver that
  /// the guarded link decodes despite the concurrent transmission.
  bool clear_of(int interferer, int receiver, int guard_tx,
                int guard_rx) const;
};

/// n nodes in the annulus [inner_radius, 1], radius by inverse CDF of the
/// area-uniform law, angle uniform; one radius draw then one angle draw per
/// node, in node order. Throws std::invalid_argument on a bad radius, count,
/// or alpha.
Network generate_network(int n, double inner_radius, std::uint64_t seed,
                         double alpha = kDefaultAlpha);

}  // namespace pnc
