#include "pnc/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pnc/rng.hpp"

namespace pnc {

Point Network::position(int id) const {
  if (id == kRelayNode) return {0, 0};
  if (id < 0 || id >= size()) throw std::out_of_range("no such node");
  return nodes[static_cast<std::size_t>(id)];
}

double Network::dist(int a, int b) const {
  const Point pa = position(a), pb = position(b);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

bool Network::in_range(int a, int b) const {
  return a != b && dist(a, b) <= 1.0;
}

bool Network::clear_of(int interferer, int receiver, int guard_tx,
                       int guard_rx) const {
  return dist(interferer, receiver) > alpha * dist(guard_tx, guard_rx);
}

Network generate_network(int n, double inner_radius, std::uint64_t seed,
                         double alpha) {
  if (n < 1) throw std::invalid_argument("need at least one node");
  if (!(inner_radius >= 0.0) || inner_radius >= 1.0)
    throw std::invalid_argument("inner radius must lie in [0, 1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

  Network net;
  net.alpha = alpha;
  net.nodes.reserve(static_cast<std::size_t>(n));
  std::mt19937_64 gen(seed);
  const double inner_sq = inner_radius * inner_radius;
  for (int i = 0; i < n; ++i) {
    // Area-uniform radius: invert P(R <= r) = (r^2 - a^2) / (1 - a^2).
    const double r = std::sqrt(inner_sq + uniform01(gen) * (1.0 - inner_sq));
    const double theta = 2.0 * std::numbers::pi * uniform01(gen);
    net.nodes.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return net;
}

}  // namespace pnc
