#pragma once

// Shared test fixtures and oracles.
//
// The two worked-example networks are pinned here: a hand-placed four-node
// square whose instance census and nine-slot schedule are known in closed
// form, and a seeded thirty-node network on which ten unit demands are known
// to pack into ten slots under the full catalog but need sixteen under
// two-way exchanges alone. The latter's flows are stored as endpoint pairs
// and resolved against the generated network at run time, so any drift in
// the generator or the flow enumeration surfaces as a loud lookup failure
// rather than a silently different fixture.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pnc/identify.hpp"
#include "pnc/schedule.hpp"
#include "pnc/topology.hpp"

namespace fixtures {

/// Four peripherals on a square of side 0.9: adjacent corners hear each
/// other, diagonal corners do not, and alpha 1.2 keeps the two crossing
/// exchanges interference-clear. Census: two two-way exchanges, four crossed
/// pairs, one full cross; seven instances in all.
inline pnc::Network fig3_network() {
  pnc::Network net;
  net.alpha = 1.2;
  net.nodes = {{0.45, 0.45}, {-0.45, 0.45}, {-0.45, -0.45}, {0.45, -0.45}};
  return net;
}

/// Row index of src->dst in potential-flow order; throws if absent.
inline int flow_id(const pnc::Network& net, int src, int dst) {
  auto pf = pnc::potential_flows(net);
  for (std::size_t i = 0; i < pf.size(); ++i)
    if (pf[i].src == src && pf[i].dst == dst) return static_cast<int>(i);
  throw std::runtime_error("fixture flow " + std::to_string(src) + "->" +
                           std::to_string(dst) + " is not a potential flow");
}

inline pnc::Network fig5_network() {
  return pnc::generate_network(30, 0.5, 1);
}

/// Unit demands on ten flows hosting one full cross (3 slots), one
/// three-flow ring over six nodes (3), and one directed triangle (4):
/// ten slots total under the full catalog, sixteen under exchanges only.
inline std::vector<int> fig5_demands(const pnc::Network& net) {
  static constexpr std::pair<int, int> kPairs[] = {
      {0, 10}, {10, 0}, {2, 27}, {27, 2},           // full cross
      {1, 27}, {14, 24}, {20, 8},                   // six-node ring
      {0, 4},  {4, 15},  {15, 0},                   // directed triangle
  };
  std::vector<int> demands(pnc::potential_flows(net).size(), 0);
  for (auto [src, dst] : kPairs) demands[flow_id(net, src, dst)] = 1;
  return demands;
}

/// LP view of scheduler columns: unit coefficients on the served rows.
inline std::vector<pnc::LpColumn> to_lp_columns(
    const std::vector<pnc::ScheduleColumn>& columns) {
  std::vector<pnc::LpColumn> out;
  out.reserve(columns.size());
  for (const auto& col : columns) {
    pnc::LpColumn lp;
    lp.cost = col.cost;
    for (int f : col.flows) lp.entries.emplace_back(f, 1.0);
    out.push_back(std::move(lp));
  }
  return out;
}

/// Exact minimum-cost integral cover by depth-first search, pruned by the
/// best-cost-per-covered-unit lower bound. Exponential in principle; meant
/// for instances with a handful of columns and single-digit demands.
/// Returns -1 when no combination covers the demands.
inline int ilp_min_cost(const std::vector<pnc::LpColumn>& columns,
                        const std::vector<double>& demands) {
  const int rows = static_cast<int>(demands.size());
  std::vector<int> residual(rows);
  for (int r = 0; r < rows; ++r)
    residual[r] = static_cast<int>(demands[r] + 0.5);

  double best_rate = 0;  // covered units per unit cost
  for (const auto& col : columns)
    best_rate = std::max(best_rate, col.entries.size() / col.cost);
  if (best_rate == 0)
    return std::accumulate(residual.begin(), residual.end(), 0) == 0 ? 0 : -1;

  int best = -1;
  auto bound = [&](int left) {
    return static_cast<int>(std::ceil(left / best_rate - 1e-9));
  };
  auto dfs = [&](auto&& self, std::size_t j, int cost, int left) -> void {
    if (left == 0) {
      if (best < 0 || cost < best) best = cost;
      return;
    }
    if (j == columns.size()) return;
    if (best >= 0 && cost + bound(left) >= best) return;
    const auto& col = columns[j];
    int max_reps = 0;
    for (auto [r, coeff] : col.entries)
      max_reps = std::max(max_reps, residual[r]);
    std::vector<int> used(col.entries.size());
    for (int reps = max_reps; reps >= 0; --reps) {
      int covered = 0;
      for (std::size_t k = 0; k < col.entries.size(); ++k) {
        used[k] = std::min(reps, residual[col.entries[k].first]);
        residual[col.entries[k].first] -= used[k];
        covered += used[k];
      }
      self(self, j + 1, cost + reps * static_cast<int>(col.cost),
           left - covered);
      for (std::size_t k = 0; k < col.entries.size(); ++k)
        residual[col.entries[k].first] += used[k];
    }
  };
  dfs(dfs, 0, 0, std::accumulate(residual.begin(), residual.end(), 0));
  return best;
}

}  // namespace fixtures
