#pragma once

// Airtime scheduling: a covering LP over identified instances plus per-flow
// relay fallback columns, integral rounding, a priority greedy heuristic,
// and expansion of the chosen executions into a per-slot roster.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pnc/atoms.hpp"
#include "pnc/identify.hpp"
#include "pnc/topology.hpp"

namespace pnc {

struct LpColumn {
  double cost = 0;                              // strictly positive
  std::vector<std::pair<int, double>> entries;  // (row, coefficient > 0)
};

enum class LpStatus { optimal, infeasible };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double objective = 0;
  std::vector<double> y;      // per input column
  std::vector<double> duals;  // per row
  int iterations = 0;
};

/// Minimize sum(cost_j * y_j) subject to coverage >= demands, y >= 0.
/// Self-contained revised simplex over the dense basis inverse; Dantzig
/// pricing with an automatic switch to Bland's rule under degeneracy.
/// Optimal within 1e-7 on the objective. A demanded row no column covers
/// yields an explicit infeasible result.
LpResult solve_lp(const std::vector<LpColumn>& columns,
                  const std::vector<double>& demands);

/// Ceiling each coordinate, then greedily trim in descending column cost
/// (ascending index on ties) while coverage stays feasible.
std::vector<int> integralize(const std::vector<double>& y,
                             const std::vector<LpColumn>& columns,
                             const std::vector<double>& demands);

struct SchemeConfig {
  std::string name;
  RelayMode mode = RelayMode::pnc;
  std::uint16_t class_mask = kAllClasses;  // empty for the non-coding scheme
};

/// Named schemes: pnc9, pnc6 (classes 3,4,6,7,8,9), snc9, nonnc, and the
/// subset spellings pnc-i, pnc-iv (classes 1 and 5), pnc-i-ii-v, ... where
/// the suffix is a dash-joined list of roman class numerals. A single class
/// on its own is also spelled pnc-only-<roman>, which disambiguates
/// pnc-only-iv (class 4 alone) from pnc-iv (classes 1 and 5).
/// Throws std::invalid_argument on anything else.
SchemeConfig scheme_config(std::string_view name);

/// One LP column with provenance: an identified instance, or (class_id 0) a
/// per-flow fallback that relays one packet in two slots.
struct ScheduleColumn {
  int class_id = 0;
  std::vector<int> nodes;  // template peripheral order; fallback: {src, dst}
  std::vector<int> flows;  // potential-flow ids, template flow order
  int cost = 2;
};

struct RosterSlot {
  int column = 0;
  int repetition = 0;
  int pattern_slot = 0;
  std::vector<std::pair<int, Expr>> transmissions;  // node id or kRelayNode
  std::vector<std::pair<int, Expr>> receptions;
};

struct Schedule {
  std::vector<ScheduleColumn> columns;
  std::vector<int> executions;  // per column
  int total_slots = 0;
  double lp_objective = 0;          // LP path only
  std::vector<double> lp_solution;  // per column; empty on the greedy path
  std::vector<double> lp_duals;
  int lp_iterations = 0;
  std::vector<RosterSlot> roster;
  std::vector<int> boundaries;  // cumulative end slot of each repetition
};

struct ScheduleOptions {
  bool greedy = false;
  bool fallback = true;      // append per-flow relay columns
  bool build_roster = true;  // skip for bulk experiments
};

/// Identify (per the scheme's mode and classes), build columns, solve or run
/// the greedy pass, and expand. demands is indexed by potential_flows(net).
Schedule schedule(const Network& net, const std::vector<int>& demands,
                  const SchemeConfig& scheme, const ScheduleOptions& = {});

/// Same, reusing a cached identification of the full catalog in the scheme's
/// mode; instances outside the scheme's class mask are dropped here.
Schedule schedule_prepared(const Network& net,
                           const std::vector<Instance>& instances,
                           const std::vector<int>& demands,
                           const SchemeConfig& scheme,
                           const ScheduleOptions& = {});

/// Per-node (start, role) duties of the instance executions, in roster
/// order; start is the 1-based first slot of the execution. Fallback slots
/// carry no atom role and are not listed.
struct RoleAssignment {
  int node = 0;
  int start = 0;
  int class_id = 0;
  int role_index = 0;  // position among the class's peripherals
};
std::vector<RoleAssignment> role_assignments(const Schedule& sched);

}  // namespace pnc
