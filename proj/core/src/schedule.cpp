#include "pnc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace pnc {

namespace {

constexpr double kTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr int kDegenerateLimit = 64;
constexpr int kIterationCap = 200000;

/// Revised simplex over the dense basis inverse. Internal column ids extend
/// the input columns with one surplus column per row (entry -1, cost 0) and,
/// when no identity start basis exists among the inputs, one artificial
/// column per row for a phase-1 feasibility pass.
///
/// Covering instances here are heavily degenerate (thousands of identical-
/// cost columns), so the solver works against a deterministically perturbed
/// RHS and reports the solution of the final basis against the original RHS.
/// Duals are updated incrementally with periodic full recomputation, and
/// pricing scans cyclic blocks; the degenerate-streak fallback to Bland's
/// rule (full first-negative scan) is the anti-cycling guarantee.
class Simplex {
 public:
  Simplex(const std::vector<LpColumn>& cols, const std::vector<double>& d)
      : cols_(cols),
        demands_(d),
        n_(static_cast<int>(cols.size())),
        m_(static_cast<int>(d.size())) {}

  LpResult run() {
    LpResult res;
    res.y.assign(n_, 0.0);
    res.duals.assign(m_, 0.0);

    std::vector<char> covered(m_, 0);
    for (const auto& col : cols_)
      for (const auto& [row, coef] : col.entries) covered[row] = 1;
    for (int r = 0; r < m_; ++r) {
      if (demands_[r] > kTol && !covered[r]) {
        res.status = LpStatus::infeasible;
        return res;
      }
    }

    perturbed_.resize(m_);
    for (int r = 0; r < m_; ++r)
      perturbed_[r] = demands_[r] + 1e-7 * (r + 1) / (m_ + 1);

    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    xb_ = perturbed_;
    basis_.resize(m_);

    bool artificial_phase = !identity_start();
    if (artificial_phase) {
      for (int r = 0; r < m_; ++r) basis_[r] = n_ + m_ + r;
      phase1_ = true;
      iterate();
      double infeas = 0;
      for (int r = 0; r < m_; ++r)
        if (basis_[r] >= n_ + m_) infeas += xb_[r];
      if (infeas > 1e-6) {
        res.status = LpStatus::infeasible;
        res.iterations = iterations_;
        return res;
      }
      drive_out_artificials();
      phase1_ = false;
    }

    iterate();

    // The perturbation steered the pivots; the answer is the final basis
    // applied to the original RHS.
    for (int i = 0; i < m_; ++i) {
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      double v = 0;
      for (int k = 0; k < m_; ++k) v += row[k] * demands_[k];
      xb_[i] = std::max(0.0, v);
    }

    res.status = LpStatus::optimal;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) res.y[basis_[r]] = xb_[r];
    refresh_duals();
    res.duals = duals_;
    double obj = 0;
    for (int j = 0; j < n_; ++j) obj += cols_[j].cost * res.y[j];
    res.objective = obj;
    res.iterations = iterations_;
    return res;
  }

 private:
  double column_cost(int id) const {
    if (phase1_) return id >= n_ + m_ ? 1.0 : 0.0;
    return id < n_ ? cols_[id].cost : 0.0;
  }

  // Entries of internal column `id` as (row, coef) pairs.
  template <typename Fn>
  void for_entries(int id, Fn&& fn) const {
    if (id < n_) {
      for (const auto& [row, coef] : cols_[id].entries) fn(row, coef);
    } else if (id < n_ + m_) {
      fn(id - n_, -1.0);
    } else {
      fn(id - n_ - m_, 1.0);
    }
  }

  void refresh_duals() {
    duals_.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      double cb = column_cost(basis_[i]);
      if (cb == 0.0) continue;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      for (int k = 0; k < m_; ++k) duals_[static_cast<std::size_t>(k)] += cb * row[k];
    }
  }

  double reduced_cost(int id) const {
    double rc = column_cost(id);
    for_entries(id, [&](int row, double coef) {
      rc -= duals_[static_cast<std::size_t>(row)] * coef;
    });
    return rc;
  }

  void direction(int id, std::vector<double>& d) const {
    d.assign(m_, 0.0);
    for_entries(id, [&](int row, double coef) {
      for (int i = 0; i < m_; ++i)
        d[i] += binv_[static_cast<std::size_t>(i) * m_ + row] * coef;
    });
  }

  // True when every row has an input column with that row as its only
  // entry, coefficient 1; those columns form a ready-made feasible basis.
  // The scheduling path always lands here via the per-flow fallbacks.
  bool identity_start() {
    std::vector<int> pick(m_, -1);
    for (int j = 0; j < n_; ++j) {
      if (cols_[j].entries.size() != 1) continue;
      auto [row, coef] = cols_[j].entries[0];
      if (std::abs(coef - 1.0) < 1e-12 && pick[row] < 0) pick[row] = j;
    }
    for (int r = 0; r < m_; ++r) {
      if (pick[r] < 0) return false;
    }
    basis_.assign(pick.begin(), pick.end());
    return true;
  }

  // Dantzig choice within cyclic blocks: the first block of the sweep that
  // contains an improving column supplies the entering column; a clean full
  // sweep certifies optimality. Bland mode scans everything in id order and
  // takes the first improving column.
  std::pair<int, double> pick_entering(bool bland) {
    const int limit = n_ + m_;  // artificials never re-enter
    if (bland) {
      for (int id = 0; id < limit; ++id) {
        const double rc = reduced_cost(id);
        if (rc < -kTol) return {id, rc};
      }
      return {-1, 0.0};
    }
    constexpr int kBlock = 8192;
    int scanned = 0;
    while (scanned < limit) {
      int best = -1;
      double best_rc = -kTol;
      const int block_end = cursor_ + kBlock;
      for (; cursor_ < block_end && scanned < limit; ++cursor_, ++scanned) {
        if (cursor_ >= limit) cursor_ = 0;
        const double rc = reduced_cost(cursor_);
        if (rc < best_rc) {
          best_rc = rc;
          best = cursor_;
        }
      }
      if (cursor_ >= limit) cursor_ = 0;
      if (best >= 0) return {best, best_rc};
    }
    return {-1, 0.0};
  }

  int leaving(const std::vector<double>& d, bool bland) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      if (d[i] > kPivotTol) best = std::min(best, xb_[i] / d[i]);
    }
    if (!std::isfinite(best)) return -1;
    int row = -1;
    int row_id = std::numeric_limits<int>::max();
    for (int i = 0; i < m_; ++i) {
      if (d[i] <= kPivotTol) continue;
      if (xb_[i] / d[i] > best + 1e-12) continue;
      if (bland) {
        if (basis_[i] < row_id) {
          row_id = basis_[i];
          row = i;
        }
      } else if (row < 0) {
        row = i;
      }
    }
    return row;
  }

  void pivot(int enter, int row, const std::vector<double>& d) {
    double* prow = binv_.data() + static_cast<std::size_t>(row) * m_;
    double inv = 1.0 / d[row];
    for (int k = 0; k < m_; ++k) prow[k] *= inv;
    xb_[row] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == row || std::abs(d[i]) < 1e-15) continue;
      double* irow = binv_.data() + static_cast<std::size_t>(i) * m_;
      double f = d[i];
      for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
      xb_[i] -= f * xb_[row];
      if (xb_[i] < 0 && xb_[i] > -1e-11) xb_[i] = 0;
    }
    basis_[row] = enter;
  }

  void iterate() {
    std::vector<double> d;
    refresh_duals();
    bool bland = false;
    int degenerate_streak = 0;
    for (;;) {
      if (++iterations_ > kIterationCap)
        throw std::runtime_error("simplex iteration limit exceeded");
      if ((iterations_ & 0x1FF) == 0) refresh_duals();
      auto [enter, rc] = pick_entering(bland);
      if (enter < 0) return;
      direction(enter, d);
      int row = leaving(d, bland);
      if (row < 0)
        throw std::runtime_error("LP unbounded; nonpositive column cost?");
      double step = xb_[row] / d[row];
      if (step < kTol) {
        if (++degenerate_streak >= kDegenerateLimit) {
          bland = true;
          refresh_duals();
        }
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      pivot(enter, row, d);
      // Rank-one dual update: u += rc * (updated pivot row of the inverse).
      const double* prow = binv_.data() + static_cast<std::size_t>(row) * m_;
      for (int k = 0; k < m_; ++k) duals_[static_cast<std::size_t>(k)] += rc * prow[k];
    }
  }

  // After phase 1, swap any artificial still basic (at zero) for a real
  // column with a nonzero pivot in its row; a row with none is redundant
  // and the artificial may stay at zero through phase 2.
  void drive_out_artificials() {
    std::vector<double> d;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      int found = -1;
      for (int id = 0; id < n_ + m_ && found < 0; ++id) {
        double piv = 0;
        for_entries(id, [&](int r, double coef) { piv += row[r] * coef; });
        if (std::abs(piv) > 1e-9) {
          bool basic = false;
          for (int k = 0; k < m_; ++k)
            if (basis_[k] == id) basic = true;
          if (!basic) found = id;
        }
      }
      if (found < 0) continue;
      direction(found, d);
      pivot(found, i, d);
    }
  }

  const std::vector<LpColumn>& cols_;
  const std::vector<double>& demands_;
  int n_;
  int m_;
  bool phase1_ = false;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> perturbed_;
  std::vector<double> duals_;
  std::vector<int> basis_;
  int cursor_ = 0;
  int iterations_ = 0;
};

}  // namespace

LpResult solve_lp(const std::vector<LpColumn>& columns,
                  const std::vector<double>& demands) {
  const int m = static_cast<int>(demands.size());
  const int n = static_cast<int>(columns.size());
  for (double d : demands)
    if (d < 0 || !std::isfinite(d))
      throw std::invalid_argument("demands must be finite and nonnegative");
  for (const auto& col : columns) {
    if (!(col.cost > 0) || !std::isfinite(col.cost))
      throw std::invalid_argument("column costs must be strictly positive");
    for (const auto& [row, coef] : col.entries) {
      if (row < 0 || row >= m)
        throw std::invalid_argument("column entry row out of range");
      if (!(coef > 0) || !std::isfinite(coef))
        throw std::invalid_argument("column coefficients must be positive");
    }
  }

  // Presolve. Rows without demand are satisfied by y >= 0 and carry dual 0;
  // columns that touch no remaining row can only cost, so they stay at 0;
  // exact duplicates (same cost, same remaining entries) collapse onto one
  // representative. Instance enumerations produce both in bulk.
  std::vector<int> row_map(static_cast<std::size_t>(m), -1);
  std::vector<int> kept_rows;
  for (int r = 0; r < m; ++r) {
    if (demands[r] > 0) {
      row_map[static_cast<std::size_t>(r)] = static_cast<int>(kept_rows.size());
      kept_rows.push_back(r);
    }
  }

  LpResult res;
  res.y.assign(static_cast<std::size_t>(n), 0.0);
  res.duals.assign(static_cast<std::size_t>(m), 0.0);
  if (kept_rows.empty()) return res;  // c = 0 -> y = 0

  std::vector<double> rdemands;
  rdemands.reserve(kept_rows.size());
  for (int r : kept_rows) rdemands.push_back(demands[r]);

  std::vector<LpColumn> rcols;
  std::vector<int> col_map;
  std::map<std::pair<double, std::vector<std::pair<int, double>>>, int> seen;
  for (int j = 0; j < n; ++j) {
    LpColumn rc;
    rc.cost = columns[j].cost;
    for (const auto& [row, coef] : columns[j].entries) {
      const int rr = row_map[static_cast<std::size_t>(row)];
      if (rr >= 0) rc.entries.emplace_back(rr, coef);
    }
    if (rc.entries.empty()) continue;
    std::sort(rc.entries.begin(), rc.entries.end());
    auto [it, fresh] = seen.try_emplace({rc.cost, rc.entries}, j);
    if (!fresh) continue;
    rcols.push_back(std::move(rc));
    col_map.push_back(j);
  }

  LpResult rres = Simplex(rcols, rdemands).run();
  res.status = rres.status;
  res.objective = rres.objective;
  res.iterations = rres.iterations;
  if (res.status == LpStatus::optimal) {
    for (std::size_t k = 0; k < col_map.size(); ++k)
      res.y[static_cast<std::size_t>(col_map[k])] = rres.y[k];
    for (std::size_t k = 0; k < kept_rows.size(); ++k)
      res.duals[static_cast<std::size_t>(kept_rows[k])] = rres.duals[k];
  }
  return res;
}

std::vector<int> integralize(const std::vector<double>& y,
                             const std::vector<LpColumn>& columns,
                             const std::vector<double>& demands) {
  if (y.size() != columns.size())
    throw std::invalid_argument("solution length does not match columns");
  int n = static_cast<int>(columns.size());
  int m = static_cast<int>(demands.size());

  std::vector<int> counts(n, 0);
  for (int j = 0; j < n; ++j) {
    if (y[j] > kTol) counts[j] = static_cast<int>(std::ceil(y[j] - 1e-9));
  }

  std::vector<double> coverage(m, 0.0);
  auto apply = [&](int j, double sign) {
    for (const auto& [row, coef] : columns[j].entries)
      coverage[row] += sign * coef * counts[j];
  };
  for (int j = 0; j < n; ++j)
    if (counts[j] > 0) apply(j, +1.0);
  for (int r = 0; r < m; ++r) {
    if (coverage[r] < demands[r] - 1e-9)
      throw std::invalid_argument("fractional solution is not feasible");
  }

  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return columns[a].cost > columns[b].cost;
  });

  for (int j : order) {
    while (counts[j] > 0) {
      bool removable = true;
      for (const auto& [row, coef] : columns[j].entries) {
        if (coverage[row] - coef < demands[row] - 1e-9) {
          removable = false;
          break;
        }
      }
      if (!removable) break;
      --counts[j];
      for (const auto& [row, coef] : columns[j].entries) coverage[row] -= coef;
    }
  }
  return counts;
}

namespace {

std::uint16_t class_bit(int id) {
  return static_cast<std::uint16_t>(1u << (id - 1));
}

std::uint16_t parse_roman_list(std::string_view list) {
  std::uint16_t mask = 0;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t dash = list.find('-', pos);
    std::string_view part = list.substr(
        pos, dash == std::string_view::npos ? std::string_view::npos
                                            : dash - pos);
    auto id = from_roman(part);
    if (!id) throw std::invalid_argument("unknown atom numeral in scheme name");
    mask |= class_bit(*id);
    if (dash == std::string_view::npos) break;
    pos = dash + 1;
  }
  return mask;
}

}  // namespace

SchemeConfig scheme_config(std::string_view name) {
  SchemeConfig cfg;
  cfg.name.assign(name);
  if (name == "pnc9") {
    return cfg;
  }
  if (name == "pnc6") {
    cfg.class_mask = 0;
    for (int id : {3, 4, 6, 7, 8, 9}) cfg.class_mask |= class_bit(id);
    return cfg;
  }
  if (name == "snc9") {
    cfg.mode = RelayMode::snc;
    return cfg;
  }
  if (name == "nonnc") {
    cfg.mode = RelayMode::nonnc;
    cfg.class_mask = 0;
    return cfg;
  }
  // "pnc-iv" predates the dash-joined grammar and keeps its historical
  // meaning of classes I and V; class 4 alone is pnc-only-iv.
  if (name == "pnc-iv") {
    cfg.class_mask = class_bit(1) | class_bit(5);
    return cfg;
  }
  constexpr std::string_view kOnly = "pnc-only-";
  if (name.substr(0, kOnly.size()) == kOnly) {
    auto id = from_roman(name.substr(kOnly.size()));
    if (!id) throw std::invalid_argument("unknown atom numeral in scheme name");
    cfg.class_mask = class_bit(*id);
    return cfg;
  }
  constexpr std::string_view kSubset = "pnc-";
  if (name.substr(0, kSubset.size()) == kSubset && name.size() > kSubset.size()) {
    cfg.class_mask = parse_roman_list(name.substr(kSubset.size()));
    return cfg;
  }
  throw std::invalid_argument("unknown scheme name: " + cfg.name);
}

namespace {

// Greedy priority: higher-coupling classes first.
int greedy_rank(int class_id) {
  static constexpr int kOrder[] = {6, 9, 1, 2, 5, 8, 3, 4, 7};
  for (int i = 0; i < 9; ++i)
    if (kOrder[i] == class_id) return i;
  return 9;
}

void expand_roster(const SchemeConfig& scheme, Schedule& s) {
  std::vector<int> order;
  for (int j = 0; j < static_cast<int>(s.columns.size()); ++j)
    if (s.executions[j] > 0) order.push_back(j);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return s.columns[a].cost > s.columns[b].cost;
  });

  for (int j : order) {
    const auto& col = s.columns[j];
    for (int rep = 0; rep < s.executions[j]; ++rep) {
      if (col.class_id == 0) {
        RosterSlot up;
        up.column = j;
        up.repetition = rep;
        up.pattern_slot = 0;
        up.transmissions = {{col.nodes[0], 1}};
        up.receptions = {{kRelayNode, 1}};
        RosterSlot down;
        down.column = j;
        down.repetition = rep;
        down.pattern_slot = 1;
        down.transmissions = {{kRelayNode, 1}};
        down.receptions = {{col.nodes[1], 1}};
        s.roster.push_back(std::move(up));
        s.roster.push_back(std::move(down));
      } else {
        const auto& cls = atom(col.class_id);
        const auto& pattern = scheme.mode == RelayMode::snc ? cls.snc_pattern
                                                            : cls.pnc_pattern;
        auto node_of = [&](Label l) {
          if (l == kRelay) return kRelayNode;
          auto it = std::find(cls.ci.peripherals.begin(),
                              cls.ci.peripherals.end(), l);
          return col.nodes[it - cls.ci.peripherals.begin()];
        };
        for (int ps = 0; ps < static_cast<int>(pattern.size()); ++ps) {
          RosterSlot slot;
          slot.column = j;
          slot.repetition = rep;
          slot.pattern_slot = ps;
          for (const auto& [l, e] : pattern[ps].transmissions)
            slot.transmissions.emplace_back(node_of(l), e);
          for (const auto& [l, e] : pattern[ps].required_receptions)
            slot.receptions.emplace_back(node_of(l), e);
          s.roster.push_back(std::move(slot));
        }
      }
      s.boundaries.push_back(static_cast<int>(s.roster.size()));
    }
  }
}

}  // namespace

Schedule schedule_prepared(const Network& net,
                           const std::vector<Instance>& instances,
                           const std::vector<int>& demands,
                           const SchemeConfig& scheme,
                           const ScheduleOptions& opt) {
  auto pf = potential_flows(net);
  int nf = static_cast<int>(pf.size());
  if (static_cast<int>(demands.size()) != nf)
    throw std::invalid_argument("demand vector length mismatch");
  for (int d : demands)
    if (d < 0) throw std::invalid_argument("negative demand");

  Schedule s;
  if (scheme.mode != RelayMode::nonnc) {
    for (const auto& inst : instances) {
      if (!(scheme.class_mask & class_bit(inst.class_id))) continue;
      ScheduleColumn col;
      col.class_id = inst.class_id;
      col.nodes = inst.nodes;
      col.flows = inst.flows;
      col.cost = slot_cost(inst.class_id, scheme.mode);
      s.columns.push_back(std::move(col));
    }
  }
  int n_inst = static_cast<int>(s.columns.size());
  if (opt.fallback) {
    for (int f = 0; f < nf; ++f) {
      ScheduleColumn col;
      col.class_id = 0;
      col.nodes = {pf[f].src, pf[f].dst};
      col.flows = {f};
      col.cost = 2;
      s.columns.push_back(std::move(col));
    }
  }

  if (opt.greedy) {
    std::vector<int> residual = demands;
    s.executions.assign(s.columns.size(), 0);
    std::vector<int> order(n_inst);
    for (int j = 0; j < n_inst; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return greedy_rank(s.columns[a].class_id) <
             greedy_rank(s.columns[b].class_id);
    });
    for (int j : order) {
      int reps = std::numeric_limits<int>::max();
      for (int f : s.columns[j].flows) reps = std::min(reps, residual[f]);
      if (reps <= 0) continue;
      s.executions[j] = reps;
      for (int f : s.columns[j].flows) residual[f] -= reps;
    }
    for (int f = 0; f < nf; ++f) {
      if (residual[f] == 0) continue;
      if (!opt.fallback)
        throw std::runtime_error(
            "greedy pass leaves residual demand and fallbacks are disabled");
      s.executions[n_inst + f] = residual[f];
    }
  } else {
    std::vector<LpColumn> lpcols;
    lpcols.reserve(s.columns.size());
    for (const auto& col : s.columns) {
      LpColumn lc;
      lc.cost = col.cost;
      for (int f : col.flows) lc.entries.emplace_back(f, 1.0);
      lpcols.push_back(std::move(lc));
    }
    std::vector<double> d(demands.begin(), demands.end());
    LpResult lp = solve_lp(lpcols, d);
    if (lp.status == LpStatus::infeasible)
      throw std::runtime_error(
          "demand not coverable by the scheme's columns (fallback disabled?)");
    s.executions = integralize(lp.y, lpcols, d);
    s.lp_objective = lp.objective;
    s.lp_solution = std::move(lp.y);
    s.lp_duals = std::move(lp.duals);
    s.lp_iterations = lp.iterations;
  }

  s.total_slots = 0;
  for (std::size_t j = 0; j < s.columns.size(); ++j)
    s.total_slots += s.executions[j] * s.columns[j].cost;

  if (opt.build_roster) expand_roster(scheme, s);
  return s;
}

Schedule schedule(const Network& net, const std::vector<int>& demands,
                  const SchemeConfig& scheme, const ScheduleOptions& opt) {
  std::vector<Instance> instances;
  if (scheme.mode != RelayMode::nonnc) {
    MatchMode mm = scheme.mode == RelayMode::snc ? MatchMode::connectivity_only
                                                 : MatchMode::full;
    instances = identify(net, mm, scheme.class_mask);
  }
  return schedule_prepared(net, instances, demands, scheme, opt);
}

std::vector<RoleAssignment> role_assignments(const Schedule& sched) {
  std::vector<RoleAssignment> out;
  for (std::size_t i = 0; i < sched.roster.size(); ++i) {
    const auto& slot = sched.roster[i];
    if (slot.pattern_slot != 0) continue;
    const auto& col = sched.columns[slot.column];
    if (col.class_id == 0) continue;
    for (std::size_t k = 0; k < col.nodes.size(); ++k) {
      RoleAssignment ra;
      ra.node = col.nodes[k];
      ra.start = static_cast<int>(i) + 1;
      ra.class_id = col.class_id;
      ra.role_index = static_cast<int>(k);
      out.push_back(ra);
    }
  }
  return out;
}

}  // namespace pnc
