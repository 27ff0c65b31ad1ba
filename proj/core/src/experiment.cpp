#include "pnc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "pnc/identify.hpp"
#include "pnc/rng.hpp"

namespace pnc {

TrafficSpec parse_traffic(std::string_view s) {
  TrafficSpec t;
  std::string_view rest;
  constexpr std::string_view kFixed = "fixed:";
  constexpr std::string_view kSaturated = "saturated:";
  if (s.substr(0, kFixed.size()) == kFixed) {
    t.mode = TrafficSpec::Mode::fixed;
    rest = s.substr(kFixed.size());
  } else if (s.substr(0, kSaturated.size()) == kSaturated) {
    t.mode = TrafficSpec::Mode::saturated;
    rest = s.substr(kSaturated.size());
  } else {
    throw std::invalid_argument("traffic must be fixed:K or saturated:W");
  }
  int v = 0;
  if (rest.empty()) throw std::invalid_argument("missing traffic amount");
  for (char c : rest) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("traffic amount must be a positive integer");
    v = v * 10 + (c - '0');
    if (v > 1000000) throw std::invalid_argument("traffic amount too large");
  }
  if (v < 1) throw std::invalid_argument("traffic amount must be >= 1");
  t.amount = v;
  return t;
}

double degradation(double t_scheme, double t_benchmark) {
  if (!(t_scheme > 0) || !(t_benchmark > 0))
    throw std::invalid_argument("slot counts must be positive");
  return (t_scheme - t_benchmark) / t_scheme * 100.0;
}

std::uint64_t network_seed(std::uint64_t master, int network_id) {
  return derive_seed(master, 2ull * static_cast<unsigned>(network_id));
}

std::uint64_t assignment_seed(std::uint64_t master, int network_id,
                              int assignment_id) {
  return derive_seed(network_seed(master, network_id),
                     2ull * static_cast<unsigned>(assignment_id) + 1);
}

std::vector<int> draw_demands(const Network& net, const TrafficSpec& traffic,
                              std::uint64_t seed) {
  const auto pf = potential_flows(net);
  if (pf.empty())
    throw std::runtime_error("network has no potential flows to load");
  std::vector<int> demands(pf.size(), 0);
  std::mt19937_64 gen(seed);
  if (traffic.mode == TrafficSpec::Mode::fixed) {
    for (int k = 0; k < traffic.amount; ++k)
      ++demands[uniform_index(gen, pf.size())];
    return demands;
  }
  // Saturated: flows are sorted by (src, dst), so each node's outgoing
  // flows form one contiguous block.
  std::size_t lo = 0;
  for (int u = 0; u < net.size(); ++u) {
    std::size_t hi = lo;
    while (hi < pf.size() && pf[hi].src == u) ++hi;
    if (hi > lo)
      for (int t = 0; t < traffic.amount; ++t)
        ++demands[lo + uniform_index(gen, hi - lo)];
    lo = hi;
  }
  return demands;
}

namespace {

bool is_lp_benchmark(const SchemeConfig& s, bool greedy) {
  return !greedy && s.mode == RelayMode::pnc && s.class_mask == kAllClasses;
}

Metrics aggregate(const std::string& name,
                  const std::vector<TrialRecord>& trials) {
  Metrics m;
  m.scheme = name;
  double sum = 0, deg_sum = 0;
  int tail = 0;
  for (const auto& t : trials) {
    if (t.scheme != name) continue;
    ++m.trials;
    sum += t.slots;
    deg_sum += t.degradation_vs_pnc9;
    if (t.degradation_vs_pnc9 > 10.0) ++tail;
  }
  if (m.trials == 0) return m;
  m.mean_ts = sum / m.trials;
  double var = 0;
  for (const auto& t : trials) {
    if (t.scheme != name) continue;
    var += (t.slots - m.mean_ts) * (t.slots - m.mean_ts);
  }
  m.rsd = std::sqrt(var / m.trials) / m.mean_ts;
  m.mean_degradation = deg_sum / m.trials;
  m.tail_gamma = static_cast<double>(tail) / m.trials;
  return m;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.n_networks < 1 || config.n_assignments < 1)
    throw std::invalid_argument("need at least one network and assignment");
  if (config.n_r < 1) throw std::invalid_argument("need at least one node");
  if (config.schemes.empty())
    throw std::invalid_argument("no schemes to evaluate");

  const SchemeConfig bench = scheme_config("pnc9");
  bool need_conn = false;
  for (const auto& s : config.schemes)
    if (s.mode == RelayMode::snc) need_conn = true;

  ScheduleOptions bench_opt;
  bench_opt.build_roster = false;
  ScheduleOptions eval_opt;
  eval_opt.greedy = config.greedy;
  eval_opt.build_roster = false;

  ExperimentResult result;
  for (int i = 0; i < config.n_networks; ++i) {
    const Network net = generate_network(config.n_r, config.r_inner,
                                         network_seed(config.master_seed, i),
                                         config.alpha);
    const auto full_inst = identify(net, MatchMode::full);
    const std::vector<Instance> conn_inst =
        need_conn ? identify(net, MatchMode::connectivity_only)
                  : std::vector<Instance>{};
    const std::vector<Instance> no_inst;

    for (int j = 0; j < config.n_assignments; ++j) {
      std::vector<TrialRecord> rows;
      try {
        const auto demands = draw_demands(
            net, config.traffic, assignment_seed(config.master_seed, i, j));
        const int bench_slots =
            schedule_prepared(net, full_inst, demands, bench, bench_opt)
                .total_slots;
        for (const auto& scheme : config.schemes) {
          int slots;
          if (is_lp_benchmark(scheme, config.greedy)) {
            slots = bench_slots;
          } else {
            const auto& inst = scheme.mode == RelayMode::nonnc ? no_inst
                               : scheme.mode == RelayMode::snc ? conn_inst
                                                               : full_inst;
            slots = schedule_prepared(net, inst, demands, scheme, eval_opt)
                        .total_slots;
          }
          TrialRecord rec;
          rec.network_id = i;
          rec.assignment_id = j;
          rec.scheme = scheme.name;
          rec.slots = slots;
          rec.degradation_vs_pnc9 = degradation(slots, bench_slots);
          rows.push_back(std::move(rec));
        }
      } catch (const std::exception& e) {
        result.trial_errors.push_back("network " + std::to_string(i) +
                                      " assignment " + std::to_string(j) +
                                      ": " + e.what());
        continue;
      }
      for (auto& r : rows) result.trials.push_back(std::move(r));
    }
  }

  for (const auto& s : config.schemes)
    result.metrics.push_back(aggregate(s.name, result.trials));
  return result;
}

SweepResult radius_sweep(ExperimentConfig config,
                         const std::vector<double>& radii) {
  config.schemes = {scheme_config("pnc9")};
  config.greedy = false;
  SweepResult sweep;
  for (double r : radii) {
    config.r_inner = r;
    const auto res = run_experiment(config);
    sweep.points.push_back({r, res.metrics.at(0).mean_ts});
  }
  if (sweep.points.empty()) return sweep;
  double lo = sweep.points[0].mean_ts, hi = lo, sum = 0;
  for (const auto& p : sweep.points) {
    lo = std::min(lo, p.mean_ts);
    hi = std::max(hi, p.mean_ts);
    sum += p.mean_ts;
  }
  const double mean = sum / static_cast<double>(sweep.points.size());
  if (mean > 0) sweep.spread = (hi - lo) / mean;
  return sweep;
}

void write_csv(std::ostream& os, const ExperimentResult& result) {
  os << "network_id,assignment_id,scheme,slots,degradation_vs_pnc9\n";
  char buf[64];
  for (const auto& t : result.trials) {
    std::snprintf(buf, sizeof buf, "%.6f", t.degradation_vs_pnc9);
    os << t.network_id << ',' << t.assignment_id << ',' << t.scheme << ','
       << t.slots << ',' << buf << '\n';
  }
}

}  // namespace pnc
