#pragma once

// Monte Carlo comparison driver: seeded annulus networks and traffic
// assignments, every scheme scheduled on identical inputs per trial, and
// the aggregate metrics used by the evaluation tables.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pnc/schedule.hpp"
#include "pnc/topology.hpp"

namespace pnc {

struct TrafficSpec {
  enum class Mode { fixed, saturated };
  Mode mode = Mode::fixed;
  int amount = 100;  // K packets in fixed mode, W per node in saturated mode
};

/// Parses "fixed:K" or "saturated:W"; throws std::invalid_argument.
TrafficSpec parse_traffic(std::string_view s);

struct ExperimentConfig {
  int n_networks = 10;
  int n_assignments = 10;
  int n_r = 30;
  TrafficSpec traffic;
  double r_inner = 0.5;
  double alpha = kDefaultAlpha;
  std::vector<SchemeConfig> schemes;
  std::uint64_t master_seed = 0;
  bool greedy = false;  // greedy scheduling for the evaluated schemes; the
                        // degradation benchmark stays the LP path
};

struct TrialRecord {
  int network_id = 0;
  int assignment_id = 0;
  std::string scheme;
  int slots = 0;
  double degradation_vs_pnc9 = 0;
};

struct Metrics {
  std::string scheme;
  int trials = 0;
  double mean_ts = 0;
  double rsd = 0;               // population standard deviation / mean
  double mean_degradation = 0;  // vs the LP PNC-9 benchmark
  double tail_gamma = 0;        // fraction of trials with degradation > 10%
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;    // trial-major, schemes in config order
  std::vector<Metrics> metrics;       // schemes in config order
  std::vector<std::string> trial_errors;
};

/// (t_scheme - t_benchmark) / t_scheme * 100; throws std::invalid_argument
/// on a nonpositive slot count.
double degradation(double t_scheme, double t_benchmark);

/// Per-trial seed derivation from the master seed; exposed so external
/// tooling can reproduce any single trial in isolation.
std::uint64_t network_seed(std::uint64_t master, int network_id);
std::uint64_t assignment_seed(std::uint64_t master, int network_id,
                              int assignment_id);

/// Demand vector indexed by potential_flows(net). Fixed mode spreads
/// `amount` packets uniformly over all potential flows; saturated mode
/// draws `amount` packets per node over that node's outgoing flows,
/// skipping nodes with none. Throws std::runtime_error when the network
/// has no potential flows at all.
std::vector<int> draw_demands(const Network& net, const TrafficSpec& traffic,
                              std::uint64_t seed);

/// Runs all trials sequentially; a trial whose scheduling throws is dropped
/// from the table and metrics, with the reason in trial_errors.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepPoint {
  double r_inner = 0;
  double mean_ts = 0;
};
struct SweepResult {
  std::vector<SweepPoint> points;
  double spread = 0;  // (max - min) / mean over the per-radius means
};

/// Reruns the LP PNC-9 benchmark at each inner radius with the same seeds.
SweepResult radius_sweep(ExperimentConfig config,
                         const std::vector<double>& radii);

/// Columns: network_id, assignment_id, scheme, slots, degradation_vs_pnc9.
void write_csv(std::ostream& os, const ExperimentResult& result);

}  // namespace pnc
