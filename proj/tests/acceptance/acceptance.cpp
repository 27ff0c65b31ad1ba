// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the exit status is the number of failures. The statistical
// checks run the full Monte Carlo pipeline at desk scale (100 trials per
// cell), so the binary takes a few minutes in total; per-check wall times are
// printed to make regressions visible.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "../fixtures.hpp"
#include "pnc/atoms.hpp"
#include "pnc/engine.hpp"
#include "pnc/experiment.hpp"
#include "pnc/identify.hpp"
#include "pnc/mac.hpp"
#include "pnc/rng.hpp"
#include "pnc/schedule.hpp"
#include "pnc/topology.hpp"

using namespace pnc;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int number, const char* title) : number_(number), title_(title) {
    start_ = std::chrono::steady_clock::now();
  }

  void expect(bool ok, const std::string& detail) {
    if (!ok) {
      problems_.push_back(detail);
    }
  }

  void note(const std::string& text) { notes_.push_back(text); }

  ~Criterion() {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    bool ok = problems_.empty();
    failures += !ok;
    std::printf("[%s] criterion %2d: %s (%lld ms)\n", ok ? "PASS" : "FAIL",
                number_, title_, static_cast<long long>(elapsed));
    for (const auto& n : notes_) std::printf("         note: %s\n", n.c_str());
    for (const auto& p : problems_)
      std::printf("         problem: %s\n", p.c_str());
    std::fflush(stdout);
  }

 private:
  int number_;
  const char* title_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> problems_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0,
                double d = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, a, b, c, d);
  return buffer;
}

ExperimentConfig desk_config(int n_r, int k,
                             const std::vector<std::string>& schemes,
                             std::uint64_t seed = 0) {
  ExperimentConfig config;
  config.n_networks = 10;
  config.n_assignments = 10;
  config.n_r = n_r;
  config.traffic = {TrafficSpec::Mode::fixed, k};
  for (const auto& name : schemes) config.schemes.push_back(scheme_config(name));
  config.master_seed = seed;
  return config;
}

const Metrics& metric(const ExperimentResult& result,
                      const std::string& scheme) {
  for (const auto& m : result.metrics)
    if (m.scheme == scheme) return m;
  throw std::runtime_error("no metrics for scheme " + scheme);
}

// Mean relative slowdown of one run against another with identical trials,
// paired by (network, assignment).
double paired_mean_degradation(const ExperimentResult& slow,
                               const ExperimentResult& fast,
                               const std::string& scheme) {
  std::map<std::pair<int, int>, double> baseline;
  for (const auto& t : fast.trials)
    if (t.scheme == scheme) baseline[{t.network_id, t.assignment_id}] = t.slots;
  double sum = 0;
  int n = 0;
  for (const auto& t : slow.trials) {
    if (t.scheme != scheme) continue;
    double base = baseline.at({t.network_id, t.assignment_id});
    sum += 100.0 * (t.slots - base) / t.slots;
    ++n;
  }
  return sum / n;
}

void criterion_1_catalog() {
  Criterion c(1, "every atom verifies and costs the reference table");
  static constexpr SlotCosts kTable[9] = {
      {2, 3, 4}, {2, 3, 4}, {4, 5, 6}, {4, 5, 6}, {2, 3, 4},
      {3, 5, 8}, {4, 5, 6}, {3, 4, 6}, {5, 8, 12}};
  for (const auto& cls : catalog()) {
    c.expect(verify(cls, RelayMode::pnc), cls.roman + ": coded replay fails");
    c.expect(verify(cls, RelayMode::snc),
             cls.roman + ": store-and-forward replay fails");
    const auto& want = kTable[cls.id - 1];
    c.expect(cls.costs.pnc == want.pnc && cls.costs.snc == want.snc &&
                 cls.costs.nonnc == want.nonnc,
             cls.roman + ": cost row mismatch");
    c.expect(slot_cost(cls.id, RelayMode::pnc) == want.pnc &&
                 slot_cost(cls.id, RelayMode::snc) == want.snc &&
                 slot_cost(cls.id, RelayMode::nonnc) == want.nonnc,
             cls.roman + ": slot_cost mismatch");
  }
}

void criterion_2_minimality() {
  Criterion c(2, "pattern search reproduces the minimum slot counts");
  for (const auto& cls : catalog()) {
    const int table = cls.costs.pnc;
    if (cls.id == 7 || cls.id == 9) {
      for (bool relaxed : {false, true}) {
        SearchOptions options;
        options.max_slots = table - 1;
        options.allow_peripheral_downlink = relaxed;
        options.budget = 4'000'000'000LL;
        auto result = min_slots(cls.ci, cls.flows, options);
        c.expect(result.status == SearchStatus::absent,
                 cls.roman + (relaxed ? " (relaxed downlink)" : "") +
                     ": expected no pattern below the table value");
      }
    } else {
      auto result = min_slots(cls.ci, cls.flows);
      c.expect(result.status == SearchStatus::found,
               cls.roman + ": search did not finish");
      c.expect(result.slots == table,
               cls.roman + ": minimum " + std::to_string(result.slots) +
                   " != table " + std::to_string(table));
    }
  }
}

void criterion_3_square_example() {
  Criterion c(3, "square example: seven instances, nine optimal slots");
  auto net = fixtures::fig3_network();
  auto instances = identify(net);
  int per_class[10] = {};
  for (const auto& inst : instances) per_class[inst.class_id]++;
  c.expect(instances.size() == 7,
           "expected 7 instances, got " + std::to_string(instances.size()));
  c.expect(per_class[1] == 2 && per_class[5] == 4 && per_class[6] == 1,
           fmt("census %g/%g/%g != 2/4/1", per_class[1], per_class[5],
               per_class[6]));

  std::vector<int> demands{3, 4, 2, 1};
  auto sched = schedule(net, demands, scheme_config("pnc9"));
  c.expect(sched.total_slots <= 9,
           "schedule used " + std::to_string(sched.total_slots) + " > 9");

  std::vector<double> demand_values(demands.begin(), demands.end());
  int exact = fixtures::ilp_min_cost(fixtures::to_lp_columns(sched.columns),
                                     demand_values);
  c.expect(sched.total_slots == exact,
           fmt("integral optimum %g but schedule returned %g", exact,
               sched.total_slots));
}

void criterion_4_thirty_node_example() {
  Criterion c(4, "thirty-node example: ten slots full catalog, sixteen "
                 "exchanges only");
  auto net = fixtures::fig5_network();
  auto demands = fixtures::fig5_demands(net);

  auto full = schedule(net, demands, scheme_config("pnc9"));
  c.expect(full.total_slots == 10,
           "full catalog used " + std::to_string(full.total_slots) + " != 10");
  // The relaxation already reaches ten, so ten is certified optimal.
  c.expect(std::abs(full.lp_objective - 10.0) < 1e-6,
           fmt("relaxation %.6f != 10", full.lp_objective));

  auto exchanges = schedule(net, demands, scheme_config("pnc-i"));
  c.expect(exchanges.total_slots == 16,
           "exchange-only used " + std::to_string(exchanges.total_slots) +
               " != 16");
}

void criterion_5_store_and_forward_identity() {
  Criterion c(5, "store-and-forward always pays two slots per packet");
  for (int k : {10, 37, 100}) {
    auto config = desk_config(12, k, {"nonnc"});
    config.n_networks = 4;
    config.n_assignments = 4;
    auto result = run_experiment(config);
    c.expect(result.trial_errors.empty(), "trials dropped");
    for (const auto& t : result.trials)
      c.expect(t.slots == 2 * k,
               fmt("K=%g: trial used %g != %g slots", k, t.slots, 2.0 * k));
    const auto& m = metric(result, "nonnc");
    c.expect(m.rsd == 0.0, fmt("K=%g: rsd %.6f != 0", k, m.rsd));
  }
}

void criterion_6_scheme_comparison() {
  Criterion c(6, "hundred-trial scheme comparison lands on the reference "
                 "means");
  auto result =
      run_experiment(desk_config(30, 100, {"pnc9", "pnc-i", "snc9", "nonnc"}));
  c.expect(result.trial_errors.empty(), "trials dropped");

  struct Band {
    const char* scheme;
    double reference;
  };
  for (auto [scheme, reference] :
       {Band{"pnc9", 103.2}, Band{"pnc-i", 183.1}, Band{"snc9", 148.3}}) {
    double mean = metric(result, scheme).mean_ts;
    c.note(fmt((std::string(scheme) + " mean %.1f (reference %.1f)").c_str(),
               mean, reference));
    c.expect(std::abs(mean - reference) <= 0.10 * reference,
             fmt((std::string(scheme) + " mean %.1f outside ±10%% of %.1f")
                     .c_str(),
                 mean, reference));
  }
  double pnc9 = metric(result, "pnc9").mean_ts;
  double twrc = metric(result, "pnc-i").mean_ts;
  double snc9 = metric(result, "snc9").mean_ts;
  double nonnc = metric(result, "nonnc").mean_ts;
  c.expect(pnc9 < snc9 && pnc9 < twrc && snc9 < nonnc && twrc < nonnc,
           fmt("ordering broken: %.1f / %.1f / %.1f / %.1f", pnc9, snc9, twrc,
               nonnc));
  c.expect(nonnc == 200.0, fmt("store-and-forward mean %.1f != 200", nonnc));
}

void criterion_7_subset_quality() {
  Criterion c(7, "two-flow subsets stay within bounded degradation");
  for (int n_r : {30, 10}) {
    auto result =
        run_experiment(desk_config(n_r, 100, {"pnc9", "pnc-i-ii-v"}));
    c.expect(result.trial_errors.empty(), "trials dropped");
    const auto& m = metric(result, "pnc-i-ii-v");
    c.note(fmt("pnc-i-ii-v N_R=%g: mean degradation %.2f%%, tail %.3f",
               n_r, m.mean_degradation, m.tail_gamma));
    c.expect(m.mean_degradation <= 5.0,
             fmt("pnc-i-ii-v N_R=%g mean degradation %.2f%% > 5%%", n_r,
                 m.mean_degradation));
    c.expect(m.tail_gamma <= 0.08,
             fmt("pnc-i-ii-v N_R=%g tail %.3f > 0.08", n_r, m.tail_gamma));
  }
  for (int k : {100, 1000}) {
    auto result = run_experiment(desk_config(30, k, {"pnc9", "pnc-iv"}));
    c.expect(result.trial_errors.empty(), "trials dropped");
    const auto& m = metric(result, "pnc-iv");
    c.note(fmt("pnc-iv K=%g: mean degradation %.2f%%", k,
               m.mean_degradation));
    c.expect(m.mean_degradation <= 10.0,
             fmt("pnc-iv K=%g mean degradation %.2f%% > 10%%", k,
                 m.mean_degradation));
  }
}

void criterion_8_single_atoms_fall_short() {
  Criterion c(8, "single-atom schemes degrade badly on small networks");
  std::vector<std::string> schemes{"pnc9"};
  for (int id = 1; id <= 9; ++id)
    schemes.push_back("pnc-only-" + to_roman(id));
  schemes.push_back("pnc6");
  // Roman spellings in scheme names are lowercase.
  for (auto& name : schemes)
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });

  auto result = run_experiment(desk_config(10, 100, schemes));
  c.expect(result.trial_errors.empty(), "trials dropped");
  for (const auto& name : schemes) {
    if (name == "pnc9" || name == "pnc6") continue;
    const auto& m = metric(result, name);
    c.note(name + fmt(" mean degradation %.2f%%", m.mean_degradation));
    // Known shortfall: the three-node chain (class II) embeds so densely at
    // this size that scheduling with it alone stays within a few percent of
    // the full scheme. See the single-atom discussion in README.md.
    c.expect(m.mean_degradation >= 10.0,
             name + fmt(" mean degradation %.2f%% < 10%%",
                        m.mean_degradation));
  }
  const auto& six = metric(result, "pnc6");
  c.note(fmt("pnc6 mean degradation %.2f%%", six.mean_degradation));
  c.expect(six.mean_degradation >= 20.0,
           fmt("pnc6 mean degradation %.2f%% < 20%%", six.mean_degradation));
}

void criterion_9_greedy_quality() {
  Criterion c(9, "greedy scheduling stays close to the relaxation");
  for (int n_r : {30, 10}) {
    for (const char* scheme : {"pnc9", "pnc-i-ii-v"}) {
      auto lp_config = desk_config(n_r, 100, {scheme});
      auto greedy_config = lp_config;
      greedy_config.greedy = true;
      auto lp = run_experiment(lp_config);
      auto greedy = run_experiment(greedy_config);
      c.expect(lp.trial_errors.empty() && greedy.trial_errors.empty(),
               "trials dropped");
      double mean = paired_mean_degradation(greedy, lp, scheme);
      double limit = std::string(scheme) == "pnc9" ? 15.0 : 12.0;
      c.note(fmt((std::string(scheme) +
                  " N_R=%g: greedy-vs-relaxation %.2f%%")
                     .c_str(),
                 n_r, mean));
      c.expect(mean <= limit,
               fmt((std::string(scheme) + " N_R=%g: %.2f%% > %.0f%%").c_str(),
                   n_r, mean, limit));
    }
  }
}

void criterion_10_codec() {
  Criterion c(10, "codec lengths, overhead, round trips, and corruption");
  for (int n_r = 1; n_r <= 64; ++n_r) {
    for (int w = 1; w <= 8; ++w) {
      RequestFrame req;
      req.n_r = n_r;
      req.scheduled.assign(n_r, true);
      req.w = w;
      c.expect(static_cast<int>(encode(req).size()) ==
                   13 + (n_r + 7) / 8,
               fmt("request length at n_r=%g", n_r));
      DemandFrame dem;
      dem.dids.assign(w, 1);
      c.expect(static_cast<int>(encode(dem).size()) == 12 + 2 * w,
               fmt("demand length at w=%g", w));
      AssignmentFrame asg;
      for (int i = 0; i < n_r; ++i) {
        AssignmentFrame::Entry entry;
        entry.sid = static_cast<std::uint16_t>(i + 1);
        entry.slots.assign(w, AssignmentSlot{});
        asg.entries.push_back(std::move(entry));
      }
      c.expect(static_cast<int>(encode(asg).size()) ==
                   12 + (2 + 2 * w) * n_r,
               fmt("assignment length at n_r=%g w=%g", n_r, w));
    }
  }

  double mean_overhead = per_packet_overhead(6, 1);
  c.expect(mean_overhead >= 22.0 && mean_overhead <= 23.0,
           fmt("per-packet overhead %.3f outside [22, 23]", mean_overhead));

  std::mt19937_64 gen(99);
  auto random_assignment = [&] {
    AssignmentFrame f;
    int n_r = 1 + static_cast<int>(uniform_index(gen, 12));
    int w = 1 + static_cast<int>(uniform_index(gen, 4));
    for (int i = 0; i < n_r; ++i) {
      AssignmentFrame::Entry entry;
      entry.sid = static_cast<std::uint16_t>(gen());
      for (int k = 0; k < w; ++k) {
        AssignmentSlot slot;
        if (gen() & 1) {
          slot.start = 1 + static_cast<int>(uniform_index(gen, 255));
          slot.role.class_id = 1 + static_cast<int>(uniform_index(gen, 9));
          slot.role.role_index = static_cast<int>(uniform_index(
              gen, static_cast<std::size_t>(
                       atom(slot.role.class_id).peripheral_count())));
        }
        entry.slots.push_back(slot);
      }
      f.entries.push_back(std::move(entry));
    }
    return f;
  };

  int round_trips = 0, corruptions_caught = 0;
  const int kRounds = 10'000;
  for (int t = 0; t < kRounds; ++t) {
    switch (t % 3) {
      case 0: {
        RequestFrame f;
        f.n_r = 1 + static_cast<int>(uniform_index(gen, 64));
        for (int i = 0; i < f.n_r; ++i) f.scheduled.push_back(gen() & 1);
        f.w = 1 + static_cast<int>(uniform_index(gen, 8));
        auto back = decode_request(encode(f));
        bool same = back.w == f.w;
        for (int i = 0; i < f.n_r && same; ++i)
          same = back.scheduled[i] == static_cast<bool>(f.scheduled[i]);
        round_trips += same;
        break;
      }
      case 1: {
        DemandFrame f;
        int w = 1 + static_cast<int>(uniform_index(gen, 8));
        for (int i = 0; i < w; ++i)
          f.dids.push_back(static_cast<std::uint16_t>(gen()));
        round_trips += decode_demand(encode(f)) == f;
        break;
      }
      default: {
        auto f = random_assignment();
        round_trips +=
            decode_assignment(encode(f),
                              static_cast<int>(f.entries[0].slots.size())) ==
            f;
        break;
      }
    }
  }
  c.expect(round_trips == kRounds,
           fmt("%g of %g round trips mismatched",
               double(kRounds - round_trips), kRounds));

  for (int t = 0; t < kRounds; ++t) {
    DemandFrame f;
    int w = 1 + static_cast<int>(uniform_index(gen, 8));
    for (int i = 0; i < w; ++i)
      f.dids.push_back(static_cast<std::uint16_t>(gen()));
    auto bytes = encode(f);
    bytes[uniform_index(gen, bytes.size())] ^=
        static_cast<std::uint8_t>(1 + uniform_index(gen, 255));
    try {
      (void)decode_demand(bytes);
    } catch (const DecodeError& e) {
      corruptions_caught += e.kind() == DecodeErrorKind::fcs_failure;
    }
  }
  c.expect(corruptions_caught == kRounds,
           fmt("%g of %g corruptions slipped through",
               double(kRounds - corruptions_caught), kRounds));
}

void criterion_11_molecules() {
  Criterion c(11, "molecule decompositions hit the reference slot totals");
  auto m8 = molecule(8);
  c.expect(m8.paired_slots == 6 && m8.exchange_slots == 6,
           fmt("three-flow ring pair: %g paired vs %g exchanges",
               m8.paired_slots, m8.exchange_slots));
  auto m3 = molecule(3);
  c.expect(m3.paired_slots == 8 && m3.exchange_slots == 6,
           fmt("triangle pair: %g paired vs %g exchanges", m3.paired_slots,
               m3.exchange_slots));
  c.expect(m3.exchange_slots < m3.paired_slots,
           "triangle decomposition is not strictly cheaper");
}

void criterion_12_radius_sweep() {
  Criterion c(12, "inner-radius sweep stays within an eight percent spread");
  ExperimentConfig config = desk_config(30, 100, {"pnc9"});
  config.n_networks = 5;
  config.n_assignments = 5;
  auto sweep = radius_sweep(config, {0.1, 0.5, 0.9});
  for (const auto& p : sweep.points)
    c.note(fmt("inner radius %.1f: mean %.1f slots", p.r_inner, p.mean_ts));
  c.expect(sweep.spread <= 0.08,
           fmt("spread %.4f > 0.08", sweep.spread));
}

}  // namespace

int main() {
  criterion_1_catalog();
  criterion_2_minimality();
  criterion_3_square_example();
  criterion_4_thirty_node_example();
  criterion_5_store_and_forward_identity();
  criterion_6_scheme_comparison();
  criterion_7_subset_quality();
  criterion_8_single_atoms_fall_short();
  criterion_9_greedy_quality();
  criterion_10_codec();
  criterion_11_molecules();
  criterion_12_radius_sweep();

  std::printf("%d of 12 criteria failed\n", failures);
  return failures;
}
