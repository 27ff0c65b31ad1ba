// Microbenchmarks for the hot paths: pattern replay and search, instance
// identification, LP scheduling end to end, the greedy heuristic, frame
// encode/decode, and network generation. Run with --benchmark_filter=... to
// narrow.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pnc/atoms.hpp"
#include "pnc/engine.hpp"
#include "pnc/experiment.hpp"
#include "pnc/identify.hpp"
#include "pnc/mac.hpp"
#include "pnc/schedule.hpp"
#include "pnc/topology.hpp"

namespace {

void BM_VerifyCatalog(benchmark::State& state) {
  const auto& classes = pnc::catalog();
  for (auto _ : state) {
    for (const auto& cls : classes) {
      benchmark::DoNotOptimize(pnc::verify(cls, pnc::RelayMode::pnc));
      benchmark::DoNotOptimize(pnc::verify(cls, pnc::RelayMode::snc));
    }
  }
}
BENCHMARK(BM_VerifyCatalog);

void BM_MinSlots(benchmark::State& state) {
  const auto& cls = pnc::atom(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = pnc::min_slots(cls.ci, cls.flows);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_MinSlots)->Arg(1)->Arg(5)->Arg(6)->Arg(8);

void BM_GenerateNetwork(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto net =
        pnc::generate_network(static_cast<int>(state.range(0)), 0.5, seed++);
    benchmark::DoNotOptimize(net);
  }
}
BENCHMARK(BM_GenerateNetwork)->Arg(10)->Arg(30)->Arg(100);

void BM_Identify(benchmark::State& state) {
  auto net = pnc::generate_network(static_cast<int>(state.range(0)), 0.5, 1);
  for (auto _ : state) {
    auto instances = pnc::identify(net);
    benchmark::DoNotOptimize(instances);
  }
}
BENCHMARK(BM_Identify)->Arg(10)->Arg(20)->Arg(30);

std::vector<int> bench_demands(const pnc::Network& net, std::uint64_t seed) {
  return pnc::draw_demands(net, {pnc::TrafficSpec::Mode::fixed, 100}, seed);
}

void BM_ScheduleLp(benchmark::State& state) {
  auto net = pnc::generate_network(static_cast<int>(state.range(0)), 0.5, 1);
  auto demands = bench_demands(net, 2);
  auto scheme = pnc::scheme_config("pnc9");
  pnc::ScheduleOptions options;
  options.build_roster = false;
  for (auto _ : state) {
    auto sched = pnc::schedule(net, demands, scheme, options);
    benchmark::DoNotOptimize(sched);
  }
}
BENCHMARK(BM_ScheduleLp)->Arg(10)->Arg(30);

void BM_ScheduleGreedy(benchmark::State& state) {
  auto net = pnc::generate_network(static_cast<int>(state.range(0)), 0.5, 1);
  auto demands = bench_demands(net, 2);
  auto scheme = pnc::scheme_config("pnc9");
  pnc::ScheduleOptions options;
  options.greedy = true;
  options.build_roster = false;
  for (auto _ : state) {
    auto sched = pnc::schedule(net, demands, scheme, options);
    benchmark::DoNotOptimize(sched);
  }
}
BENCHMARK(BM_ScheduleGreedy)->Arg(10)->Arg(30);

void BM_MacRoundTrip(benchmark::State& state) {
  pnc::AssignmentFrame frame;
  const int w = 2;
  std::mt19937_64 gen(3);
  for (int i = 0; i < 30; ++i) {
    pnc::AssignmentFrame::Entry entry;
    entry.sid = static_cast<std::uint16_t>(i + 1);
    for (int k = 0; k < w; ++k) {
      pnc::AssignmentSlot slot;
      slot.start = 1 + static_cast<int>(gen() % 200);
      slot.role.class_id = 1 + static_cast<int>(gen() % 9);
      slot.role.role_index = 0;
      entry.slots.push_back(slot);
    }
    frame.entries.push_back(std::move(entry));
  }
  for (auto _ : state) {
    auto bytes = pnc::encode(frame);
    auto back = pnc::decode_assignment(bytes, w);
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_MacRoundTrip);

}  // namespace

BENCHMARK_MAIN();
