// pnc: command-line front end over the core library. Subcommands mirror the
// library modules: catalog and pattern verification, instance identification
// on generated or loaded networks, schedule computation, MAC frame codec on
// hex streams, and the Monte Carlo experiment driver.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnc/atoms.hpp"
#include "pnc/engine.hpp"
#include "pnc/experiment.hpp"
#include "pnc/identify.hpp"
#include "pnc/mac.hpp"
#include "pnc/schedule.hpp"
#include "pnc/topology.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string label_str(pnc::Label l) { return std::string(1, l); }

const char* kind_str(pnc::AtomKind k) {
  switch (k) {
    case pnc::AtomKind::twrc: return "twrc";
    case pnc::AtomKind::triangle: return "triangle";
    case pnc::AtomKind::cross: return "cross";
    case pnc::AtomKind::star: return "star";
  }
  return "?";
}

json pattern_json(const pnc::TransmissionPattern& pattern) {
  json slots = json::array();
  for (const auto& slot : pattern) {
    json tx = json::array(), rx = json::array();
    for (auto [node, expr] : slot.transmissions)
      tx.push_back({{"node", label_str(node)}, {"expr", int(expr)}});
    for (auto [node, expr] : slot.required_receptions)
      rx.push_back({{"node", label_str(node)}, {"expr", int(expr)}});
    slots.push_back(
        {{"transmissions", tx}, {"required_receptions", rx}});
  }
  return slots;
}

json atom_json(const pnc::AtomClass& cls) {
  json peripherals = json::array();
  for (pnc::Label p : cls.ci.peripherals) peripherals.push_back(label_str(p));
  json c_edges = json::array();
  for (auto [a, b] : cls.ci.c_edges)
    c_edges.push_back({label_str(a), label_str(b)});
  json i_edges = json::array();
  for (const auto& e : cls.ci.i_edges)
    i_edges.push_back({{"interferer", label_str(e.interferer)},
                       {"receiver", label_str(e.receiver)},
                       {"guard_tx", label_str(e.guard_tx)},
                       {"guard_rx", label_str(e.guard_rx)}});
  json flows = json::array();
  for (auto [src, dst] : cls.flows)
    flows.push_back({label_str(src), label_str(dst)});
  return {{"id", cls.id},
          {"roman", cls.roman},
          {"kind", kind_str(cls.kind)},
          {"peripherals", peripherals},
          {"c_edges", c_edges},
          {"i_edges", i_edges},
          {"flows", flows},
          {"pnc_pattern", pattern_json(cls.pnc_pattern)},
          {"snc_pattern", pattern_json(cls.snc_pattern)},
          {"costs",
           {{"pnc", cls.costs.pnc},
            {"snc", cls.costs.snc},
            {"nonnc", cls.costs.nonnc}}}};
}

const char* violation_str(pnc::ViolationKind k) {
  switch (k) {
    case pnc::ViolationKind::half_duplex: return "half_duplex";
    case pnc::ViolationKind::too_many_transmitters:
      return "too_many_transmitters";
    case pnc::ViolationKind::unguarded_interferer:
      return "unguarded_interferer";
    case pnc::ViolationKind::expr_not_in_span: return "expr_not_in_span";
    case pnc::ViolationKind::reception_mismatch: return "reception_mismatch";
  }
  return "?";
}

json report_json(const pnc::ValidityReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"slot", v.slot},
                          {"node", label_str(v.node)},
                          {"kind", violation_str(v.kind)}});
  json spans = json::object();
  for (auto [node, span] : report.final_spans)
    spans[label_str(node)] = span.bits;
  return {{"valid", report.valid},
          {"violations", violations},
          {"final_spans", spans}};
}

pnc::Network net_from_json(const json& j) {
  pnc::Network net;
  net.alpha = j.value("alpha", pnc::kDefaultAlpha);
  for (const auto& p : j.at("nodes"))
    net.nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return net;
}

json net_json(const pnc::Network& net) {
  json nodes = json::array();
  for (const auto& p : net.nodes) nodes.push_back({p.x, p.y});
  return {{"alpha", net.alpha}, {"nodes", nodes}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

std::vector<std::uint8_t> parse_hex(const std::string& text) {
  std::vector<std::uint8_t> bytes;
  int hi = -1;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw std::runtime_error(std::string("bad hex character '") + c + "'");
    if (hi < 0) hi = v;
    else { bytes.push_back(std::uint8_t(hi << 4 | v)); hi = -1; }
  }
  if (hi >= 0) throw std::runtime_error("odd number of hex digits");
  return bytes;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

template <size_t N>
std::array<std::uint8_t, N> fixed_bytes(const json& j, const char* key,
                                        const char* fallback) {
  auto bytes = parse_hex(j.value(key, fallback));
  if (bytes.size() != N)
    throw std::runtime_error(std::string(key) + " must be " +
                             std::to_string(N) + " bytes of hex");
  std::array<std::uint8_t, N> out{};
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

json request_json(const pnc::RequestFrame& f) {
  json scheduled = json::array();
  for (bool b : f.scheduled) scheduled.push_back(b ? 1 : 0);
  return {{"fc", to_hex(f.fc)},
          {"bssid", to_hex(f.bssid)},
          {"n_r", f.n_r},
          {"scheduled", scheduled},
          {"w", f.w}};
}

pnc::RequestFrame request_from_json(const json& j) {
  pnc::RequestFrame f;
  f.fc = fixed_bytes<2>(j, "fc", "0000");
  f.bssid = fixed_bytes<6>(j, "bssid", "000000000000");
  f.n_r = j.at("n_r").get<int>();
  for (const auto& b : j.at("scheduled"))
    f.scheduled.push_back(b.get<int>() != 0);
  f.w = j.value("w", 1);
  return f;
}

json demand_json(const pnc::DemandFrame& f) {
  return {{"fc", to_hex(f.fc)},
          {"bssid", to_hex(f.bssid)},
          {"dids", f.dids}};
}

pnc::DemandFrame demand_from_json(const json& j) {
  pnc::DemandFrame f;
  f.fc = fixed_bytes<2>(j, "fc", "0000");
  f.bssid = fixed_bytes<6>(j, "bssid", "000000000000");
  for (const auto& d : j.at("dids"))
    f.dids.push_back(d.get<std::uint16_t>());
  return f;
}

json assignment_json(const pnc::AssignmentFrame& f) {
  json entries = json::array();
  for (const auto& e : f.entries) {
    json slots = json::array();
    for (const auto& s : e.slots)
      slots.push_back({{"start", s.start},
                       {"class", s.role.class_id},
                       {"role", s.role.role_index}});
    entries.push_back({{"sid", e.sid}, {"slots", slots}});
  }
  return {{"fc", to_hex(f.fc)}, {"bssid", to_hex(f.bssid)},
          {"entries", entries}};
}

pnc::AssignmentFrame assignment_from_json(const json& j) {
  pnc::AssignmentFrame f;
  f.fc = fixed_bytes<2>(j, "fc", "0000");
  f.bssid = fixed_bytes<6>(j, "bssid", "000000000000");
  for (const auto& e : j.at("entries")) {
    pnc::AssignmentFrame::Entry entry;
    entry.sid = e.at("sid").get<std::uint16_t>();
    for (const auto& s : e.at("slots"))
      entry.slots.push_back({s.at("start").get<int>(),
                             {s.value("class", 0), s.value("role", 0)}});
    f.entries.push_back(std::move(entry));
  }
  return f;
}

json metrics_json(const pnc::Metrics& m) {
  return {{"scheme", m.scheme},
          {"trials", m.trials},
          {"mean_ts", m.mean_ts},
          {"rsd", m.rsd},
          {"mean_degradation", m.mean_degradation},
          {"tail_gamma", m.tail_gamma}};
}

int run_catalog() {
  json out = json::array();
  for (const auto& cls : pnc::catalog()) out.push_back(atom_json(cls));
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_verify_atoms(bool as_json) {
  int failures = 0;
  json out = json::array();
  for (const auto& cls : pnc::catalog()) {
    bool pnc_ok = pnc::verify(cls, pnc::RelayMode::pnc);
    bool snc_ok = pnc::verify(cls, pnc::RelayMode::snc);
    failures += !pnc_ok + !snc_ok;
    if (as_json) {
      out.push_back(
          {{"id", cls.id},
           {"roman", cls.roman},
           {"pnc", report_json(pnc::simulate(cls.pnc_pattern, cls.ci,
                                             cls.flows))},
           {"snc", report_json(pnc::simulate(cls.snc_pattern, cls.snc_ci(),
                                             cls.flows))},
           {"pnc_valid", pnc_ok},
           {"snc_valid", snc_ok}});
    } else {
      std::printf("atom %-4s pnc %s  snc %s\n", cls.roman.c_str(),
                  pnc_ok ? "PASS" : "FAIL", snc_ok ? "PASS" : "FAIL");
    }
  }
  if (as_json) std::cout << out.dump(2) << "\n";
  return failures == 0 ? 0 : 1;
}

int run_min_slots(int atom_id, const pnc::SearchOptions& options) {
  const auto& cls = pnc::atom(atom_id);
  auto result = pnc::min_slots(cls.ci, cls.flows, options);
  const char* status =
      result.status == pnc::SearchStatus::found      ? "found"
      : result.status == pnc::SearchStatus::absent   ? "absent"
                                                     : "inconclusive";
  json out = {{"atom", cls.roman},
              {"status", status},
              {"states_examined", result.states_examined}};
  if (result.status == pnc::SearchStatus::found) {
    out["slots"] = result.slots;
    out["pattern"] = pattern_json(result.pattern);
  }
  std::cout << out.dump(2) << "\n";
  return result.status == pnc::SearchStatus::inconclusive ? 2 : 0;
}

int run_identify(const std::string& network_path, int nodes, double inner,
                 std::uint64_t seed, double alpha, bool connectivity_only,
                 bool dump_matrix) {
  pnc::Network net;
  if (!network_path.empty()) {
    net = net_from_json(load_json_file(network_path));
  } else {
    net = pnc::generate_network(nodes, inner, seed, alpha);
  }
  auto mode = connectivity_only ? pnc::MatchMode::connectivity_only
                                : pnc::MatchMode::full;
  auto instances = pnc::identify(net, mode);
  auto pf = pnc::potential_flows(net);

  json insts = json::array();
  for (const auto& in : instances) {
    json fl = json::array();
    for (int f : in.flows) fl.push_back(f);
    insts.push_back(
        {{"class", in.class_id}, {"nodes", in.nodes}, {"flows", fl}});
  }
  json flows = json::array();
  for (const auto& f : pf) flows.push_back({f.src, f.dst});
  json out = {{"network", net_json(net)},
              {"potential_flows", flows},
              {"instances", insts},
              {"matrix",
               {{"rows", pf.size()}, {"cols", instances.size()}}}};
  if (dump_matrix) {
    json entries = json::array();
    auto matrix = pnc::incidence_matrix(net, instances);
    for (size_t r = 0; r < matrix.size(); ++r)
      for (size_t c = 0; c < matrix[r].size(); ++c)
        if (matrix[r][c]) entries.push_back({r, c});
    out["matrix"]["entries"] = entries;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_schedule(const std::string& network_path,
                 const std::string& demands_path, const std::string& scheme,
                 bool greedy) {
  pnc::Network net = net_from_json(load_json_file(network_path));
  json dj = load_json_file(demands_path);
  std::vector<int> demands;
  for (const auto& d : dj) demands.push_back(d.get<int>());

  pnc::ScheduleOptions options;
  options.greedy = greedy;
  auto s = pnc::schedule(net, demands, pnc::scheme_config(scheme), options);

  json execs = json::array();
  for (size_t j = 0; j < s.executions.size(); ++j) {
    if (s.executions[j] == 0) continue;
    const auto& col = s.columns[j];
    json fl = json::array();
    for (int f : col.flows) fl.push_back(f);
    execs.push_back({{"class", col.class_id},
                     {"nodes", col.nodes},
                     {"flows", fl},
                     {"count", s.executions[j]}});
  }
  json roster = json::array();
  for (size_t i = 0; i < s.roster.size(); ++i) {
    const auto& slot = s.roster[i];
    json tx = json::array(), rx = json::array();
    for (auto [node, expr] : slot.transmissions)
      tx.push_back({{"node", node}, {"expr", int(expr)}});
    for (auto [node, expr] : slot.receptions)
      rx.push_back({{"node", node}, {"expr", int(expr)}});
    roster.push_back({{"slot", i + 1},
                      {"column", slot.column},
                      {"repetition", slot.repetition},
                      {"pattern_slot", slot.pattern_slot},
                      {"transmissions", tx},
                      {"receptions", rx}});
  }
  json out = {{"scheme", scheme},
              {"total_slots", s.total_slots},
              {"executions", execs},
              {"roster", roster},
              {"boundaries", s.boundaries}};
  if (!greedy) out["lp_objective"] = s.lp_objective;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_mac(bool decode, const std::string& frame_kind, int w) {
  std::stringstream buffer;
  buffer << std::cin.rdbuf();
  if (decode) {
    auto bytes = parse_hex(buffer.str());
    json out;
    if (frame_kind == "request") out = request_json(pnc::decode_request(bytes));
    else if (frame_kind == "demand") out = demand_json(pnc::decode_demand(bytes));
    else out = assignment_json(pnc::decode_assignment(bytes, w));
    std::cout << out.dump(2) << "\n";
  } else {
    json j = json::parse(buffer.str());
    std::vector<std::uint8_t> bytes;
    if (frame_kind == "request") bytes = pnc::encode(request_from_json(j));
    else if (frame_kind == "demand") bytes = pnc::encode(demand_from_json(j));
    else bytes = pnc::encode(assignment_from_json(j));
    std::cout << to_hex(bytes) << "\n";
  }
  return 0;
}

int run_experiment(const pnc::ExperimentConfig& config, bool sweep_inner,
                   const std::string& out_path) {
  if (sweep_inner) {
    auto sweep = pnc::radius_sweep(config, {0.1, 0.5, 0.9});
    json points = json::array();
    for (const auto& p : sweep.points)
      points.push_back({{"r_inner", p.r_inner}, {"mean_ts", p.mean_ts}});
    json out = {{"points", points}, {"spread", sweep.spread}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  auto result = pnc::run_experiment(config);
  std::ofstream csv(out_path);
  if (!csv) throw std::runtime_error("cannot open " + out_path);
  pnc::write_csv(csv, result);

  json metrics = json::array();
  for (const auto& m : result.metrics) metrics.push_back(metrics_json(m));
  json out = {{"metrics", metrics},
              {"trials", result.trials.size()},
              {"trial_errors", result.trial_errors},
              {"csv", out_path}};
  std::cout << out.dump(2) << "\n";
  return result.trial_errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"physical-layer network coding scheduling toolkit"};
  app.require_subcommand(1);

  app.add_subcommand("catalog", "dump the atom catalog as JSON");

  auto* verify = app.add_subcommand("verify-atoms",
                                    "replay every atom pattern, per-atom "
                                    "pass/fail");
  bool verify_json = false;
  verify->add_flag("--json", verify_json, "full validity reports as JSON");

  auto* minslots = app.add_subcommand(
      "min-slots", "exhaustive minimum-slot search for one atom class");
  int atom_id = 0;
  pnc::SearchOptions search_options;
  minslots->add_option("--atom", atom_id, "atom class id, 1..9")
      ->required()
      ->check(CLI::Range(1, 9));
  minslots->add_option("--max-slots", search_options.max_slots,
                       "deepest slot count to try");
  minslots->add_option("--budget", search_options.budget,
                       "search states before giving up");
  minslots->add_flag("--allow-peripheral-downlink",
                     search_options.allow_peripheral_downlink,
                     "let peripherals relay in downlink slots");

  auto* identify = app.add_subcommand(
      "identify", "find atom instances in a generated or loaded network");
  std::string id_network;
  int id_nodes = 30;
  double id_inner = 0.5;
  double id_alpha = pnc::kDefaultAlpha;
  std::uint64_t id_seed = 0;
  bool id_conn_only = false, id_matrix = false;
  identify->add_option("--network", id_network,
                       "network JSON file (overrides generation)");
  identify->add_option("--nodes", id_nodes, "node count for generation");
  identify->add_option("--inner", id_inner, "inner annulus radius");
  identify->add_option("--seed", id_seed, "generation seed");
  identify->add_option("--alpha", id_alpha, "interference clearance factor");
  identify->add_flag("--connectivity-only", id_conn_only,
                     "skip interference clearance checks");
  identify->add_flag("--matrix", id_matrix,
                     "dump sparse incidence entries as (row, col) pairs");

  auto* schedule = app.add_subcommand(
      "schedule", "compute a schedule for a network and demand vector");
  std::string sc_network, sc_demands, sc_scheme = "pnc9";
  bool sc_greedy = false;
  schedule->add_option("--network", sc_network, "network JSON file")
      ->required();
  schedule
      ->add_option("--demands", sc_demands,
                   "JSON integer array in potential-flow order")
      ->required();
  schedule->add_option(
      "--scheme", sc_scheme,
      "pnc9|pnc6|snc9|nonnc|pnc-iv|pnc-only-<r>|pnc-<r>(-<r>)*");
  schedule->add_flag("--greedy", sc_greedy, "greedy heuristic instead of LP");

  auto* mac = app.add_subcommand("mac", "encode or decode MAC control frames");
  mac->require_subcommand(1);
  std::string mac_frame;
  int mac_w = 1;
  auto* mac_encode =
      mac->add_subcommand("encode", "JSON on stdin, hex on stdout");
  mac_encode->add_option("--frame", mac_frame, "request|demand|assignment")
      ->required()
      ->check(CLI::IsMember({"request", "demand", "assignment"}));
  auto* mac_decode =
      mac->add_subcommand("decode", "hex on stdin, JSON on stdout");
  mac_decode->add_option("--frame", mac_frame, "request|demand|assignment")
      ->required()
      ->check(CLI::IsMember({"request", "demand", "assignment"}));
  mac_decode->add_option(
      "--w", mac_w, "demand slots per peripheral (assignment frames only)");

  auto* experiment = app.add_subcommand(
      "experiment", "Monte Carlo scheme comparison over random networks");
  pnc::ExperimentConfig config;
  std::string ex_traffic = "fixed:100", ex_schemes = "pnc9",
              ex_out = "results.csv";
  bool ex_sweep = false, ex_heavy = false, ex_greedy = false;
  experiment->add_option("--nodes", config.n_r, "peripheral count");
  experiment->add_option("--traffic", ex_traffic, "fixed:K or saturated:W");
  experiment->add_option("--schemes", ex_schemes, "comma-separated schemes");
  experiment->add_option("--networks", config.n_networks,
                         "networks per experiment");
  experiment->add_option("--assignments", config.n_assignments,
                         "demand draws per network");
  experiment->add_option("--seed", config.master_seed, "master seed");
  experiment->add_option("--inner", config.r_inner, "inner annulus radius");
  experiment->add_option("--alpha", config.alpha,
                         "interference clearance factor");
  experiment->add_flag("--greedy", ex_greedy,
                       "greedy scheduling for the compared schemes");
  experiment->add_flag("--sweep-inner", ex_sweep,
                       "sweep the inner radius over 0.1, 0.5, 0.9");
  experiment->add_flag("--heavy", ex_heavy,
                       "allow long runs (fixed traffic above 500 packets)");
  experiment->add_option("--out", ex_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("catalog")) return run_catalog();
    if (app.got_subcommand(verify)) return run_verify_atoms(verify_json);
    if (app.got_subcommand(minslots))
      return run_min_slots(atom_id, search_options);
    if (app.got_subcommand(identify))
      return run_identify(id_network, id_nodes, id_inner, id_seed, id_alpha,
                          id_conn_only, id_matrix);
    if (app.got_subcommand(schedule))
      return run_schedule(sc_network, sc_demands, sc_scheme, sc_greedy);
    if (app.got_subcommand(mac))
      return run_mac(mac->got_subcommand(mac_decode), mac_frame, mac_w);
    if (app.got_subcommand(experiment)) {
      config.traffic = pnc::parse_traffic(ex_traffic);
      config.greedy = ex_greedy;
      if (config.traffic.mode == pnc::TrafficSpec::Mode::fixed &&
          config.traffic.amount > 500 && !ex_heavy) {
        std::cerr << "fixed traffic above 500 packets is slow; pass --heavy\n";
        return 1;
      }
      std::stringstream names(ex_schemes);
      std::string name;
      while (std::getline(names, name, ','))
        config.schemes.push_back(pnc::scheme_config(name));
      return run_experiment(config, ex_sweep, ex_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
