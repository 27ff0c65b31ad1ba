#include "pnc/atoms.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace pnc {
namespace {

std::pair<Label, Label> norm(Label a, Label b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

// Pattern-literal shorthand: flow bit f is spelled by its mask, so "A sends
// the XOR of flows 0 and 1" reads {'A', 3}.
Slot slot(std::vector<std::pair<Label, Expr>> tx,
          std::vector<std::pair<Label, Expr>> rx) {
  return Slot{std::move(tx), std::move(rx)};
}

AtomClass make_class_1() {
  AtomClass c;
  c.id = 1;
  c.kind = AtomKind::twrc;
  c.ci.peripherals = {'A', 'B'};
  c.flows = {{'A', 'B'}, {'B', 'A'}};
  c.pnc_pattern = {
      slot({{'A', 1}, {'B', 2}}, {{'R', 3}}),
      slot({{'R', 3}}, {{'A', 3}, {'B', 3}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}}),
      slot({{'B', 2}}, {{'R', 2}}),
      slot({{'R', 3}}, {{'A', 3}, {'B', 3}}),
  };
  c.costs = {2, 3, 4};
  return c;
}

AtomClass make_class_2() {
  AtomClass c;
  c.id = 2;
  c.kind = AtomKind::twrc;
  c.ci.peripherals = {'A', 'B', 'C'};
  c.ci.c_edges = {norm('A', 'C')};
  c.ci.i_edges = {{'B', 'C', 'A', 'C'}};
  c.flows = {{'A', 'B'}, {'B', 'C'}};
  // C overhears A's uplink past B's guarded interference, so the relay's
  // single coded downlink finishes both flows.
  c.pnc_pattern = {
      slot({{'A', 1}, {'B', 2}}, {{'R', 3}, {'C', 1}}),
      slot({{'R', 3}}, {{'B', 3}, {'C', 3}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}, {'C', 1}}),
      slot({{'B', 2}}, {{'R', 2}}),
      slot({{'R', 3}}, {{'B', 3}, {'C', 3}}),
  };
  c.costs = {2, 3, 4};
  return c;
}

AtomClass make_class_3() {
  AtomClass c;
  c.id = 3;
  c.kind = AtomKind::triangle;
  c.ci.peripherals = {'A', 'B', 'C'};
  c.flows = {{'A', 'B'}, {'B', 'C'}, {'C', 'A'}};
  c.pnc_pattern = {
      slot({{'A', 1}, {'B', 2}}, {{'R', 3}}),
      slot({{'A', 1}, {'C', 4}}, {{'R', 5}}),
      slot({{'R', 3}}, {{'A', 3}, {'B', 3}, {'C', 3}}),
      slot({{'R', 5}}, {{'A', 5}, {'C', 5}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}}),
      slot({{'B', 2}}, {{'R', 2}}),
      slot({{'C', 4}}, {{'R', 4}}),
      slot({{'R', 3}}, {{'A', 3}, {'B', 3}, {'C', 3}}),
      slot({{'R', 5}}, {{'A', 5}, {'C', 5}}),
  };
  c.costs = {4, 5, 6};
  return c;
}

AtomClass make_class_4() {
  AtomClass c;
  c.id = 4;
  c.kind = AtomKind::triangle;
  c.ci.peripherals = {'A', 'B', 'C'};
  c.flows = {{'B', 'C'}, {'C', 'B'}, {'A', 'B'}};
  c.pnc_pattern = {
      slot({{'B', 1}, {'C', 2}}, {{'R', 3}}),
      slot({{'A', 4}}, {{'R', 4}}),
      slot({{'R', 3}}, {{'B', 3}, {'C', 3}}),
      slot({{'R', 4}}, {{'B', 4}}),
  };
  c.snc_pattern = {
      slot({{'B', 1}}, {{'R', 1}}),
      slot({{'C', 2}}, {{'R', 2}}),
      slot({{'A', 4}}, {{'R', 4}}),
      slot({{'R', 3}}, {{'B', 3}, {'C', 3}}),
      slot({{'R', 4}}, {{'B', 4}}),
  };
  c.costs = {4, 5, 6};
  return c;
}

AtomClass make_class_5() {
  AtomClass c;
  c.id = 5;
  c.kind = AtomKind::cross;
  c.ci.peripherals = {'A', 'B', 'C', 'D'};
  c.ci.c_edges = {norm('A', 'D'), norm('B', 'C')};
  c.ci.i_edges = {{'B', 'D', 'A', 'D'}, {'A', 'C', 'B', 'C'}};
  c.flows = {{'A', 'C'}, {'B', 'D'}};
  // Both destinations overhear the other flow's uplink, so each strips the
  // cross term from the coded downlink.
  c.pnc_pattern = {
      slot({{'A', 1}, {'B', 2}}, {{'R', 3}, {'C', 2}, {'D', 1}}),
      slot({{'R', 3}}, {{'C', 3}, {'D', 3}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}, {'D', 1}}),
      slot({{'B', 2}}, {{'R', 2}, {'C', 2}}),
      slot({{'R', 3}}, {{'C', 3}, {'D', 3}}),
  };
  c.costs = {2, 3, 4};
  return c;
}

AtomClass make_class_6() {
  AtomClass c;
  c.id = 6;
  c.kind = AtomKind::cross;
  c.ci.peripherals = {'A', 'B', 'C', 'D'};
  c.ci.c_edges = {norm('A', 'B'), norm('A', 'D'), norm('B', 'C'),
                  norm('C', 'D')};
  c.flows = {{'A', 'C'}, {'C', 'A'}, {'B', 'D'}, {'D', 'B'}};
  // Two crossed exchanges. Each pair's uplink is overheard by both members
  // of the other pair, so one four-way XOR downlink resolves everything.
  c.pnc_pattern = {
      slot({{'A', 1}, {'C', 2}}, {{'R', 3}, {'B', 3}, {'D', 3}}),
      slot({{'B', 4}, {'D', 8}}, {{'R', 12}, {'A', 12}, {'C', 12}}),
      slot({{'R', 15}}, {{'A', 15}, {'B', 15}, {'C', 15}, {'D', 15}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}, {'B', 1}, {'D', 1}}),
      slot({{'C', 2}}, {{'R', 2}, {'B', 2}, {'D', 2}}),
      slot({{'B', 4}}, {{'R', 4}, {'A', 4}, {'C', 4}}),
      slot({{'D', 8}}, {{'R', 8}, {'A', 8}, {'C', 8}}),
      slot({{'R', 15}}, {{'A', 15}, {'B', 15}, {'C', 15}, {'D', 15}}),
  };
  c.costs = {3, 5, 8};
  return c;
}

AtomClass make_class_7() {
  AtomClass c;
  c.id = 7;
  c.kind = AtomKind::star;
  c.ci.peripherals = {'A', 'B', 'C', 'D', 'E', 'F'};
  c.ci.c_edges = {norm('A', 'B'), norm('B', 'C'), norm('C', 'D'),
                  norm('D', 'E'), norm('E', 'F'), norm('F', 'A')};
  c.ci.i_edges = {{'C', 'F', 'A', 'F'}, {'A', 'D', 'C', 'D'}};
  c.flows = {{'A', 'D'}, {'B', 'E'}, {'C', 'F'}};
  c.pnc_pattern = {
      slot({{'A', 1}, {'C', 4}}, {{'R', 5}, {'B', 5}, {'D', 4}, {'F', 1}}),
      slot({{'B', 2}}, {{'R', 2}, {'A', 2}, {'C', 2}}),
      slot({{'R', 5}}, {{'D', 5}, {'F', 5}}),
      slot({{'R', 2}}, {{'E', 2}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}, {'B', 1}, {'F', 1}}),
      slot({{'B', 2}}, {{'R', 2}, {'A', 2}, {'C', 2}}),
      slot({{'C', 4}}, {{'R', 4}, {'B', 4}, {'D', 4}}),
      slot({{'R', 5}}, {{'D', 5}, {'F', 5}}),
      slot({{'R', 2}}, {{'E', 2}}),
  };
  c.costs = {4, 5, 6};
  return c;
}

AtomClass make_class_8() {
  AtomClass c;
  c.id = 8;
  c.kind = AtomKind::star;
  c.ci.peripherals = {'A', 'B', 'C', 'D', 'E', 'F'};
  c.ci.c_edges = {norm('A', 'B'), norm('A', 'C'), norm('B', 'F'),
                  norm('C', 'E'), norm('D', 'E'), norm('D', 'F')};
  c.ci.i_edges = {{'E', 'B', 'F', 'B'}, {'F', 'C', 'E', 'C'}};
  c.flows = {{'A', 'D'}, {'E', 'B'}, {'F', 'C'}};
  // All three flows aim across the ring. E and F pair up first; their coded
  // uplink reaches D whole while B and C each catch one clean summand.
  c.pnc_pattern = {
      slot({{'E', 2}, {'F', 4}}, {{'R', 6}, {'B', 4}, {'C', 2}, {'D', 6}}),
      slot({{'A', 1}}, {{'R', 1}, {'B', 1}, {'C', 1}}),
      slot({{'R', 7}}, {{'B', 7}, {'C', 7}, {'D', 7}}),
  };
  c.snc_pattern = {
      slot({{'E', 2}}, {{'R', 2}, {'C', 2}, {'D', 2}}),
      slot({{'F', 4}}, {{'R', 4}, {'B', 4}, {'D', 4}}),
      slot({{'A', 1}}, {{'R', 1}, {'B', 1}, {'C', 1}}),
      slot({{'R', 7}}, {{'B', 7}, {'C', 7}, {'D', 7}}),
  };
  c.costs = {3, 4, 6};
  return c;
}

AtomClass make_class_9() {
  AtomClass c;
  c.id = 9;
  c.kind = AtomKind::star;
  c.ci.peripherals = {'A', 'B', 'C', 'D', 'E', 'F'};
  // Six-node ring A-B-F-D-E-C with three exchanges across it.
  c.ci.c_edges = {norm('A', 'B'), norm('B', 'F'), norm('F', 'D'),
                  norm('D', 'E'), norm('E', 'C'), norm('C', 'A')};
  c.ci.i_edges = {
      {'D', 'B', 'A', 'B'}, {'D', 'C', 'A', 'C'}, {'A', 'E', 'D', 'E'},
      {'A', 'F', 'D', 'F'}, {'B', 'E', 'C', 'E'}, {'C', 'F', 'B', 'F'},
      {'E', 'B', 'F', 'B'}, {'F', 'C', 'E', 'C'},
  };
  c.flows = {{'A', 'D'}, {'D', 'A'}, {'B', 'E'},
             {'E', 'B'}, {'C', 'F'}, {'F', 'C'}};
  // Frozen from the exhaustive slot-minimum search (no 4-slot pattern exists
  // even with every non-adjacent pair granted an interference record). One
  // exchange pair sends natives, the others echo partner-coded sums, and two
  // four-term downlinks resolve all six targets.
  c.pnc_pattern = {
      slot({{'A', 1}, {'D', 2}},
           {{'B', 1}, {'C', 1}, {'E', 2}, {'F', 2}, {'R', 3}}),
      slot({{'B', 5}, {'C', 17}},
           {{'A', 20}, {'E', 17}, {'F', 5}, {'R', 20}}),
      slot({{'E', 10}, {'F', 34}},
           {{'B', 34}, {'C', 10}, {'D', 40}, {'R', 40}}),
      slot({{'R', 23}}, {{'A', 23}, {'E', 23}, {'F', 23}}),
      slot({{'R', 43}}, {{'B', 43}, {'C', 43}, {'D', 43}}),
  };
  c.snc_pattern = {
      slot({{'A', 1}}, {{'R', 1}, {'B', 1}, {'C', 1}}),
      slot({{'B', 4}}, {{'R', 4}, {'A', 4}, {'F', 4}}),
      slot({{'F', 32}}, {{'R', 32}, {'B', 32}, {'D', 32}}),
      slot({{'D', 2}}, {{'R', 2}, {'F', 2}, {'E', 2}}),
      slot({{'E', 8}}, {{'R', 8}, {'D', 8}, {'C', 8}}),
      slot({{'C', 16}}, {{'R', 16}, {'E', 16}, {'A', 16}}),
      slot({{'R', 22}}, {{'A', 22}, {'E', 22}, {'F', 22}}),
      slot({{'R', 41}}, {{'B', 41}, {'C', 41}, {'D', 41}}),
  };
  c.costs = {5, 8, 12};
  return c;
}

std::vector<AtomClass> build_catalog() {
  std::vector<AtomClass> v = {
      make_class_1(), make_class_2(), make_class_3(),
      make_class_4(), make_class_5(), make_class_6(),
      make_class_7(), make_class_8(), make_class_9(),
  };
  constexpr std::array<const char*, 9> kRoman = {
      "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"};
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i].roman = kRoman[i];
    v[i].ci.validate(v[i].flows);
  }
  return v;
}

}  // namespace

bool CIGraph::connected(Label u, Label v) const {
  auto e = norm(u, v);
  return std::find(c_edges.begin(), c_edges.end(), e) != c_edges.end();
}

bool CIGraph::guarded(Label interferer, Label receiver) const {
  for (const auto& rec : i_edges) {
    if (rec.interferer == interferer && rec.receiver == receiver) return true;
  }
  return false;
}

bool CIGraph::has_peripheral(Label u) const {
  return std::find(peripherals.begin(), peripherals.end(), u) !=
         peripherals.end();
}

void CIGraph::validate(const FlowSet& flows) const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(peripherals.size() <= static_cast<std::size_t>(kMaxFlows),
          "too many peripherals");
  require(std::is_sorted(peripherals.begin(), peripherals.end()) &&
              std::adjacent_find(peripherals.begin(), peripherals.end()) ==
                  peripherals.end(),
          "peripheral labels must be sorted and unique");
  for (Label p : peripherals) require(p != kRelay, "relay label among peripherals");
  for (auto [a, b] : c_edges) {
    require(a < b, "c-edge not normalized");
    require(has_peripheral(a) && has_peripheral(b), "c-edge off unknown node");
  }
  for (const auto& rec : i_edges) {
    require(has_peripheral(rec.interferer) && has_peripheral(rec.receiver),
            "interference record off unknown node");
    require(rec.interferer != rec.receiver, "self-interference record");
    // A pair cannot be both in range and interference-free.
    require(!connected(rec.interferer, rec.receiver),
            "interference record contradicts a c-edge");
    require(rec.guard_rx == rec.receiver,
            "guarded link must end at the record's receiver");
    require(rec.guard_tx == kRelay || connected(rec.guard_tx, rec.guard_rx),
            "guarded link is not a live link");
  }
  require(flows.size() <= static_cast<std::size_t>(kMaxFlows),
          "too many flows");
  for (const auto& f : flows) {
    require(has_peripheral(f.src) && has_peripheral(f.dst),
            "flow off unknown node");
    require(f.src != f.dst, "flow is a self-loop");
    // In-range endpoints would not need the relay at all.
    require(!connected(f.src, f.dst), "flow endpoints are C-connected");
  }
}

CIGraph AtomClass::snc_ci() const {
  CIGraph g = ci;
  g.i_edges.clear();
  return g;
}

const std::vector<AtomClass>& catalog() {
  static const std::vector<AtomClass> k = build_catalog();
  return k;
}

const AtomClass& atom(int id) {
  const auto& cat = catalog();
  if (id < 1 || id > static_cast<int>(cat.size()))
    throw std::out_of_range("atom class id out of range");
  return cat[static_cast<std::size_t>(id - 1)];
}

int slot_cost(int id, RelayMode mode) {
  const auto& c = atom(id);
  switch (mode) {
    case RelayMode::pnc: return c.costs.pnc;
    case RelayMode::snc: return c.costs.snc;
    case RelayMode::nonnc: return c.costs.nonnc;
  }
  throw std::invalid_argument("bad relay mode");
}

std::string to_roman(int id) {
  return atom(id).roman;
}

std::optional<int> from_roman(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  for (const auto& c : catalog())
    if (c.roman == up) return c.id;
  return std::nullopt;
}

MoleculeReport molecule(int class_id) {
  if (class_id != 3 && class_id != 8)
    throw std::invalid_argument("only classes 3 and 8 pair into molecules");
  const auto& c = atom(class_id);
  MoleculeReport r;
  r.class_id = class_id;
  r.forward = c.flows;
  for (const auto& f : c.flows) r.reversed.push_back({f.dst, f.src});
  // The union of the two instances is three disjoint two-way exchanges.
  for (std::size_t i = 0; i < c.flows.size(); ++i) {
    r.exchanges[i] = {c.flows[i], {c.flows[i].dst, c.flows[i].src}};
  }
  r.paired_slots = 2 * c.costs.pnc;
  r.exchange_slots = 3 * atom(1).costs.pnc;
  return r;
}

}  // namespace pnc
