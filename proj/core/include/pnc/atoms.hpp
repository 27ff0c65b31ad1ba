#pragma once

// The nine relay-network atom classes as data: node labels, connectivity,
// guarded interference records, flows, and the reference transmission
// patterns for the network-coded and store-and-forward relaying modes.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pnc/gf2.hpp"

namespace pnc {

// Template node labels. Peripherals are 'A'..'F'. The relay is 'R' and is
// C-connected to every peripheral by construction, so it never appears in
// the explicit edge lists.
using Label = char;
inline constexpr Label kRelay = 'R';

/// Guarded interference record: `interferer` may transmit while `receiver`
/// decodes the guarded link because the two are out of interference range.
/// The guarded link pins which link length the geometric clearance check is
/// scaled against.
struct IEdge {
  Label interferer;
  Label receiver;
  Label guard_tx;
  Label guard_rx;

  friend bool operator==(const IEdge&, const IEdge&) = default;
};

struct Flow {
  Label src;
  Label dst;

  friend bool operator==(const Flow&, const Flow&) = default;
};
using FlowSet = std::vector<Flow>;

/// Connectivity/interference graph over one relay and up to six peripherals.
struct CIGraph {
  std::vector<Label> peripherals;                 // sorted, unique
  std::vector<std::pair<Label, Label>> c_edges;   // unordered pairs, a < b
  std::vector<IEdge> i_edges;

  bool connected(Label u, Label v) const;         // peripherals only
  bool guarded(Label interferer, Label receiver) const;
  bool has_peripheral(Label u) const;

  /// Throws std::invalid_argument on a malformed graph or flow set: unknown
  /// labels, self-loops, a flow whose endpoints are C-connected, a C-edge
  /// that is also recorded as interference, or a guard that is not a live
  /// link toward the record's receiver.
  void validate(const FlowSet& flows) const;
};

/// One time slot: the simultaneous transmissions and the receptions the
/// pattern relies on. Listeners not listed may still overhear; listed ones
/// must decode exactly the stated expression.
struct Slot {
  std::vector<std::pair<Label, Expr>> transmissions;
  std::vector<std::pair<Label, Expr>> required_receptions;
};
using TransmissionPattern = std::vector<Slot>;

enum class AtomKind { twrc, triangle, cross, star };
enum class RelayMode { pnc, snc, nonnc };

struct SlotCosts {
  int pnc;
  int snc;
  int nonnc;
};

struct AtomClass {
  int id = 0;             // 1..9
  std::string roman;      // "I".."IX"
  AtomKind kind;
  CIGraph ci;             // includes the interference records
  FlowSet flows;
  TransmissionPattern pnc_pattern;
  TransmissionPattern snc_pattern;
  SlotCosts costs;

  /// Same connectivity with the interference records dropped; the
  /// store-and-forward pattern must validate against this weaker graph.
  CIGraph snc_ci() const;

  int peripheral_count() const {
    return static_cast<int>(ci.peripherals.size());
  }
  int flow_count() const { return static_cast<int>(flows.size()); }
};

/// The nine classes in catalog order (class 1 first). Built once.
const std::vector<AtomClass>& catalog();

/// Class by id in 1..9; throws std::out_of_range otherwise.
const AtomClass& atom(int id);

int slot_cost(int id, RelayMode mode);

std::string to_roman(int id);
std::optional<int> from_roman(std::string_view s);

/// Decomposition of a mutually-reversed pair of class-3 or class-8 instances
/// into three two-way exchanges, with the slot totals of both options.
struct MoleculeReport {
  int class_id;
  FlowSet forward;
  FlowSet reversed;
  std::array<FlowSet, 3> exchanges;  // each holds one flow pair {u->v, v->u}
  int paired_slots;                  // 2 x pnc cost of the class
  int exchange_slots;                // 3 x pnc cost of class 1
};

/// Valid for class ids 3 and 8; throws std::invalid_argument otherwise.
MoleculeReport molecule(int class_id);

}  // namespace pnc
