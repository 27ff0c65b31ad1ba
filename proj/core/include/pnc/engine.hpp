#pragma once

// Symbolic slot-by-slot evaluation of transmission patterns over a CI-graph,
// and a bounded exhaustive search for the minimum number of slots that
// delivers a flow set.

#include <cstdint>
#include <map>
#include <vector>

#include "pnc/atoms.hpp"
#include "pnc/gf2.hpp"

namespace pnc {

enum class ViolationKind {
  half_duplex,           // node both transmits and must receive
  too_many_transmitters, // more than two C-connected transmitters at receiver
  unguarded_interferer,  // in-range transmitter with no interference record
  expr_not_in_span,      // transmitted expression outside sender's knowledge
  reception_mismatch,    // decodable expression differs from the required one
};

struct Violation {
  int slot;  // 0-based
  Label node;
  ViolationKind kind;
};

struct ValidityReport {
  bool valid = true;
  std::vector<Violation> violations;
  std::map<Label, SpanSet> final_spans;  // includes the relay
};

/// Replay a pattern against a graph. Unknown labels throw
/// std::invalid_argument; rule breaches are reported, not thrown. Knowledge
/// updates within a slot use start-of-slot spans, and a required reception
/// that fails contributes nothing to the receiver's span.
ValidityReport simulate(const TransmissionPattern& pattern, const CIGraph& ci,
                        const FlowSet& flows);

/// True iff the class's stored pattern for `mode` is violation-free and
/// leaves every destination knowing its flow's native packet.
bool verify(const AtomClass& cls, RelayMode mode);

struct SearchOptions {
  int max_slots = 8;
  bool allow_peripheral_downlink = false;
  std::uint64_t budget = 200'000'000;  // child states examined before giving up
};

enum class SearchStatus { found, absent, inconclusive };

struct SearchResult {
  SearchStatus status = SearchStatus::inconclusive;
  int slots = -1;                // set when found
  TransmissionPattern pattern;   // witness; replays violation-free
  std::uint64_t states_examined = 0;
};

/// Iterative-deepening exhaustive search. "absent" is a proof that no valid
/// pattern of at most max_slots slots exists under the slot structure
/// searched; "inconclusive" means the budget ran out first and says nothing.
SearchResult min_slots(const CIGraph& ci, const FlowSet& flows,
                       const SearchOptions& options = {});

struct LowerBoundConditions {
  int half_sources_bound;        // ceil(sources / 2) + 1
  bool strengthening_applies;    // both structural conditions below hold
};

/// Structural lower-bound data for an atom class: the transmit-counting
/// bound, and whether the strengthening that pushes the bound above it
/// applies (every source has an out-of-range witness destination besides its
/// own, and every flow's C-hop distance exceeds ceil(sources / 2)).
LowerBoundConditions lower_bound_conditions(const AtomClass& cls);

}  // namespace pnc
