#pragma once

// Structural identification: find every way an atom class template embeds
// into a concrete network, up to the template's own symmetries.

#include <cstdint>
#include <vector>

#include "pnc/atoms.hpp"
#include "pnc/topology.hpp"

namespace pnc {

/// An ordered pair of nodes that needs the relay: out of range of each other.
struct PotentialFlow {
  int src;
  int dst;

  friend bool operator==(const PotentialFlow&, const PotentialFlow&) = default;
};

/// All potential flows, lexicographic by (src, dst).
std::vector<PotentialFlow> potential_flows(const Network& net);

/// One embedding of a class template. nodes[i] is the network node playing
/// template peripheral i; flows[k] is the potential-flow id carried by
/// template flow k.
struct Instance {
  int class_id = 0;
  std::vector<int> nodes;
  std::vector<int> flows;
};

enum class MatchMode {
  full,               // range, separation, and interference clearance
  connectivity_only,  // drop the clearance checks (one-at-a-time relaying)
};

inline constexpr std::uint16_t kAllClasses = 0x1FF;  // bit id-1

/// Distinct instances of every masked class: class id ascending, then
/// discovery order. Embeddings equal up to a template automorphism (one
/// preserving edges, flows, and interference records) count once.
std::vector<Instance> identify(const Network& net,
                               MatchMode mode = MatchMode::full,
                               std::uint16_t class_mask = kAllClasses);

/// Rows are potential flows, columns the given instances; entry 1 marks the
/// instance carrying that flow.
std::vector<std::vector<std::uint8_t>> incidence_matrix(
    const Network& net, const std::vector<Instance>& instances);

}  // namespace pnc
