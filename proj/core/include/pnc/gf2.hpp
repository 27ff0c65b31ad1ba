#pragma once

// GF(2) packet expressions and per-node knowledge spans.
//
// An expression is a bitmask over the flows of one atom: bit f set means the
// native packet of flow f is XORed in. Atoms carry at most 6 flows, so the
// whole expression space has 64 elements and a linear span fits in a single
// 64-bit word: bit e of SpanSet::bits is set iff expression e lies in the
// span. Closing the span under a new generator is a butterfly permutation:
// span(S + v) = S | xor_shift(S, v).

#include <bit>
#include <cstdint>

namespace pnc {

using Expr = std::uint8_t;  // bit f = native packet of flow f, f < kMaxFlows

inline constexpr int kMaxFlows = 6;
inline constexpr int kExprSpace = 1 << kMaxFlows;

/// Permute a 64-bit expression set by XOR with v: output bit (e ^ v) equals
/// input bit e. Realized by swapping half-blocks at each set bit of v.
constexpr std::uint64_t xor_shift(std::uint64_t bits, Expr v) {
  constexpr std::uint64_t kHalf[kMaxFlows] = {
      0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
      0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull};
  for (int k = 0; k < kMaxFlows; ++k) {
    if (v >> k & 1) {
      const int w = 1 << k;
      bits = ((bits & kHalf[k]) << w) | ((bits >> w) & kHalf[k]);
    }
  }
  return bits;
}

/// A GF(2)-linear span of expressions. Always contains the zero expression.
struct SpanSet {
  std::uint64_t bits = 1;  // {0}

  constexpr bool contains(Expr e) const { return bits >> e & 1; }

  /// Close the span under XOR with v.
  constexpr void add(Expr v) { bits |= xor_shift(bits, v); }

  constexpr int size() const { return std::popcount(bits); }

  friend constexpr bool operator==(SpanSet, SpanSet) = default;
};

}  // namespace pnc
