#include "pnc/engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pnc/rng.hpp"

namespace pnc {
namespace {

constexpr int kMaxNodes = kMaxFlows + 1;  // peripherals + relay

// Index-based view of a CI-graph plus flows. Peripherals are 0..n-1 in label
// order, the relay is n. adj/guard are bitmasks over peripheral indices;
// sourced/wanted are expression masks of the flows a node originates or must
// end up decoding.
struct Net {
  int n = 0;
  int nf = 0;
  std::array<std::uint8_t, kMaxNodes> adj{};
  std::array<std::uint8_t, kMaxNodes> guard{};
  std::array<Expr, kMaxNodes> sourced{};
  std::array<Expr, kMaxNodes> wanted{};
  std::array<Label, kMaxNodes> labels{};
  std::array<std::uint8_t, kMaxFlows> fsrc{};
  std::array<std::uint8_t, kMaxFlows> fdst{};
  Expr all_flows = 0;

  int index(Label u) const {
    if (u == kRelay) return n;
    for (int i = 0; i < n; ++i)
      if (labels[i] == u) return i;
    throw std::invalid_argument(std::string("unknown node label '") + u + "'");
  }
};

Net compile(const CIGraph& ci, const FlowSet& flows) {
  ci.validate(flows);
  Net net;
  net.n = static_cast<int>(ci.peripherals.size());
  net.nf = static_cast<int>(flows.size());
  for (int i = 0; i < net.n; ++i) net.labels[i] = ci.peripherals[i];
  net.labels[net.n] = kRelay;
  for (auto [a, b] : ci.c_edges) {
    const int i = net.index(a), j = net.index(b);
    net.adj[i] |= std::uint8_t(1) << j;
    net.adj[j] |= std::uint8_t(1) << i;
  }
  for (const auto& rec : ci.i_edges) {
    net.guard[net.index(rec.receiver)] |= std::uint8_t(1)
                                          << net.index(rec.interferer);
  }
  for (int f = 0; f < net.nf; ++f) {
    const int s = net.index(flows[f].src), d = net.index(flows[f].dst);
    net.fsrc[f] = static_cast<std::uint8_t>(s);
    net.fdst[f] = static_cast<std::uint8_t>(d);
    net.sourced[s] |= Expr(1) << f;
    net.wanted[d] |= Expr(1) << f;
    net.all_flows |= Expr(1) << f;
  }
  return net;
}

// Decode attempt for receiver r given the slot's transmitter list. Returns
// false if physics forbids a clean reception (collision of more than two
// in-range signals, or an in-range-but-unrecorded interferer); on success
// *out is the XOR of the in-range transmissions and tc their count.
bool decodable(const Net& net, int r,
               const std::array<std::pair<std::uint8_t, Expr>, 2>& tx, int ntx,
               Expr* out, int* tc) {
  int count = 0;
  Expr val = 0;
  for (int i = 0; i < ntx; ++i) {
    const int t = tx[i].first;
    const bool in_range =
        t == net.n || r == net.n || (net.adj[t] >> r & 1);
    if (in_range) {
      ++count;
      val ^= tx[i].second;
    } else if (!(net.guard[r] >> t & 1)) {
      return false;  // audible interference with no record to excuse it
    }
  }
  if (count > 2) return false;
  *out = val;
  *tc = count;
  return true;
}

}  // namespace

ValidityReport simulate(const TransmissionPattern& pattern, const CIGraph& ci,
                        const FlowSet& flows) {
  const Net net = compile(ci, flows);
  std::array<SpanSet, kMaxNodes> span{};
  for (int f = 0; f < net.nf; ++f) span[net.fsrc[f]].add(Expr(1) << f);

  ValidityReport report;
  auto flag = [&](int slot_idx, int node, ViolationKind kind) {
    report.valid = false;
    report.violations.push_back({slot_idx, net.labels[node], kind});
  };

  for (int s = 0; s < static_cast<int>(pattern.size()); ++s) {
    const Slot& sl = pattern[s];
    std::array<std::pair<std::uint8_t, Expr>, 2> tx{};
    int ntx = 0;
    std::uint8_t txmask = 0;
    // More than two simultaneous transmitters is representable in a Slot but
    // never decodable anywhere; surface it per receiver below. More than two
    // is also beyond the fixed-size buffer, so fall back to a flat list.
    std::vector<std::pair<std::uint8_t, Expr>> all_tx;
    for (auto [who, e] : sl.transmissions) {
      const int t = net.index(who);
      if (txmask >> t & 1)
        throw std::invalid_argument("node transmits twice in one slot");
      txmask |= std::uint8_t(1) << t;
      all_tx.push_back({static_cast<std::uint8_t>(t), e});
      if (e == 0 || !span[t].contains(e))
        flag(s, t, ViolationKind::expr_not_in_span);
    }

    std::vector<std::pair<int, Expr>> learned;
    for (auto [who, want] : sl.required_receptions) {
      const int r = net.index(who);
      if (txmask >> r & 1) {
        flag(s, r, ViolationKind::half_duplex);
        continue;
      }
      int count = 0;
      Expr val = 0;
      bool unguarded = false;
      for (auto [t, e] : all_tx) {
        const bool in_range = t == net.n || r == net.n || (net.adj[t] >> r & 1);
        if (in_range) {
          ++count;
          val ^= e;
        } else if (!(net.guard[r] >> t & 1)) {
          unguarded = true;
        }
      }
      if (count > 2) {
        flag(s, r, ViolationKind::too_many_transmitters);
        continue;
      }
      if (unguarded) {
        flag(s, r, ViolationKind::unguarded_interferer);
        continue;
      }
      if (count == 0 || val != want) {
        flag(s, r, ViolationKind::reception_mismatch);
        continue;
      }
      learned.push_back({r, val});
    }
    // Knowledge gained in a slot becomes usable the next slot.
    for (auto [r, v] : learned) span[r].add(v);
  }

  for (int i = 0; i <= net.n; ++i) report.final_spans[net.labels[i]] = span[i];
  return report;
}

bool verify(const AtomClass& cls, RelayMode mode) {
  if (mode == RelayMode::nonnc)
    throw std::invalid_argument("no stored pattern for the non-coding mode");
  const bool pnc = mode == RelayMode::pnc;
  const auto report = simulate(pnc ? cls.pnc_pattern : cls.snc_pattern,
                               pnc ? cls.ci : cls.snc_ci(), cls.flows);
  if (!report.valid) return false;
  for (std::size_t f = 0; f < cls.flows.size(); ++f) {
    if (!report.final_spans.at(cls.flows[f].dst).contains(Expr(1) << f))
      return false;
  }
  return true;
}

namespace {

struct State {
  std::array<std::uint64_t, kMaxNodes> span{};
  Expr released = 0;

  friend bool operator==(const State&, const State&) = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::uint64_t h = 0x243F6A8885A308D3ull ^ s.released;
    for (auto w : s.span) h = splitmix64(h ^ w);
    return static_cast<std::size_t>(h);
  }
};

struct Move {
  std::array<std::pair<std::uint8_t, Expr>, 2> tx{};
  std::uint8_t ntx = 0;
};

class Searcher {
 public:
  Searcher(const Net& net, const SearchOptions& opt) : net_(net), opt_(opt) {
    for (int f = 0; f < net_.nf; ++f)
      root_.span[net_.fsrc[f]] |= std::uint64_t(1) << (1u << f);
    for (int i = 0; i <= net_.n; ++i) root_.span[i] |= 1;  // zero expression
    build_automorphisms();
  }

  SearchResult run() {
    SearchResult res;
    if (net_.nf == 0) {
      res.status = SearchStatus::found;
      res.slots = 0;
      return res;
    }
    int sources = 0;
    for (int i = 0; i < net_.n; ++i)
      if (net_.sourced[i]) ++sources;
    const int lower = (sources + 1) / 2 + 1;
    for (k_ = lower; k_ <= opt_.max_slots; ++k_) {
      memo_.clear();
      root_sigs_.clear();
      stack_.clear();
      if (dfs(root_, 0)) {
        res.status = SearchStatus::found;
        res.slots = found_slots_;
        res.pattern = materialize();
        res.states_examined = examined_;
        return res;
      }
      if (out_of_budget_) {
        res.status = SearchStatus::inconclusive;
        res.states_examined = examined_;
        return res;
      }
    }
    res.status = SearchStatus::absent;
    res.states_examined = examined_;
    return res;
  }

 private:
  // Peripheral permutations preserving adjacency, guard records, and the
  // flow set, together with the induced permutation of expression masks.
  // Used only to collapse symmetric first-slot choices: the root state is
  // invariant under every automorphism, so orbit-equivalent first moves root
  // isomorphic subtrees.
  void build_automorphisms() {
    std::array<std::uint8_t, kMaxNodes> sigma{};
    std::vector<std::uint8_t> perm(static_cast<std::size_t>(net_.n));
    for (int i = 0; i < net_.n; ++i) perm[static_cast<std::size_t>(i)] = i;
    auto permute_mask = [&](std::uint8_t m) {
      std::uint8_t out = 0;
      for (int i = 0; i < net_.n; ++i)
        if (m >> i & 1) out |= std::uint8_t(1) << sigma[i];
      return out;
    };
    do {
      for (int i = 0; i < net_.n; ++i) sigma[i] = perm[static_cast<std::size_t>(i)];
      sigma[net_.n] = static_cast<std::uint8_t>(net_.n);
      bool ok = true;
      for (int i = 0; i < net_.n && ok; ++i) {
        ok = net_.adj[sigma[i]] == permute_mask(net_.adj[i]) &&
             net_.guard[sigma[i]] == permute_mask(net_.guard[i]);
      }
      std::array<std::uint8_t, kMaxFlows> pi{};
      for (int f = 0; f < net_.nf && ok; ++f) {
        int g = -1;
        for (int h = 0; h < net_.nf; ++h) {
          if (net_.fsrc[h] == sigma[net_.fsrc[f]] &&
              net_.fdst[h] == sigma[net_.fdst[f]]) {
            g = h;
            break;
          }
        }
        ok = g >= 0;
        if (ok) pi[f] = static_cast<std::uint8_t>(g);
      }
      if (!ok) continue;
      std::array<std::uint8_t, kExprSpace> emap{};
      for (int e = 0; e < kExprSpace; ++e) {
        std::uint8_t out = 0;
        for (int f = 0; f < net_.nf; ++f)
          if (e >> f & 1) out |= std::uint8_t(1) << pi[f];
        emap[e] = out;
      }
      auto_node_.push_back(sigma);
      auto_expr_.push_back(emap);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  bool targets_done(const State& s) const {
    for (int i = 0; i < net_.n; ++i) {
      Expr w = net_.wanted[i];
      while (w) {
        const int f = std::countr_zero(static_cast<unsigned>(w));
        if (!(s.span[i] >> (1u << f) & 1)) return false;
        w &= static_cast<Expr>(w - 1);
      }
    }
    return true;
  }

  // Admissible remaining-slot bound. Sources still holding an untransmitted
  // native must transmit (at most two per slot); a node missing targets must
  // get at least one clean reception per missing independent piece, and a
  // node that must both transmit and receive needs distinct slots for the
  // two by half-duplex.
  int bound(const State& s) const {
    const Expr unreleased = net_.all_flows & static_cast<Expr>(~s.released);
    int pending_sources = 0;
    int need = 0;
    for (int i = 0; i < net_.n; ++i) {
      const bool must_send = (net_.sourced[i] & unreleased) != 0;
      if (must_send) ++pending_sources;
      int receptions = 0;  // slots of clean reception still needed at i
      Expr missing = 0;
      Expr w = net_.wanted[i];
      while (w) {
        const int f = std::countr_zero(static_cast<unsigned>(w));
        if (!(s.span[i] >> (1u << f) & 1)) missing |= Expr(1) << f;
        w &= static_cast<Expr>(w - 1);
      }
      if (missing) {
        receptions = 1;
        // One reception extends the span by a single expression; two missing
        // natives are then only reachable if their XOR is already in it.
        for (Expr a = missing; a; a &= static_cast<Expr>(a - 1)) {
          const int fa = std::countr_zero(static_cast<unsigned>(a));
          for (Expr b = a & static_cast<Expr>(a - 1); b;
               b &= static_cast<Expr>(b - 1)) {
            const int fb = std::countr_zero(static_cast<unsigned>(b));
            const Expr pair_xor = (Expr(1) << fa) ^ (Expr(1) << fb);
            if (!(s.span[i] >> pair_xor & 1)) receptions = 2;
          }
        }
      }
      need = std::max(need, receptions + (must_send ? 1 : 0));
    }
    return std::max(need, (pending_sources + 1) / 2);
  }

  State apply(const State& s, const Move& m) const {
    State child = s;
    std::uint8_t txmask = 0;
    for (int i = 0; i < m.ntx; ++i)
      txmask |= std::uint8_t(1) << m.tx[i].first;
    for (int r = 0; r <= net_.n; ++r) {
      if (txmask >> r & 1) continue;
      Expr val = 0;
      int tc = 0;
      if (decodable(net_, r, m.tx, m.ntx, &val, &tc) && tc >= 1)
        child.span[r] |= xor_shift(child.span[r], val);
    }
    for (int i = 0; i < m.ntx; ++i)
      child.released |= m.tx[i].second & net_.sourced[m.tx[i].first];
    return child;
  }

  static int collect_exprs(std::uint64_t bits, std::array<Expr, kExprSpace>& out) {
    int m = 0;
    bits &= ~1ull;  // transmitting the zero expression says nothing
    while (bits) {
      out[m++] = static_cast<Expr>(std::countr_zero(bits));
      bits &= bits - 1;
    }
    return m;
  }

  void enumerate(const State& s, std::vector<Move>& out) const {
    out.clear();
    std::array<std::array<Expr, kExprSpace>, kMaxNodes> exprs;
    std::array<int, kMaxNodes> cnt{};
    for (int i = 0; i <= net_.n; ++i) cnt[i] = collect_exprs(s.span[i], exprs[i]);
    auto push1 = [&](int t, Expr e) {
      Move m;
      m.tx[0] = {static_cast<std::uint8_t>(t), e};
      m.ntx = 1;
      out.push_back(m);
    };
    auto push2 = [&](int t1, Expr e1, int t2, Expr e2) {
      Move m;
      m.tx[0] = {static_cast<std::uint8_t>(t1), e1};
      m.tx[1] = {static_cast<std::uint8_t>(t2), e2};
      m.ntx = 2;
      out.push_back(m);
    };
    // Paired uplinks first: they retire two sources at once, which is how
    // every short pattern starts.
    for (int i = 0; i < net_.n; ++i)
      for (int j = i + 1; j < net_.n; ++j)
        for (int a = 0; a < cnt[i]; ++a)
          for (int b = 0; b < cnt[j]; ++b)
            push2(i, exprs[i][a], j, exprs[j][b]);
    for (int i = 0; i < net_.n; ++i)
      for (int a = 0; a < cnt[i]; ++a) push1(i, exprs[i][a]);
    for (int a = 0; a < cnt[net_.n]; ++a) {
      push1(net_.n, exprs[net_.n][a]);
      if (opt_.allow_peripheral_downlink) {
        for (int i = 0; i < net_.n; ++i)
          for (int b = 0; b < cnt[i]; ++b)
            push2(i, exprs[i][b], net_.n, exprs[net_.n][a]);
      }
    }
  }

  // Canonical encoding of a first move modulo the automorphism group.
  std::uint64_t root_signature(const Move& m) const {
    std::uint64_t best = ~0ull;
    for (std::size_t a = 0; a < auto_node_.size(); ++a) {
      std::array<std::uint16_t, 2> p{};
      for (int i = 0; i < m.ntx; ++i) {
        p[i] = static_cast<std::uint16_t>(
            (auto_node_[a][m.tx[i].first] << 6) |
            auto_expr_[a][m.tx[i].second]);
      }
      if (m.ntx == 2 && p[0] > p[1]) std::swap(p[0], p[1]);
      const std::uint64_t sig =
          (std::uint64_t(m.ntx) << 32) | (std::uint64_t(p[1]) << 16) | p[0];
      best = std::min(best, sig);
    }
    return best;
  }

  bool dfs(const State& s, int used) {
    if (targets_done(s)) {
      found_slots_ = used;
      return true;
    }
    if (used >= k_ || used + bound(s) > k_) return false;
    auto [it, fresh] = memo_.try_emplace(s, static_cast<std::uint8_t>(used));
    if (!fresh) {
      // An earlier visit with at least as many slots remaining already
      // explored everything reachable from here.
      if (it->second <= used) return false;
      it->second = static_cast<std::uint8_t>(used);
    }
    auto& moves = move_buffers_[static_cast<std::size_t>(used)];
    enumerate(s, moves);
    for (const Move& m : moves) {
      if (used == 0 && auto_node_.size() > 1 &&
          !root_sigs_.insert(root_signature(m)).second)
        continue;
      if (++examined_ > opt_.budget) {
        out_of_budget_ = true;
        return false;
      }
      State child = apply(s, m);
      if (child == s) continue;  // slot changed nothing; a shorter pattern exists
      stack_.push_back(m);
      if (dfs(child, used + 1)) return true;
      stack_.pop_back();
      if (out_of_budget_) return false;
    }
    return false;
  }

  // Replay the winning move stack into a pattern, listing every reception
  // the physics allows. Callers may trim the listing; the searcher itself
  // always lets everyone hear whatever they can.
  TransmissionPattern materialize() const {
    TransmissionPattern pattern;
    State s = root_;
    for (const Move& m : stack_) {
      Slot sl;
      std::uint8_t txmask = 0;
      for (int i = 0; i < m.ntx; ++i) {
        sl.transmissions.push_back({net_.labels[m.tx[i].first], m.tx[i].second});
        txmask |= std::uint8_t(1) << m.tx[i].first;
      }
      std::sort(sl.transmissions.begin(), sl.transmissions.end());
      for (int r = 0; r <= net_.n; ++r) {
        if (txmask >> r & 1) continue;
        Expr val = 0;
        int tc = 0;
        if (decodable(net_, r, m.tx, m.ntx, &val, &tc) && tc >= 1)
          sl.required_receptions.push_back({net_.labels[r], val});
      }
      std::sort(sl.required_receptions.begin(), sl.required_receptions.end());
      pattern.push_back(sl);
      s = apply(s, m);
    }
    return pattern;
  }

  const Net& net_;
  SearchOptions opt_;
  int k_ = 0;
  int found_slots_ = -1;
  std::uint64_t examined_ = 0;
  bool out_of_budget_ = false;
  State root_;
  std::vector<Move> stack_;
  std::array<std::vector<Move>, 16> move_buffers_;
  std::unordered_map<State, std::uint8_t, StateHash> memo_;
  std::unordered_set<std::uint64_t> root_sigs_;
  std::vector<std::array<std::uint8_t, kMaxNodes>> auto_node_;
  std::vector<std::array<std::uint8_t, kExprSpace>> auto_expr_;
};

}  // namespace

SearchResult min_slots(const CIGraph& ci, const FlowSet& flows,
                       const SearchOptions& options) {
  if (options.max_slots < 0 || options.max_slots > 12)
    throw std::invalid_argument("max_slots out of range");
  const Net net = compile(ci, flows);
  Searcher searcher(net, options);
  SearchResult res = searcher.run();
  if (res.status == SearchStatus::found && res.slots > 0) {
    // The witness must replay cleanly; anything else is a searcher bug.
    const auto replay = simulate(res.pattern, ci, flows);
    if (!replay.valid)
      throw std::logic_error("search produced an invalid witness pattern");
  }
  return res;
}

LowerBoundConditions lower_bound_conditions(const AtomClass& cls) {
  const Net net = compile(cls.ci, cls.flows);
  int sources = 0;
  for (int i = 0; i < net.n; ++i)
    if (net.sourced[i]) ++sources;
  const int half = (sources + 1) / 2;

  LowerBoundConditions out;
  out.half_sources_bound = half + 1;

  std::uint8_t dest_mask = 0;
  for (int f = 0; f < net.nf; ++f) dest_mask |= std::uint8_t(1) << net.fdst[f];

  // Every source needs a destination it cannot reach directly besides the
  // ones it serves.
  bool witness_everywhere = true;
  for (int s = 0; s < net.n && witness_everywhere; ++s) {
    if (!net.sourced[s]) continue;
    std::uint8_t own = 0;
    for (int f = 0; f < net.nf; ++f)
      if (net.fsrc[f] == s) own |= std::uint8_t(1) << net.fdst[f];
    const std::uint8_t candidates = dest_mask &
                                    static_cast<std::uint8_t>(~own) &
                                    static_cast<std::uint8_t>(~(1u << s)) &
                                    static_cast<std::uint8_t>(~net.adj[s]);
    witness_everywhere = candidates != 0;
  }

  // Every flow must span more C-hops than half the source count.
  bool far_enough = true;
  for (int f = 0; f < net.nf && far_enough; ++f) {
    std::array<int, kMaxNodes> dist;
    dist.fill(-1);
    dist[net.fsrc[f]] = 0;
    std::array<std::uint8_t, kMaxNodes> queue{};
    int head = 0, tail = 0;
    queue[tail++] = net.fsrc[f];
    while (head < tail) {
      const int u = queue[head++];
      for (int v = 0; v < net.n; ++v) {
        if ((net.adj[u] >> v & 1) && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue[tail++] = static_cast<std::uint8_t>(v);
        }
      }
    }
    const int d = dist[net.fdst[f]];
    far_enough = d < 0 || d > half;
  }

  out.strengthening_applies = witness_everywhere && far_enough;
  return out;
}

}  // namespace pnc
