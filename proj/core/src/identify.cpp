#include "pnc/identify.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>

namespace pnc {
namespace {

// A class template compiled to peripheral indices, with the pairwise
// constraints arranged for early pruning during backtracking.
struct CompiledTemplate {
  int t = 0;  // peripheral count
  std::vector<std::pair<int, int>> need_edge;  // must be in range
  std::vector<std::pair<int, int>> need_gap;   // must be out of range
  struct Clearance {
    int interferer, receiver, guard_tx, guard_rx;  // guard_tx -1 = relay
  };
  std::vector<Clearance> clearances;
  std::vector<std::pair<int, int>> flows;
  std::vector<std::array<std::int8_t, kMaxFlows>> autos;
  std::vector<int> order;  // binding order of template indices
  // checks[k]: pairwise constraints against already-bound nodes when the
  // k-th template node binds (.first = earlier template index, .second =
  // true for in-range). clear_at[k]: clearances whose nodes are all bound.
  std::vector<std::vector<std::pair<int, bool>>> checks;
  std::vector<std::vector<int>> clear_at;
};

int label_index(const AtomClass& cls, Label u) {
  for (std::size_t i = 0; i < cls.ci.peripherals.size(); ++i)
    if (cls.ci.peripherals[i] == u) return static_cast<int>(i);
  return -1;  // relay
}

CompiledTemplate compile_template(const AtomClass& cls) {
  CompiledTemplate ct;
  ct.t = cls.peripheral_count();
  auto norm = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  for (auto [a, b] : cls.ci.c_edges)
    ct.need_edge.push_back(norm(label_index(cls, a), label_index(cls, b)));
  auto add_gap = [&](int a, int b) {
    auto p = norm(a, b);
    if (std::find(ct.need_gap.begin(), ct.need_gap.end(), p) ==
        ct.need_gap.end())
      ct.need_gap.push_back(p);
  };
  for (const auto& f : cls.flows) {
    const int s = label_index(cls, f.src), d = label_index(cls, f.dst);
    ct.flows.push_back({s, d});
    add_gap(s, d);
  }
  for (const auto& rec : cls.ci.i_edges) {
    const int u = label_index(cls, rec.interferer);
    const int r = label_index(cls, rec.receiver);
    add_gap(u, r);
    ct.clearances.push_back(
        {u, r, label_index(cls, rec.guard_tx), label_index(cls, rec.guard_rx)});
  }

  // Automorphisms: permutations preserving edges, flows, and records. Two
  // embeddings related by one are the same instance and must count once.
  std::array<std::int8_t, kMaxFlows> sigma{};
  std::vector<int> perm(static_cast<std::size_t>(ct.t));
  for (int i = 0; i < ct.t; ++i) perm[static_cast<std::size_t>(i)] = i;
  do {
    for (int i = 0; i < ct.t; ++i)
      sigma[static_cast<std::size_t>(i)] =
          static_cast<std::int8_t>(perm[static_cast<std::size_t>(i)]);
    auto map = [&](int i) { return i < 0 ? -1 : int(sigma[std::size_t(i)]); };
    bool ok = true;
    for (auto [a, b] : ct.need_edge) {
      auto p = norm(map(a), map(b));
      ok = ok && std::find(ct.need_edge.begin(), ct.need_edge.end(), p) !=
                     ct.need_edge.end();
    }
    for (auto [s, d] : ct.flows) {
      ok = ok && std::find(ct.flows.begin(), ct.flows.end(),
                           std::pair{map(s), map(d)}) != ct.flows.end();
    }
    for (const auto& c : ct.clearances) {
      bool found = false;
      for (const auto& x : ct.clearances) {
        found = found || (x.interferer == map(c.interferer) &&
                          x.receiver == map(c.receiver) &&
                          x.guard_tx == map(c.guard_tx) &&
                          x.guard_rx == map(c.guard_rx));
      }
      ok = ok && found;
    }
    if (ok) ct.autos.push_back(sigma);
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Binding order: most-constrained first so the search fails early.
  std::vector<bool> bound(static_cast<std::size_t>(ct.t), false);
  auto weight = [&](int v) {
    int w = 0;
    for (auto [a, b] : ct.need_edge)
      if ((a == v && bound[std::size_t(b)]) || (b == v && bound[std::size_t(a)]))
        w += 2;  // range constraints prune hardest
    for (auto [a, b] : ct.need_gap)
      if ((a == v && bound[std::size_t(b)]) || (b == v && bound[std::size_t(a)]))
        w += 1;
    return w;
  };
  for (int step = 0; step < ct.t; ++step) {
    int best = -1, best_w = -1;
    for (int v = 0; v < ct.t; ++v) {
      if (bound[std::size_t(v)]) continue;
      const int w = weight(v);
      if (w > best_w) {
        best = v;
        best_w = w;
      }
    }
    ct.order.push_back(best);
    bound[std::size_t(best)] = true;
  }

  ct.checks.resize(static_cast<std::size_t>(ct.t));
  ct.clear_at.resize(static_cast<std::size_t>(ct.t));
  std::vector<int> step_of(static_cast<std::size_t>(ct.t));
  for (int k = 0; k < ct.t; ++k) step_of[std::size_t(ct.order[std::size_t(k)])] = k;
  auto later = [&](int a, int b) { return std::max(step_of[std::size_t(a)], step_of[std::size_t(b)]); };
  for (auto [a, b] : ct.need_edge) {
    const int k = later(a, b);
    const int other = ct.order[std::size_t(k)] == a ? b : a;
    ct.checks[std::size_t(k)].push_back({other, true});
  }
  for (auto [a, b] : ct.need_gap) {
    const int k = later(a, b);
    const int other = ct.order[std::size_t(k)] == a ? b : a;
    ct.checks[std::size_t(k)].push_back({other, false});
  }
  for (std::size_t ci = 0; ci < ct.clearances.size(); ++ci) {
    const auto& c = ct.clearances[ci];
    int k = later(c.interferer, c.receiver);
    if (c.guard_tx >= 0) k = std::max(k, step_of[std::size_t(c.guard_tx)]);
    k = std::max(k, step_of[std::size_t(c.guard_rx)]);
    ct.clear_at[std::size_t(k)].push_back(static_cast<int>(ci));
  }
  return ct;
}

const CompiledTemplate& compiled(int class_id) {
  static const std::array<CompiledTemplate, 9> all = [] {
    std::array<CompiledTemplate, 9> a;
    for (int id = 1; id <= 9; ++id)
      a[static_cast<std::size_t>(id - 1)] = compile_template(atom(id));
    return a;
  }();
  return all[static_cast<std::size_t>(class_id - 1)];
}

// One class's backtracking matcher over a fixed network.
class Matcher {
 public:
  Matcher(const Network& net, const std::vector<char>& adj,
          const std::vector<int>& flow_id, const CompiledTemplate& ct,
          int class_id, MatchMode mode, std::vector<Instance>& out)
      : net_(net), adj_(adj), flow_id_(flow_id), ct_(ct), class_id_(class_id),
        mode_(mode), out_(out) {
    map_.assign(static_cast<std::size_t>(ct_.t), -1);
    used_.assign(static_cast<std::size_t>(net_.size()), false);
  }

  void run() {
    if (ct_.t <= net_.size()) bind(0);
  }

 private:
  bool in_range(int a, int b) const {
    return adj_[static_cast<std::size_t>(a * net_.size() + b)] != 0;
  }

  void bind(int step) {
    if (step == ct_.t) {
      emit();
      return;
    }
    const int v = ct_.order[static_cast<std::size_t>(step)];
    for (int node = 0; node < net_.size(); ++node) {
      if (used_[static_cast<std::size_t>(node)]) continue;
      map_[static_cast<std::size_t>(v)] = node;
      bool ok = true;
      for (auto [other, want_edge] : ct_.checks[static_cast<std::size_t>(step)]) {
        const int m = map_[static_cast<std::size_t>(other)];
        ok = in_range(node, m) == want_edge;
        if (!ok) break;
      }
      if (ok && mode_ == MatchMode::full) {
        for (int ci : ct_.clear_at[static_cast<std::size_t>(step)]) {
          const auto& c = ct_.clearances[static_cast<std::size_t>(ci)];
          ok = net_.clear_of(map_at(c.interferer), map_at(c.receiver),
                             map_at(c.guard_tx), map_at(c.guard_rx));
          if (!ok) break;
        }
      }
      if (ok) {
        used_[static_cast<std::size_t>(node)] = true;
        bind(step + 1);
        used_[static_cast<std::size_t>(node)] = false;
      }
    }
    map_[static_cast<std::size_t>(v)] = -1;
  }

  int map_at(int template_idx) const {
    return template_idx < 0 ? kRelayNode
                            : map_[static_cast<std::size_t>(template_idx)];
  }

  std::vector<int> flows_under(const std::vector<int>& m) const {
    std::vector<int> ids;
    ids.reserve(ct_.flows.size());
    for (auto [s, d] : ct_.flows)
      ids.push_back(flow_id_[static_cast<std::size_t>(
          m[static_cast<std::size_t>(s)] * net_.size() +
          m[static_cast<std::size_t>(d)])]);
    return ids;
  }

  void emit() {
    // Canonical representative under the automorphism group: the image
    // whose flow-index tuple is lexicographically smallest, node tuple as
    // the tie-break.
    std::vector<int> canon(map_.begin(), map_.end());
    std::vector<int> canon_flows = flows_under(canon);
    for (const auto& sigma : ct_.autos) {
      std::vector<int> cand(static_cast<std::size_t>(ct_.t));
      for (int i = 0; i < ct_.t; ++i)
        cand[static_cast<std::size_t>(i)] =
            map_[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])];
      std::vector<int> cand_flows = flows_under(cand);
      if (cand_flows < canon_flows ||
          (cand_flows == canon_flows && cand < canon)) {
        canon = std::move(cand);
        canon_flows = std::move(cand_flows);
      }
    }
    std::uint64_t key = 0;
    for (int i = 0; i < ct_.t; ++i)
      key = key << 8 | static_cast<std::uint8_t>(canon[static_cast<std::size_t>(i)]);
    if (!seen_.insert(key).second) return;

    Instance inst;
    inst.class_id = class_id_;
    inst.nodes = canon;
    inst.flows = std::move(canon_flows);
    out_.push_back(std::move(inst));
  }

  const Network& net_;
  const std::vector<char>& adj_;
  const std::vector<int>& flow_id_;
  const CompiledTemplate& ct_;
  const int class_id_;
  const MatchMode mode_;
  std::vector<Instance>& out_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::unordered_set<std::uint64_t> seen_;
};

}  // namespace

std::vector<PotentialFlow> potential_flows(const Network& net) {
  std::vector<PotentialFlow> flows;
  for (int s = 0; s < net.size(); ++s)
    for (int d = 0; d < net.size(); ++d)
      if (s != d && !net.in_range(s, d)) flows.push_back({s, d});
  return flows;
}

std::vector<Instance> identify(const Network& net, MatchMode mode,
                               std::uint16_t class_mask) {
  const int n = net.size();
  std::vector<char> adj(static_cast<std::size_t>(n * n), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      adj[static_cast<std::size_t>(a * n + b)] = net.in_range(a, b) ? 1 : 0;
  std::vector<int> flow_id(static_cast<std::size_t>(n * n), -1);
  const auto flows = potential_flows(net);
  for (std::size_t i = 0; i < flows.size(); ++i)
    flow_id[static_cast<std::size_t>(flows[i].src * n + flows[i].dst)] =
        static_cast<int>(i);

  std::vector<Instance> out;
  for (int id = 1; id <= 9; ++id) {
    if (!(class_mask >> (id - 1) & 1)) continue;
    Matcher(net, adj, flow_id, compiled(id), id, mode, out).run();
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> incidence_matrix(
    const Network& net, const std::vector<Instance>& instances) {
  const auto flows = potential_flows(net);
  std::vector<std::vector<std::uint8_t>> m(
      flows.size(), std::vector<std::uint8_t>(instances.size(), 0));
  for (std::size_t j = 0; j < instances.size(); ++j)
    for (int f : instances[j].flows)
      m[static_cast<std::size_t>(f)][j] = 1;
  return m;
}

}  // namespace pnc
