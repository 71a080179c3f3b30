#include "nullmsg/commgraph.hpp"

#include <algorithm>
#include <stdexcept>

namespace nullmsg {

namespace {

std::vector<ProcId> mask_to_set(uint32_t mask) {
  std::vector<ProcId> out;
  for (ProcId p = 0; mask; ++p, mask >>= 1)
    if (mask & 1u) out.push_back(p);
  return out;
}

uint32_t set_to_mask(const std::vector<ProcId>& set) {
  uint32_t m = 0;
  for (ProcId p : set) m |= 1u << p;
  return m;
}

}  // namespace

CommGraph empty_graph(int n, Time horizon) {
  CommGraph cg;
  cg.n = n;
  cg.horizon = horizon;
  cg.actual.assign(size_t(horizon) * n, 0);
  cg.nulls.assign(size_t(horizon) * n, 0);
  return cg;
}

bool is_null_message(const RunIndex& idx, const Run& r, ProcId i, ProcId j, Time t) {
  if (!idx.sim->net().has_channel(i, j)) throw InputError("no channel " + std::to_string(i) + "->" + std::to_string(j));
  if (t < 0 || t >= r.horizon) throw InputError("send time outside horizon");
  return !r.blocked(i, j, t) && !r.sent_actual(i, j, t) && idx.ever(i, j, t);
}

CommGraph build_cg(const RunIndex& idx, const Run& r) {
  const Network& net = idx.sim->net();
  CommGraph cg = empty_graph(net.n, r.horizon);
  for (const Send& s : r.sends) cg.actual_from(s.from, s.time) |= 1u << s.to;
  for (Time t = 0; t < r.horizon; ++t)
    for (ProcId i = 0; i < net.n; ++i) {
      uint32_t candidates = net.out[i] & ~cg.actual_from(i, t);
      for (uint32_t m = candidates; m; m &= m - 1) {
        ProcId j = __builtin_ctz(m);
        if (!r.blocked(i, j, t) && idx.ever(i, j, t)) cg.nulls_from(i, t) |= 1u << j;
      }
    }
  return cg;
}

std::vector<uint32_t> reach_layers(const CommGraph& cg, NodeRef from, uint32_t banned) {
  std::vector<uint32_t> layers(size_t(cg.horizon) + 1, 0);
  if (from.time < 0 || from.time > cg.horizon) return layers;
  layers[from.time] = 1u << from.proc;
  for (Time t = from.time; t < cg.horizon; ++t) {
    uint32_t next = layers[t];  // local edges
    for (uint32_t m = layers[t]; m; m &= m - 1) {
      ProcId i = __builtin_ctz(m);
      next |= cg.actual_from(i, t);
      if (!(banned >> i & 1u)) next |= cg.nulls_from(i, t);
    }
    layers[t + 1] = next;
  }
  return layers;
}

std::vector<uint32_t> coreach_layers(const CommGraph& cg, NodeRef to) {
  std::vector<uint32_t> layers(size_t(cg.horizon) + 1, 0);
  if (to.time < 0 || to.time > cg.horizon) return layers;
  layers[to.time] = 1u << to.proc;
  for (Time t = to.time - 1; t >= 0; --t) {
    uint32_t cur = 0;
    for (ProcId i = 0; i < cg.n; ++i) {
      if (layers[t + 1] >> i & 1u) cur |= 1u << i;  // local edge
      if ((cg.actual_from(i, t) | cg.nulls_from(i, t)) & layers[t + 1]) cur |= 1u << i;
    }
    layers[t] = cur;
  }
  return layers;
}

bool bnf_reachable(const CommGraph& cg, uint32_t b_mask, NodeRef a, NodeRef b) {
  if (a.time > b.time || b.time > cg.horizon) return false;
  auto layers = reach_layers(cg, a, b_mask);
  return layers[b.time] >> b.proc & 1u;
}

bool bnf_reachable(const CommGraph& cg, const std::vector<ProcId>& b_set, NodeRef a, NodeRef b) {
  return bnf_reachable(cg, set_to_mask(b_set), a, b);
}

bool has_chain(const CommGraph& cg, NodeRef a, NodeRef b) { return bnf_reachable(cg, 0u, a, b); }

uint32_t null_senders_on_paths(const CommGraph& cg, NodeRef a, NodeRef b) {
  if (a.time > b.time || b.time > cg.horizon) return 0;
  auto fwd = reach_layers(cg, a, 0);
  auto bwd = coreach_layers(cg, b);
  uint32_t senders = 0;
  for (Time t = a.time; t < b.time; ++t)
    for (ProcId i = 0; i < cg.n; ++i)
      if ((fwd[t] >> i & 1u) && (cg.nulls_from(i, t) & bwd[t + 1])) senders |= 1u << i;
  return senders;
}

namespace {

// Enumerates subsets of `pool` of exactly `k` members (lexicographic by
// process index) and reports the first failing one.
bool search_subsets(const CommGraph& cg, NodeRef a, NodeRef b, uint32_t base,
                    const std::vector<ProcId>& pool, int k, BlockReport& rep) {
  std::vector<ProcId> chosen;
  auto rec = [&](auto&& self, size_t start) -> bool {
    if (static_cast<int>(chosen.size()) == k) {
      uint32_t mask = base;
      for (ProcId p : chosen) mask |= 1u << p;
      ++rep.checked_sets;
      if (!bnf_reachable(cg, mask, a, b)) {
        rep.ok = false;
        rep.witness = mask_to_set(mask);
        return true;
      }
      return false;
    }
    for (size_t i = start; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

BlockReport check_ffailed_block(const CommGraph& cg, NodeRef a, NodeRef b, int f,
                                uint32_t failed_mask, BlockOptions opt) {
  BlockReport rep;
  const int budget = f - __builtin_popcount(failed_mask);
  if (budget < 0) throw InputError("more failures than the bound f");

  if (opt.exhaustive) {
    std::vector<ProcId> pool;
    for (ProcId p = 0; p < cg.n; ++p) pool.push_back(p);
    for (int k = 0; k <= cg.n && rep.ok; ++k) {
      // candidate B of size k; the cardinality constraint is on |B ∪ failed|
      std::vector<ProcId> chosen;
      auto rec = [&](auto&& self, size_t start) -> bool {
        if (static_cast<int>(chosen.size()) == k) {
          uint32_t mask = 0;
          for (ProcId p : chosen) mask |= 1u << p;
          if (__builtin_popcount(mask | failed_mask) > f) return false;
          ++rep.checked_sets;
          if (!bnf_reachable(cg, mask, a, b)) {
            rep.ok = false;
            rep.witness = mask_to_set(mask);
            return true;
          }
          return false;
        }
        for (size_t i = start; i < pool.size(); ++i) {
          chosen.push_back(pool[i]);
          if (self(self, i + 1)) return true;
          chosen.pop_back();
        }
        return false;
      };
      rec(rec, 0);
    }
    return rep;
  }

  // Restricting B to null senders on a->b paths is sound: dropping members
  // outside that set never changes B-null-free reachability, and failing is
  // preserved under supersets, so only maximal-size subsets need checking.
  const uint32_t ns = null_senders_on_paths(cg, a, b);
  const uint32_t base = ns & failed_mask;  // costs nothing against the budget
  std::vector<ProcId> pool = mask_to_set(ns & ~failed_mask);
  const int k = std::min<int>(budget, static_cast<int>(pool.size()));
  search_subsets(cg, a, b, base, pool, k, rep);
  return rep;
}

BlockReport check_f_block(const CommGraph& cg, NodeRef a, NodeRef b, int f, BlockOptions opt) {
  return check_ffailed_block(cg, a, b, f, 0, opt);
}

std::optional<std::vector<ProcId>> silent_choir(const Network& net, const Run& r,
                                                const CommGraph& cg, Time m, int f) {
  if (m < 1 || m > r.horizon) throw InputError("silent choir needs 1 <= m <= horizon");
  // actual-only chains: ban every process from sending nulls
  auto layers = reach_layers(cg, {net.source, 0}, ~0u);
  uint32_t choir = 0;
  for (ProcId p = 0; p < net.n; ++p) {
    if (!(layers[m - 1] >> p & 1u)) continue;
    if (r.sent_actual(p, net.dest, m - 1)) continue;
    choir |= 1u << p;
  }
  if (__builtin_popcount(choir | r.failed_mask()) >= f + 1) return mask_to_set(choir);
  return std::nullopt;
}

std::optional<Time> critical_time(const CommGraph& cg, uint32_t b_mask, ProcId p, NodeRef a,
                                  NodeRef b) {
  auto fwd = reach_layers(cg, a, b_mask);
  auto bwd = coreach_layers(cg, b);
  for (Time t = a.time; t <= b.time; ++t)
    if ((fwd[t] >> p & 1u) && (bwd[t] >> p & 1u)) return t;
  return std::nullopt;
}

Run build_confusion_run(const RunIndex& idx, const Run& r, const std::vector<ProcId>& b_set,
                        NodeRef a, NodeRef b) {
  const Sim& sim = *idx.sim;
  if (b_set.empty()) throw InputError("confusion run needs a nonempty witness set");
  CommGraph cg = build_cg(idx, r);
  uint32_t bmask = set_to_mask(b_set);
  if (__builtin_popcount(bmask | r.failed_mask()) > sim.f())
    throw InputError("witness set exceeds the failure budget");
  if (bnf_reachable(cg, bmask, a, b))
    throw InputError("confusion run requires a failing block witness");

  // Shrink to an inclusion-minimal witness; minimality guarantees every
  // member has a finite critical time.
  for (ProcId p : mask_to_set(bmask)) {
    uint32_t without = bmask & ~(1u << p);
    if (!bnf_reachable(cg, without, a, b)) bmask = without;
  }

  FailurePattern fp;
  for (ProcId p : mask_to_set(bmask)) {
    auto ct = critical_time(cg, bmask, p, a, b);
    if (!ct) throw std::logic_error("minimal witness member without a critical time");
    fp.add({p, *ct, sim.net().out[p]});
  }
  for (const auto& e : r.pattern.events)
    if (!(bmask >> e.proc & 1u)) fp.add(e);
  return sim.simulate(r.vs, fp);
}

bool subgraph_unlabeled(const CommGraph& g1, const CommGraph& g2) {
  if (g1.n != g2.n || g1.horizon != g2.horizon) throw InputError("graphs have mismatched shape");
  for (size_t i = 0; i < g1.actual.size(); ++i)
    if ((g1.actual[i] | g1.nulls[i]) & ~(g2.actual[i] | g2.nulls[i])) return false;
  return true;
}

}  // namespace nullmsg
