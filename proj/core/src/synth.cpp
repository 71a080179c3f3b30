#include "nullmsg/synth.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <unordered_map>

namespace nullmsg {

namespace {

std::string node_str(const Network& net, NodeRef n) {
  return net.name(n.proc) + "@" + std::to_string(n.time);
}

std::string set_str(const Network& net, uint32_t mask) {
  std::string out = "{";
  for (ProcId p = 0; p < net.n; ++p)
    if (mask >> p & 1u) {
      if (out.size() > 1) out += ",";
      out += net.name(p);
    }
  return out + "}";
}

void validate_target(const Network& net, const CommGraph& target) {
  if (target.n != net.n) throw InputError("target graph does not match the network");
  if (target.horizon < 0) throw InputError("bad target horizon");
  for (Time t = 0; t < target.horizon; ++t)
    for (ProcId i = 0; i < net.n; ++i) {
      if ((target.actual_from(i, t) | target.nulls_from(i, t)) & ~net.out[i])
        throw InputError("target edge off the declared channels at " +
                         node_str(net, {i, t}));
      if (target.actual_from(i, t) & target.nulls_from(i, t))
        throw InputError("edge marked both actual and null at " + node_str(net, {i, t}));
    }
}

// Cumulative nice-run histories per process and time, derived directly from
// the target's actual edges (every actual edge carries a 1 in the nice run)
// plus any scheduled actions.
std::vector<std::vector<std::vector<Event>>> build_nice_histories(const Network& net,
                                                                  const CommGraph& target,
                                                                  const ORInstance* inst) {
  const int n = net.n;
  const Time H = target.horizon;
  std::vector<std::vector<std::vector<Event>>> hist(n);
  for (ProcId p = 0; p < n; ++p) hist[p].assign(size_t(H) + 1, {});
  for (Time t = 0; t < H; ++t) {
    for (ProcId p = 0; p < n; ++p) {
      std::vector<Event> delta;
      for (uint32_t m = target.actual_from(p, t); m; m &= m - 1)
        delta.push_back({Event::Kind::SentActual, int16_t(__builtin_ctz(m)), int16_t(kBit1), int16_t(t)});
      if (inst)
        for (int h = 0; h < inst->k(); ++h)
          if (inst->actors[h] == p && inst->times[h] == t)
            delta.push_back({Event::Kind::ActionDone, int16_t(-1), int16_t(h), int16_t(t)});
      for (ProcId i = 0; i < n; ++i)
        if (target.has_actual(i, t, p))
          delta.push_back({Event::Kind::Received, int16_t(i), int16_t(kBit1), int16_t(t + 1)});
      hist[p][t + 1] = hist[p][t];
      hist[p][t + 1].insert(hist[p][t + 1].end(), delta.begin(), delta.end());
    }
  }
  return hist;
}

class NiceGuardProtocol final : public SynthesizedProtocol {
 public:
  NiceGuardProtocol(std::string name, Family fam, const Network& net, CommGraph target,
                    std::optional<ORInstance> inst)
      : name_(std::move(name)),
        family_(fam),
        source_(net.source),
        target_(std::move(target)),
        inst_(std::move(inst)),
        hist_(build_nice_histories(net, target_, inst_ ? &*inst_ : nullptr)) {}

  std::string name() const override { return name_; }
  Family family() const override { return family_; }
  const CommGraph& target() const override { return target_; }
  const ORInstance* instance() const override { return inst_ ? &*inst_ : nullptr; }
  bool is_nice_based() const override { return true; }

  SendPlan step(const StepContext&, ProcId self, const LocalStateView& st) const override {
    const Time H = target_.horizon;
    const int nice_init = self == source_ ? 1 : 0;
    const bool deviated =
        st.initial_value != nice_init || st.events != hist_[self][std::min<Time>(st.time, H)];
    SendPlan plan;
    if (st.time < H) {
      uint32_t act = target_.actual_from(self, st.time);
      uint32_t nul = target_.nulls_from(self, st.time);
      for (uint32_t m = act | nul; m; m &= m - 1) {
        ProcId j = __builtin_ctz(m);
        if (act >> j & 1u)
          plan.sends.push_back({j, deviated ? kBit0 : kBit1});
        else if (deviated)
          plan.sends.push_back({j, kBit0});
      }
    }
    if (inst_ && !deviated)
      for (int h = 0; h < inst_->k(); ++h)
        if (inst_->actors[h] == self && inst_->times[h] == st.time) plan.actions.push_back(h);
    return plan;
  }

 private:
  std::string name_;
  Family family_;
  ProcId source_;
  CommGraph target_;
  std::optional<ORInstance> inst_;
  std::vector<std::vector<std::vector<Event>>> hist_;
};

struct GuardKey {
  ProcId proc;
  Time time;
  int init;
  std::vector<Event> events;
  bool operator==(const GuardKey&) const = default;
};

struct GuardKeyHash {
  size_t operator()(const GuardKey& k) const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ (uint64_t(k.proc) << 40) ^ (uint64_t(k.time) << 32) ^
                 uint64_t(uint32_t(k.init));
    for (const Event& e : k.events) {
      uint64_t packed = (uint64_t(uint8_t(e.kind)) << 48) | (uint64_t(uint16_t(e.peer)) << 32) |
                        (uint64_t(uint16_t(e.token)) << 16) | uint64_t(uint16_t(e.at));
      h ^= packed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return size_t(h);
  }
};

using GuardTable = std::unordered_map<GuardKey, bool, GuardKeyHash>;

class RobustGuardProtocol final : public SynthesizedProtocol {
 public:
  RobustGuardProtocol(CommGraph target, std::shared_ptr<const GuardTable> guards)
      : target_(std::move(target)), guards_(std::move(guards)) {}

  std::string name() const override { return "rbm"; }
  Family family() const override { return Family::Rbm; }
  const CommGraph& target() const override { return target_; }

  SendPlan step(const StepContext&, ProcId self, const LocalStateView& st) const override {
    bool knows_bad = false;
    auto it = guards_->find(GuardKey{self, st.time, st.initial_value, st.events});
    if (it != guards_->end()) knows_bad = it->second;
    SendPlan plan;
    if (st.time < target_.horizon) {
      uint32_t act = target_.actual_from(self, st.time);
      uint32_t nul = target_.nulls_from(self, st.time);
      for (uint32_t m = act | nul; m; m &= m - 1) {
        ProcId j = __builtin_ctz(m);
        if (act >> j & 1u)
          plan.sends.push_back({j, knows_bad ? kBit0 : kBit1});
        else if (knows_bad)
          plan.sends.push_back({j, kBit0});
      }
    }
    return plan;
  }

 private:
  CommGraph target_;
  std::shared_ptr<const GuardTable> guards_;
};

// The nice run of a synthesized protocol must realize exactly the target's
// actual edges (all carrying 1).
void verify_nice_actuals(const Protocol& proto, const Network& net, const CommGraph& target) {
  Sim sim(proto, net, 0, target.horizon);
  Run nice = sim.nice_run();
  CommGraph got = empty_graph(net.n, target.horizon);
  for (const Send& s : nice.sends) {
    if (s.token != kBit1) throw SynthesisError("nice run sent a non-1 token");
    got.actual_from(s.from, s.time) |= 1u << s.to;
  }
  if (got.actual != target.actual)
    throw SynthesisError("nice run does not reproduce the target's actual edges");
}

}  // namespace

std::unique_ptr<SynthesizedProtocol> synth_nbm(const Network& net, const CommGraph& target) {
  validate_target(net, target);
  auto proto = std::make_unique<NiceGuardProtocol>("nbm", SynthesizedProtocol::Family::Nbm, net,
                                                   target, std::nullopt);
  verify_nice_actuals(*proto, net, target);
  return proto;
}

std::unique_ptr<SynthesizedProtocol> synth_or(const Network& net, const CommGraph& target,
                                              const ORInstance& inst) {
  validate_target(net, target);
  inst.validate(net, target.horizon);
  auto proto = std::make_unique<NiceGuardProtocol>("or", SynthesizedProtocol::Family::Or, net,
                                                   target, inst);
  verify_nice_actuals(*proto, net, target);
  return proto;
}

std::unique_ptr<SynthesizedProtocol> synth_rbm(const Network& net, const CommGraph& target, int f) {
  validate_target(net, target);
  auto guards = std::make_shared<GuardTable>();
  const int max_iters = net.n * std::max<Time>(target.horizon, 1) + 2;
  for (int iter = 0; iter < max_iters; ++iter) {
    auto proto = std::make_unique<RobustGuardProtocol>(target, guards);
    Sim sim(*proto, net, f, target.horizon);
    RunIndex idx = sim.enumerate_runs();
    const StateStore& store = sim.store();

    auto next = std::make_shared<GuardTable>(*guards);
    bool stable = true;
    std::set<std::tuple<ProcId, Time, int>> seen;
    for (const Run& r : idx.runs) {
      for (ProcId p = 0; p < net.n; ++p) {
        for (Time t = 0; t <= target.horizon; ++t) {
          int id = r.state[p][t];
          if (store.time_of(id) != t) continue;  // frozen state, never stepped
          if (!seen.emplace(p, t, id).second) continue;
          bool verdict = true;
          for (int rid : *idx.bucket(p, t, id)) {
            const Run& other = idx.runs[rid];
            if (other.vs == 1 && other.crash_time(net.source) > t) {
              verdict = false;
              break;
            }
          }
          GuardKey key{p, t, store.initial_of(id), store.reconstruct(id)};
          auto it = guards->find(key);
          bool current = it != guards->end() && it->second;
          if (current != verdict) stable = false;
          (*next)[key] = verdict;
        }
      }
    }
    if (stable) {
      verify_nice_actuals(*proto, net, target);
      return proto;
    }
    guards = next;
  }
  throw SynthesisError("robust guard fixpoint did not stabilize");
}

ConditionReport check_or_necessary(const Network& net, const CommGraph& cg, const ORInstance& inst,
                                   int f) {
  ConditionReport rep;
  const NodeRef theta_s{net.source, 0};
  for (int x = 0; x < inst.k(); ++x) {
    BlockReport b = check_f_block(cg, theta_s, inst.theta(x), f);
    if (!b.ok)
      rep.add("or-nec-1/x=" + std::to_string(x + 1),
              "no f-resilient block " + node_str(net, theta_s) + " -> " +
                  node_str(net, inst.theta(x)) + ", B=" +
                  set_str(net, [&] {
                    uint32_t m = 0;
                    for (ProcId p : *b.witness) m |= 1u << p;
                    return m;
                  }()));
  }
  for (int x = 1; x < inst.k(); ++x) {
    CommGraph pruned = cg;
    for (Time t = 0; t < cg.horizon; ++t) pruned.nulls_from(inst.actors[x - 1], t) = 0;
    BlockReport b = check_f_block(pruned, inst.theta_plus(x - 1), inst.theta(x), std::max(f - 1, 0));
    if (!b.ok)
      rep.add("or-nec-2/x=" + std::to_string(x + 1),
              "no (f-1)-resilient block " + node_str(net, inst.theta_plus(x - 1)) + " -> " +
                  node_str(net, inst.theta(x)) + " avoiding nulls of " +
                  net.name(inst.actors[x - 1]));
  }
  return rep;
}

ConditionReport check_or_conservative(const Network& net, const CommGraph& cg,
                                      const ORInstance& inst, int f) {
  ConditionReport rep;
  for (ProcId b = 0; b < net.n; ++b) {
    for (Time mb = 0; mb < cg.horizon; ++mb) {
      uint32_t first_hop = cg.actual_from(b, mb);
      if (!first_hop) continue;
      // nodes reachable from rho_b via a path that starts with an actual edge
      // and contains no null messages sent by b
      std::vector<uint32_t> layers(size_t(cg.horizon) + 1, 0);
      layers[mb + 1] = first_hop;
      for (Time t = mb + 1; t < cg.horizon; ++t) {
        uint32_t next = layers[t];
        for (uint32_t m = layers[t]; m; m &= m - 1) {
          ProcId i = __builtin_ctz(m);
          next |= cg.actual_from(i, t);
          if (i != b) next |= cg.nulls_from(i, t);
        }
        layers[t + 1] = next;
      }
      for (int x = 0; x + 1 < inst.k(); ++x) {
        NodeRef tx = inst.theta(x);
        // the qualifying path is nonempty: it starts with the actual edge
        bool reaches_tx = tx.time > mb && (layers[tx.time] >> tx.proc & 1u);
        if (!reaches_tx) continue;
        for (int h = x + 1; h < inst.k(); ++h) {
          NodeRef th = inst.theta(h);
          // every B containing b with |B| <= f
          std::vector<ProcId> others;
          for (ProcId p = 0; p < net.n; ++p)
            if (p != b) others.push_back(p);
          std::vector<ProcId> chosen;
          bool violated = false;
          auto rec = [&](auto&& self, size_t start) -> void {
            if (violated) return;
            uint32_t bmask = 1u << b;
            for (ProcId p : chosen) bmask |= 1u << p;
            if (!bnf_reachable(cg, bmask, tx, th) &&
                !bnf_reachable(cg, bmask, {b, mb + 1}, th)) {
              rep.add("or-cons/x=" + std::to_string(x + 1) + ",h=" + std::to_string(h + 1),
                      "crash of " + net.name(b) + " at " + node_str(net, {b, mb}) +
                          " with B=" + set_str(net, bmask) + " hides the miss of a_" +
                          std::to_string(x + 1) + " from " + node_str(net, th));
              violated = true;
              return;
            }
            if (static_cast<int>(chosen.size()) + 1 >= f) return;
            for (size_t i = start; i < others.size(); ++i) {
              chosen.push_back(others[i]);
              self(self, i + 1);
              chosen.pop_back();
            }
          };
          if (f >= 1) rec(rec, 0);
        }
      }
    }
  }
  return rep;
}

namespace {

// Process-level upper bound on the number of sender-disjoint s->d paths:
// unit-capacity max flow with every intermediate process split in two.
int sender_disjoint_upper_bound(const Network& net, const CommGraph& cg) {
  const int n = net.n;
  std::vector<std::vector<int>> cap(2 * n, std::vector<int>(2 * n, 0));
  auto in_node = [&](ProcId p) { return 2 * p; };
  auto out_node = [&](ProcId p) { return 2 * p + 1; };
  for (ProcId p = 0; p < n; ++p)
    cap[in_node(p)][out_node(p)] = (p == net.source || p == net.dest) ? n + 1 : 1;
  for (Time t = 0; t < cg.horizon; ++t)
    for (ProcId i = 0; i < n; ++i)
      for (uint32_t m = cg.actual_from(i, t) | cg.nulls_from(i, t); m; m &= m - 1)
        cap[out_node(i)][in_node(__builtin_ctz(m))] = n + 1;
  int flow = 0;
  const int src = out_node(net.source), dst = in_node(net.dest);
  while (true) {
    std::vector<int> prev(2 * n, -1);
    std::vector<int> queue{src};
    prev[src] = src;
    for (size_t qi = 0; qi < queue.size() && prev[dst] < 0; ++qi)
      for (int v = 0; v < 2 * n; ++v)
        if (prev[v] < 0 && cap[queue[qi]][v] > 0) {
          prev[v] = queue[qi];
          queue.push_back(v);
        }
    if (prev[dst] < 0) break;
    for (int v = dst; v != src; v = prev[v]) {
      --cap[prev[v]][v];
      ++cap[v][prev[v]];
    }
    ++flow;
  }
  return flow;
}

struct PathSig {
  uint32_t senders = 0;  // message senders on the path, s and d excluded
  bool s_null = false;   // contains a null message sent by s
};

// All distinct (sender set, s-null) signatures of paths from a to <d,m>.
std::vector<PathSig> path_signatures(const Network& net, const CommGraph& cg, NodeRef a, Time m,
                                     uint64_t cap) {
  std::set<std::pair<uint32_t, bool>> sigs;
  uint64_t steps = 0;
  auto rec = [&](auto&& self, NodeRef cur, uint32_t senders, bool s_null) -> void {
    if (++steps > cap)
      throw ResourceBoundError("path-set search exceeded the combination cap; use a smaller instance");
    if (cur.proc == net.dest && cur.time <= m) sigs.emplace(senders, s_null);
    if (cur.time >= m) return;
    self(self, {cur.proc, cur.time + 1}, senders, s_null);  // local edge
    uint32_t act = cg.actual_from(cur.proc, cur.time);
    uint32_t nul = cg.nulls_from(cur.proc, cur.time);
    for (uint32_t msk = act | nul; msk; msk &= msk - 1) {
      ProcId j = __builtin_ctz(msk);
      uint32_t senders2 = senders;
      if (cur.proc != net.source && cur.proc != net.dest) senders2 |= 1u << cur.proc;
      bool null2 = s_null || (cur.proc == net.source && (nul >> j & 1u) && !(act >> j & 1u));
      self(self, {j, cur.time + 1}, senders2, null2);
    }
  };
  rec(rec, a, 0, false);
  std::vector<PathSig> out;
  for (auto& [mask, flag] : sigs) out.push_back({mask, flag});
  return out;
}

bool choose_disjoint(const std::vector<PathSig>& sigs, int need) {
  // keep only signatures not dominated by a subset signature at least as clean
  std::vector<PathSig> pool;
  for (const PathSig& s : sigs) {
    bool dominated = false;
    for (const PathSig& o : sigs)
      if ((o.senders & ~s.senders) == 0 && (!o.s_null || s.s_null) &&
          (o.senders != s.senders || o.s_null != s.s_null))
        dominated = true;
    if (!dominated) pool.push_back(s);
  }
  auto rec = [&](auto&& self, size_t start, uint32_t used, int left, bool have_clean) -> bool {
    if (left == 0) return have_clean;
    for (size_t i = start; i < pool.size(); ++i) {
      if (pool[i].senders & used) continue;
      if (self(self, i + 1, used | pool[i].senders, left - 1, have_clean || !pool[i].s_null))
        return true;
    }
    return false;
  };
  return rec(rec, 0, 0, need, false);
}

}  // namespace

ConditionReport check_robust_conditions(const Network& net, const CommGraph& cg, int f) {
  ConditionReport rep;
  for (Time t = 0; t < cg.horizon; ++t)
    if (cg.has_actual(net.source, t, net.dest)) return rep;  // first bullet
  if (sender_disjoint_upper_bound(net, cg) >= f + 1) {
    for (Time m = 0; m <= cg.horizon; ++m) {
      auto sigs = path_signatures(net, cg, {net.source, 0}, m, 100000);
      if (choose_disjoint(sigs, f + 1)) return rep;
    }
  }
  rep.add("robust-nec", "no actual s->d message and no " + std::to_string(f + 1) +
                            " sender-disjoint chains with one free of s's nulls");
  return rep;
}

}  // namespace nullmsg
