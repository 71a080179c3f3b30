#include <unordered_map>

#include "nullmsg/synth.hpp"

namespace nullmsg {

namespace {

std::string node_str(const Network& net, NodeRef n) {
  return net.name(n.proc) + "@" + std::to_string(n.time);
}

std::string run_str(const Network& net, const Run& r) {
  std::string out = "run(vs=" + std::to_string(r.vs);
  for (const auto& e : r.pattern.events) {
    out += ", " + net.name(e.proc) + "!" + std::to_string(e.time) + "/bl=";
    for (ProcId j = 0; j < net.n; ++j)
      if (e.blocked >> j & 1u) out += net.name(j);
  }
  return out + ")";
}

// Bucket-level verdict memos: knowledge is a function of (subject, time,
// state), so each indistinguishability class is evaluated once.
class SweepCache {
 public:
  SweepCache(const RunIndex& idx, Time horizon, ProcId source, ProcId dest)
      : idx_(idx), horizon_(horizon), source_(source), dest_(dest) {
    const size_t count = idx.runs.size() * (size_t(horizon) + 1);
    chain_d_.assign(count, 0);
    actual_chain_d_.assign(count, 0);
    for (size_t id = 0; id < idx.runs.size(); ++id) {
      CommGraph cg = build_cg(idx, idx_.runs[id]);
      auto all = reach_layers(cg, {source_, 0}, 0);
      auto act = reach_layers(cg, {source_, 0}, ~0u);
      for (Time m = 0; m <= horizon; ++m) {
        chain_d_[id * (horizon + 1) + m] = all[m] >> dest_ & 1u;
        actual_chain_d_[id * (horizon + 1) + m] = act[m] >> dest_ & 1u;
      }
    }
  }

  bool chain_to_d(int id, Time m) const { return chain_d_[size_t(id) * (horizon_ + 1) + m]; }
  bool actual_chain_to_d(int id, Time m) const {
    return actual_chain_d_[size_t(id) * (horizon_ + 1) + m];
  }

  bool knows_vs(int b, ProcId p, Time t, const Run& r) {
    auto& memo = b ? vs1_ : vs0_;
    uint64_t key = RunIndex::state_key(p, t, r.state[p][t]);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool verdict = true;
    for (int rid : *idx_.bucket(p, t, r.state[p][t]))
      if (idx_.runs[rid].vs != b) {
        verdict = false;
        break;
      }
    memo.emplace(key, verdict);
    return verdict;
  }

  bool knows_not_nice(ProcId p, Time t, const Run& r) {
    uint64_t key = RunIndex::state_key(p, t, r.state[p][t]);
    auto it = nn_.find(key);
    if (it != nn_.end()) return it->second;
    bool verdict = true;
    for (int rid : *idx_.bucket(p, t, r.state[p][t])) {
      const Run& other = idx_.runs[rid];
      if (other.vs == 1 && other.pattern.empty()) {
        verdict = false;
        break;
      }
    }
    nn_.emplace(key, verdict);
    return verdict;
  }

  bool knows_chain_to_d(Time m, const Run& r) {
    uint64_t key = RunIndex::state_key(dest_, m, r.state[dest_][m]);
    auto it = chain_know_.find(key);
    if (it != chain_know_.end()) return it->second;
    bool verdict = true;
    for (int rid : *idx_.bucket(dest_, m, r.state[dest_][m]))
      if (!chain_to_d(rid, m)) {
        verdict = false;
        break;
      }
    chain_know_.emplace(key, verdict);
    return verdict;
  }

 private:
  const RunIndex& idx_;
  Time horizon_;
  ProcId source_, dest_;
  std::vector<uint8_t> chain_d_, actual_chain_d_;
  std::unordered_map<uint64_t, bool> vs1_, vs0_, nn_, chain_know_;
};

}  // namespace

ConditionReport verify_theorems(const Protocol& proto, const Network& net, int f, Time horizon,
                                const VerifyOptions& opts) {
  Sim sim(proto, net, f, horizon);
  RunIndex idx = sim.enumerate_runs();
  ConditionReport rep;
  const ProcId s = net.source, d = net.dest;
  const NodeRef theta_s{s, 0};
  SweepCache cache(idx, horizon, s, d);

  auto block_check = opts.block_check;
  if (!block_check)
    block_check = [](const CommGraph& cg, NodeRef a, NodeRef b, int ff, uint32_t failed) {
      return check_ffailed_block(cg, a, b, ff, failed);
    };

  for (size_t id = 0; id < idx.runs.size(); ++id) {
    const Run& r = idx.runs[id];
    CommGraph cg = build_cg(idx, r);

    for (Time m = 0; m <= horizon; ++m) {
      // knowledge property: K_i(phi) at (r, m) implies phi at (r, m)
      if (cache.knows_vs(1, d, m, r) && r.vs != 1)
        rep.add("knowledge-property", run_str(net, r) + " m=" + std::to_string(m));
      if (cache.knows_vs(0, d, m, r) && r.vs != 0)
        rep.add("knowledge-property", run_str(net, r) + " m=" + std::to_string(m));
      for (ProcId p = 0; p < net.n; ++p) {
        if (cache.knows_not_nice(p, m, r) && r.vs == 1 && r.pattern.empty())
          rep.add("knowledge-property", "not-nice known at the nice run, " + net.name(p) + "@" +
                                            std::to_string(m));
        // the state-comparison shortcut must agree with the oracle everywhere
        if (knows_not_nice_fast(idx, r, p, m) != cache.knows_not_nice(p, m, r))
          rep.add("fast-nice", run_str(net, r) + " " + node_str(net, {p, m}));
      }

      // value-transfer necessities, for a destination still alive at m
      if (r.crash_time(d) >= m && cache.knows_vs(1, d, m, r)) {
        if (!cache.chain_to_d(static_cast<int>(id), m))
          rep.add("thm-chain-necessity", run_str(net, r) + " m=" + std::to_string(m));
        if (!cache.knows_chain_to_d(m, r))
          rep.add("thm-known-chain", run_str(net, r) + " m=" + std::to_string(m));
        BlockReport br = block_check(cg, theta_s, {d, m}, f, r.failed_mask());
        if (!br.ok)
          rep.add("thm-block-necessity", run_str(net, r) + " m=" + std::to_string(m));
      }

      if (m >= 1) {
        BlockReport br = block_check(cg, theta_s, {d, m}, f, r.failed_mask());
        if (br.ok) {
          // block implies a silent choir unless an actual chain already
          // reaches the destination
          if (!cache.actual_chain_to_d(static_cast<int>(id), m) &&
              !silent_choir(net, r, cg, m, f))
            rep.add("lemma-choir", run_str(net, r) + " m=" + std::to_string(m));
        } else if (opts.confusion) {
          try {
            Run conf = build_confusion_run(idx, r, *br.witness, theta_s, {d, m});
            if (conf.state[d][m] != r.state[d][m])
              rep.add("confusion-state", run_str(net, r) + " m=" + std::to_string(m));
            if (has_chain(build_cg(idx, conf), theta_s, {d, m}))
              rep.add("confusion-chain", run_str(net, r) + " m=" + std::to_string(m));
            if (static_cast<int>(conf.pattern.events.size()) > f)
              rep.add("confusion-budget", run_str(net, r) + " m=" + std::to_string(m));
          } catch (const std::exception& e) {
            rep.add("confusion-build", run_str(net, r) + " m=" + std::to_string(m) + ": " + e.what());
          }
        }
      }
    }
  }

  // pattern order implies unlabeled-subgraph containment
  if (static_cast<int>(idx.runs.size()) <= opts.lemma6_pair_cap) {
    std::vector<CommGraph> graphs;
    graphs.reserve(idx.runs.size());
    for (const Run& r : idx.runs) graphs.push_back(build_cg(idx, r));
    for (size_t i = 0; i < idx.runs.size(); ++i)
      for (size_t j = 0; j < idx.runs.size(); ++j) {
        if (i == j) continue;
        if (!harsher(idx.runs[i].minimal, idx.runs[j].minimal)) continue;
        if (!subgraph_unlabeled(graphs[i], graphs[j]))
          rep.add("lemma-subgraph",
                  run_str(net, idx.runs[i]) + " vs " + run_str(net, idx.runs[j]));
      }
  } else {
    // sampled: derive harsher variants of each run's pattern and compare
    const size_t stride = idx.runs.size() / 200 + 1;
    for (size_t i = 0; i < idx.runs.size(); i += stride) {
      const Run& r = idx.runs[i];
      std::vector<FailurePattern> variants;
      for (size_t e = 0; e < r.minimal.events.size(); ++e) {
        FailurePattern fp = r.minimal;
        fp.events[e].blocked = net.out[fp.events[e].proc];
        variants.push_back(fp);
        if (fp.events[e].time > 0) {
          fp.events[e].time -= 1;
          variants.push_back(fp);
        }
      }
      if (static_cast<int>(r.minimal.events.size()) < f)
        for (ProcId q = 0; q < net.n; ++q)
          if (!r.minimal.find(q)) {
            FailurePattern fp = r.minimal;
            fp.add({q, 0, net.out[q]});
            variants.push_back(fp);
            break;
          }
      CommGraph g = build_cg(idx, r);
      for (const FailurePattern& fp : variants) {
        Run harsh = sim.simulate(r.vs, fp);
        if (!harsher(harsh.minimal, r.minimal)) continue;
        if (!subgraph_unlabeled(build_cg(idx, harsh), g))
          rep.add("lemma-subgraph", run_str(net, harsh) + " vs " + run_str(net, r));
      }
    }
  }

  // replay determinism on a sample
  for (size_t id = 0; id < idx.runs.size(); id += idx.runs.size() / 16 + 1) {
    const Run& r = idx.runs[id];
    Run again = sim.simulate(r.vs, r.pattern);
    if (again.sends != r.sends || again.actions != r.actions || again.state != r.state)
      rep.add("determinism", run_str(net, r));
  }

  if (const ORInstance* inst = proto.instance()) {
    for (const Run& r : idx.runs) {
      std::vector<std::optional<Time>> done(inst->k());
      for (const ActionRec& a : r.actions)
        if (a.index >= 0 && a.index < inst->k()) done[a.index] = a.time;
      for (int h = 0; h < inst->k(); ++h) {
        if (!done[h]) continue;
        if (r.vs != 1)
          rep.add("or-consistency", "a_" + std::to_string(h + 1) + " in " + run_str(net, r));
        for (int g = 0; g < h; ++g)
          if (!done[g] || *done[g] > *done[h])
            rep.add("or-consistency", "a_" + std::to_string(h + 1) + " before a_" +
                                          std::to_string(g + 1) + " in " + run_str(net, r));
        const ProcId actor = inst->actors[h];
        const Time th = *done[h];
        if (!cache.knows_vs(1, actor, th, r))
          rep.add("kop-value", "a_" + std::to_string(h + 1) + " in " + run_str(net, r));
        if (h > 0) {
          Fact prev = Fact::action_done(h - 1);
          if (!knows(idx, actor, prev, r, th).holds)
            rep.add("kop-predecessor", "a_" + std::to_string(h + 1) + " in " + run_str(net, r));
        }
        if (knows_not_nice_fast(idx, r, actor, th))
          rep.add("or-conservative", "a_" + std::to_string(h + 1) + " in " + run_str(net, r));
      }
    }
    const Run& nice = idx.nice_run();
    for (int h = 0; h < inst->k(); ++h) {
      bool found = false;
      for (const ActionRec& a : nice.actions)
        if (a.index == h && a.proc == inst->actors[h] && a.time == inst->times[h]) found = true;
      if (!found) rep.add("or-liveness", "a_" + std::to_string(h + 1) + " missing in the nice run");
    }
  }

  // nice-run information transfer, both directions on the nice graph
  {
    const Run& nice = idx.nice_run();
    CommGraph ng = build_cg(idx, nice);
    for (Time m = 0; m <= horizon; ++m) {
      bool knows_value = cache.knows_vs(1, d, m, nice);
      bool block = check_f_block(ng, theta_s, {d, m}, f).ok;
      if (knows_value && !block) rep.add("nice-it-necessity", "m=" + std::to_string(m));
      if (proto.is_nice_based() && block && !knows_value)
        rep.add("nice-it-sufficiency", "m=" + std::to_string(m));
    }
  }

  if (opts.robust_expected) {
    std::optional<std::string> counterexample;
    for (const Run& r : idx.runs) {
      if (r.vs != 1 || r.failed(s)) continue;
      bool achieved = false;
      for (Time m = 0; m <= horizon && !achieved; ++m)
        achieved = cache.knows_vs(1, d, m, r) || cache.knows_vs(0, d, m, r);
      if (!achieved) {
        counterexample = run_str(net, r);
        break;
      }
    }
    if (*opts.robust_expected && counterexample)
      rep.add("robust-it", *counterexample);
    if (!*opts.robust_expected && !counterexample)
      rep.add("robust-counterexample", "no run with vs=1, correct source and value never learned");
  }

  return rep;
}

}  // namespace nullmsg
