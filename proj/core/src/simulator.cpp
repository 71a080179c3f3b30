#include "nullmsg/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace nullmsg {

bool Run::sent_actual(ProcId i, ProcId j, Time t) const {
  auto it = std::lower_bound(sends.begin(), sends.end(), Send{t, i, j, 0},
                             [](const Send& a, const Send& b) {
                               return std::tie(a.time, a.from, a.to) < std::tie(b.time, b.from, b.to);
                             });
  return it != sends.end() && it->time == t && it->from == i && it->to == j;
}

bool Run::blocked(ProcId i, ProcId j, Time t) const {
  const FailureEvent* e = pattern.find(i);
  if (!e) return false;
  if (t > e->time) return true;
  return t == e->time && (e->blocked >> j & 1u);
}

uint64_t RunIndex::state_key(ProcId p, Time t, int state_id) {
  return (uint64_t(uint32_t(p)) << 56) | (uint64_t(uint32_t(t)) << 48) | uint64_t(uint32_t(state_id));
}

const std::vector<int>* RunIndex::bucket(ProcId p, Time t, int state_id) const {
  auto it = state_index.find(state_key(p, t, state_id));
  return it == state_index.end() ? nullptr : &it->second;
}

bool RunIndex::ever(ProcId i, ProcId j, Time t) const {
  const int n = sim->net().n;
  return ever_actual[(size_t(t) * n + i) * n + j] != 0;
}

int RunIndex::find_run(const Run& r) const {
  for (size_t id = 0; id < runs.size(); ++id)
    if (runs[id].vs == r.vs && runs[id].minimal == r.minimal) return static_cast<int>(id);
  return -1;
}

uint64_t pattern_combination_count(const Network& net, int f, Time horizon) {
  // elementary symmetric sums over per-process option counts
  std::vector<uint64_t> sums(size_t(f) + 1, 0);
  sums[0] = 1;
  for (ProcId q = 0; q < net.n; ++q) {
    uint64_t opts = uint64_t(horizon) << net.out_degree(q);
    for (int k = f; k >= 1; --k) sums[k] += sums[k - 1] * opts;
  }
  uint64_t total = 0;
  for (int k = 0; k <= f; ++k) total += sums[k];
  return 2 * total;
}

Sim::Sim(const Protocol& proto, Network net, int f, Time horizon, EnumLimits limits)
    : proto_(proto), net_(std::move(net)), f_(f), horizon_(horizon), limits_(limits) {
  if (f_ < 0) throw InputError("negative failure bound");
  if (horizon_ < 0) throw InputError("negative horizon");
}

SendPlan Sim::canonical_plan(ProcId self, Time t, const LocalStateView& view) const {
  SendPlan plan = proto_.step(StepContext{net_, f_, horizon_}, self, view);
  if (t >= horizon_) {
    plan.sends.clear();  // no round past the horizon
  } else {
    std::sort(plan.sends.begin(), plan.sends.end(),
              [](const SendPlan::Item& a, const SendPlan::Item& b) { return a.to < b.to; });
    for (size_t i = 0; i < plan.sends.size(); ++i) {
      if (!net_.has_channel(self, plan.sends[i].to))
        throw ProtocolViolationError(proto_.name() + ": " + net_.name(self) +
                                     " sends on a nonexistent channel at t=" + std::to_string(t));
      if (i > 0 && plan.sends[i].to == plan.sends[i - 1].to)
        throw ProtocolViolationError(proto_.name() + ": duplicate send to " +
                                     net_.name(plan.sends[i].to));
    }
  }
  std::sort(plan.actions.begin(), plan.actions.end());
  plan.actions.erase(std::unique(plan.actions.begin(), plan.actions.end()), plan.actions.end());
  return plan;
}

Run Sim::simulate(int vs, const FailurePattern& fp) const {
  if (vs != 0 && vs != 1) throw InputError("initial value must be 0 or 1");
  if (!validate_pattern(fp, net_, f_)) throw InputError("invalid failure pattern");
  for (const auto& e : fp.events)
    if (e.time >= horizon_)
      throw InputError("crash times must lie in [0, horizon); later crashes are the failure-free run");

  const int n = net_.n;
  Run r;
  r.vs = vs;
  r.horizon = horizon_;
  r.pattern = fp;
  r.state.assign(n, std::vector<int>(size_t(horizon_) + 1, -1));

  std::vector<std::vector<Event>> log(n);
  std::vector<Time> crash(n);
  for (ProcId p = 0; p < n; ++p) {
    crash[p] = fp.crash_time(p);
    r.state[p][0] = store_.root(initial_value(p, vs));
  }

  for (Time t = 0; t <= horizon_; ++t) {
    std::vector<std::vector<Event>> sent(n), acted(n);  // per-proc events stamped t
    std::vector<std::vector<Event>> received(n);        // stamped t+1
    for (ProcId p = 0; p < n; ++p) {
      if (crash[p] < t) continue;  // inactive since its crash round
      LocalStateView view{initial_value(p, vs), t, log[p]};
      SendPlan plan = canonical_plan(p, t, view);
      for (const auto& item : plan.sends) {
        if (crash[p] == t && (fp.find(p)->blocked >> item.to & 1u)) continue;
        r.sends.push_back({t, p, item.to, item.token});
        sent[p].push_back({Event::Kind::SentActual, int16_t(item.to), int16_t(item.token), int16_t(t)});
        received[item.to].push_back(
            {Event::Kind::Received, int16_t(p), int16_t(item.token), int16_t(t + 1)});
      }
      if (crash[p] > t) {
        for (int a : plan.actions) {
          r.actions.push_back({p, a, t});
          acted[p].push_back({Event::Kind::ActionDone, int16_t(-1), int16_t(a), int16_t(t)});
        }
      }
    }
    if (t == horizon_) break;
    for (ProcId p = 0; p < n; ++p) {
      if (crash[p] <= t) {
        r.state[p][t + 1] = r.state[p][crash[p]];  // frozen at the crash time
        continue;
      }
      std::vector<Event> delta = std::move(sent[p]);
      delta.insert(delta.end(), acted[p].begin(), acted[p].end());
      std::sort(received[p].begin(), received[p].end(),
                [](const Event& a, const Event& b) { return a.peer < b.peer; });
      delta.insert(delta.end(), received[p].begin(), received[p].end());
      log[p].insert(log[p].end(), delta.begin(), delta.end());
      r.state[p][t + 1] = store_.extend(r.state[p][t], delta);
    }
  }

  std::sort(r.sends.begin(), r.sends.end());
  std::sort(r.actions.begin(), r.actions.end());
  r.minimal = minimal_pattern(r);
  return r;
}

Sim::Prescription Sim::live_continuation(const Run& r, ProcId q) const {
  Prescription pre;
  pre.prescribed.assign(size_t(horizon_), {});
  pre.acts.assign(size_t(horizon_) + 1, {});
  const Time c = r.crash_time(q);

  // Up to the crash round the process behaved correctly, so the prescription
  // equals what the run records.
  for (const Send& s : r.sends)
    if (s.from == q && s.time < std::min(c, horizon_)) pre.prescribed[s.time].push_back({s.to, s.token});
  for (const ActionRec& a : r.actions)
    if (a.proc == q && a.time < c) pre.acts[a.time].push_back(a.index);
  if (c > horizon_) return pre;  // never crashed within horizon

  // From the crash time on, replay q as if it stayed alive: its own sends are
  // the full prescriptions, receives come from the run unchanged.
  std::vector<Event> log = store_.reconstruct(r.state[q][c]);
  const int init = store_.initial_of(r.state[q][c]);
  for (Time t = c; t <= horizon_; ++t) {
    LocalStateView view{init, t, log};
    SendPlan plan = canonical_plan(q, t, view);
    if (t < horizon_) pre.prescribed[t] = plan.sends;
    pre.acts[t] = plan.actions;
    if (t == horizon_) break;
    std::vector<Event> delta;
    for (const auto& item : plan.sends)
      delta.push_back({Event::Kind::SentActual, int16_t(item.to), int16_t(item.token), int16_t(t)});
    for (int a : plan.actions)
      delta.push_back({Event::Kind::ActionDone, int16_t(-1), int16_t(a), int16_t(t)});
    std::vector<Event> recv;
    for (const Send& s : r.sends)
      if (s.to == q && s.time == t)
        recv.push_back({Event::Kind::Received, int16_t(s.from), int16_t(s.token), int16_t(t + 1)});
    std::sort(recv.begin(), recv.end(), [](const Event& a, const Event& b) { return a.peer < b.peer; });
    delta.insert(delta.end(), recv.begin(), recv.end());
    log.insert(log.end(), delta.begin(), delta.end());
  }
  return pre;
}

bool Sim::event_compatible(const Run& r, const Prescription& pre, ProcId q, Time crash,
                           uint32_t blocked, bool /*exact_block*/) const {
  // Actual sends of q per time.
  std::vector<std::vector<SendPlan::Item>> sent(static_cast<size_t>(horizon_));
  for (const Send& s : r.sends)
    if (s.from == q) sent[s.time].push_back({s.to, s.token});
  auto same = [](const std::vector<SendPlan::Item>& a, const std::vector<SendPlan::Item>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].to != b[i].to || a[i].token != b[i].token) return false;
    return true;
  };
  for (Time t = 0; t < horizon_; ++t) {
    if (t < crash) {
      if (!same(sent[t], pre.prescribed[t])) return false;
    } else if (t == crash) {
      std::vector<SendPlan::Item> expect;
      for (const auto& item : pre.prescribed[t])
        if (!(blocked >> item.to & 1u)) expect.push_back(item);
      if (!same(sent[t], expect)) return false;
    } else {
      if (!sent[t].empty()) return false;
    }
  }
  std::vector<std::vector<int>> acted(static_cast<size_t>(horizon_) + 1);
  for (const ActionRec& a : r.actions)
    if (a.proc == q) acted[a.time].push_back(a.index);
  for (Time t = 0; t <= horizon_; ++t) {
    if (t < crash) {
      if (acted[t] != pre.acts[t]) return false;
    } else {
      if (!acted[t].empty()) return false;
    }
  }
  return true;
}

bool Sim::is_compatible(const Run& r, const FailurePattern& fp) const {
  for (const auto& e : fp.events)
    if (e.proc < 0 || e.proc >= net_.n) return false;
  for (ProcId q = 0; q < net_.n; ++q) {
    const FailureEvent* e = fp.find(q);
    Prescription pre = live_continuation(r, q);
    if (!event_compatible(r, pre, q, e ? e->time : kNever, e ? e->blocked : 0, true)) return false;
  }
  return true;
}

FailurePattern Sim::minimal_pattern(const Run& r) const {
  FailurePattern out;
  for (const auto& ev : r.pattern.events) {
    const ProcId q = ev.proc;
    Prescription pre = live_continuation(r, q);
    if (event_compatible(r, pre, q, kNever, 0, true)) continue;  // crash unobservable: drop
    bool placed = false;
    for (Time t = horizon_ - 1; t >= ev.time && !placed; --t) {
      // the least harsh blocked set suppresses exactly the missing sends
      uint32_t suppressed = 0;
      uint32_t present = 0;
      for (const Send& s : r.sends)
        if (s.from == q && s.time == t) present |= 1u << s.to;
      for (const auto& item : pre.prescribed[t])
        if (!(present >> item.to & 1u)) suppressed |= 1u << item.to;
      if (event_compatible(r, pre, q, t, suppressed, true)) {
        out.add({q, t, suppressed});
        placed = true;
      }
    }
    if (!placed) out.add(ev);  // unreachable for runs produced by simulate()
  }
  return out;
}

RunIndex Sim::enumerate_runs() const {
  if (net_.n > limits_.max_n || horizon_ > limits_.max_horizon || f_ > limits_.max_f)
    throw ResourceBoundError("enumeration caps exceeded (n/horizon/f)");
  const uint64_t estimate = pattern_combination_count(net_, f_, horizon_);
  if (estimate > limits_.max_combinations)
    throw ResourceBoundError("enumeration would cover " + std::to_string(estimate) +
                             " (vs, pattern) combinations, over the configured cap of " +
                             std::to_string(limits_.max_combinations));

  // per-process crash options, in deterministic (time, blocked) order
  std::vector<std::vector<FailureEvent>> options(net_.n);
  for (ProcId q = 0; q < net_.n; ++q)
    for (Time t = 0; t < horizon_; ++t)
      for (uint32_t bl = net_.out[q];; bl = (bl - 1) & net_.out[q]) {
        options[q].push_back({q, t, bl});
        if (bl == 0) break;
      }
  for (auto& v : options)
    std::sort(v.begin(), v.end(), [](const FailureEvent& a, const FailureEvent& b) {
      return std::tie(a.time, a.blocked) < std::tie(b.time, b.blocked);
    });

  RunIndex idx;
  idx.sim = this;
  std::map<std::pair<int, std::vector<FailureEvent>>, int> seen;

  auto consider = [&](const FailurePattern& fp) {
    for (int vs : {1, 0}) {
      ++idx.combination_count;
      Run r = simulate(vs, fp);
      auto key = std::make_pair(vs, r.minimal.events);
      auto [it, fresh] = seen.emplace(key, static_cast<int>(idx.runs.size()));
      if (!fresh) continue;
      if (r.minimal == r.pattern) {
        idx.runs.push_back(std::move(r));
      } else {
        Run canon = simulate(vs, r.minimal);
        assert(canon.minimal == canon.pattern);
        idx.runs.push_back(std::move(canon));
      }
    }
  };

  // subsets of processes of size <= f in lexicographic DFS order, and for
  // each subset the cartesian product of per-process crash options
  std::vector<ProcId> subset;
  auto product = [&](auto&& inner, FailurePattern& fp, size_t pos) -> void {
    if (pos == subset.size()) {
      consider(fp);
      return;
    }
    for (const FailureEvent& e : options[subset[pos]]) {
      fp.events.push_back(e);
      inner(inner, fp, pos + 1);
      fp.events.pop_back();
    }
  };
  consider({});
  auto grow = [&](auto&& self, ProcId next, int remaining) -> void {
    if (remaining == 0) return;
    for (ProcId q = next; q < net_.n; ++q) {
      subset.push_back(q);
      FailurePattern fp;
      product(product, fp, 0);
      self(self, q + 1, remaining - 1);
      subset.pop_back();
    }
  };
  grow(grow, 0, f_);

  auto nice_key = std::make_pair(1, std::vector<FailureEvent>{});
  idx.nice_run_id = seen.at(nice_key);

  const int n = net_.n;
  idx.ever_actual.assign(size_t(horizon_) * n * n, 0);
  for (size_t id = 0; id < idx.runs.size(); ++id) {
    const Run& r = idx.runs[id];
    for (const Send& s : r.sends)
      idx.ever_actual[(size_t(s.time) * n + s.from) * n + s.to] = 1;
    for (ProcId p = 0; p < n; ++p)
      for (Time t = 0; t <= horizon_; ++t)
        idx.state_index[RunIndex::state_key(p, t, r.state[p][t])].push_back(static_cast<int>(id));
  }
  return idx;
}

}  // namespace nullmsg
