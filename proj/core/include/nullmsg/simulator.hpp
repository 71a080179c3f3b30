#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "nullmsg/model.hpp"
#include "nullmsg/protocol.hpp"
#include "nullmsg/state.hpp"

namespace nullmsg {

struct Send {
  Time time = 0;
  ProcId from = 0;
  ProcId to = 0;
  int token = 0;
  auto operator<=>(const Send&) const = default;
};

struct ActionRec {
  ProcId proc = 0;
  int index = 0;
  Time time = 0;
  auto operator<=>(const ActionRec&) const = default;
};

/// A finite-horizon execution. `pattern` is the generating failure pattern
/// (what physically happened; it drives channel blocking); `minimal` is the
/// least harsh pattern compatible with the observable content. Indexed runs
/// are canonical: pattern == minimal.
struct Run {
  int vs = 0;
  Time horizon = 0;
  FailurePattern pattern;
  FailurePattern minimal;
  std::vector<Send> sends;          // sorted by (time, from, to)
  std::vector<ActionRec> actions;   // sorted by (proc, index, time)
  std::vector<std::vector<int>> state;  // [proc][0..horizon], frozen after a crash

  Time crash_time(ProcId p) const { return pattern.crash_time(p); }
  bool failed(ProcId p) const { return pattern.find(p) != nullptr; }
  uint32_t failed_mask() const { return pattern.failed_mask(); }
  bool sent_actual(ProcId i, ProcId j, Time t) const;
  /// Channel i->j blocked at send-time t: explicitly by the pattern's blocked
  /// set from the crash round on, and every out-channel from the round after
  /// the crash round on.
  bool blocked(ProcId i, ProcId j, Time t) const;
};

struct EnumLimits {
  int max_n = 6;
  Time max_horizon = 6;
  int max_f = 3;
  uint64_t max_combinations = 500000;
};

class Sim;

/// The enumerated run space R(Q, gamma^f) at a fixed horizon: one canonical
/// run per (vs, minimal pattern), a state index for knowledge queries, and
/// the ever-sent table backing the null-message definition.
struct RunIndex {
  const Sim* sim = nullptr;
  std::vector<Run> runs;
  int nice_run_id = -1;
  uint64_t combination_count = 0;  // raw (vs, pattern) combinations covered
  std::unordered_map<uint64_t, std::vector<int>> state_index;  // (p,t,state) -> run ids
  std::vector<uint8_t> ever_actual;  // [((t*n)+i)*n + j]: some run sends i->j at t

  static uint64_t state_key(ProcId p, Time t, int state_id);
  const std::vector<int>* bucket(ProcId p, Time t, int state_id) const;
  bool ever(ProcId i, ProcId j, Time t) const;
  const Run& nice_run() const { return runs[nice_run_id]; }
  /// Id of the canonical indexed run observationally equal to r.
  int find_run(const Run& r) const;
};

/// Closed-form count of raw (vs, pattern) combinations: 2 * sum over process
/// subsets of size <= f of the product of per-process (T * 2^outdeg) choices.
uint64_t pattern_combination_count(const Network& net, int f, Time horizon);

/// Deterministic round engine for one protocol on one network with failure
/// bound f and a fixed horizon. Owns the state interning store, so state ids
/// are comparable across every run it produces.
class Sim {
 public:
  Sim(const Protocol& proto, Network net, int f, Time horizon, EnumLimits limits = {});

  Run simulate(int vs, const FailurePattern& fp) const;
  Run nice_run() const { return simulate(1, {}); }

  /// Def.-1 compatibility, clause by clause: the run's observable behavior
  /// matches the claimed crashes (behavior correct before, exactly the
  /// non-blocked prescribed sends in the crash round, silence after).
  bool is_compatible(const Run& r, const FailurePattern& fp) const;

  /// The unique least harsh compatible pattern within the enumerable space
  /// (crash times 0..horizon-1): latest compatible crash times, exactly the
  /// suppressed recipients blocked, unobservable crashes dropped.
  FailurePattern minimal_pattern(const Run& r) const;

  RunIndex enumerate_runs() const;

  const Network& net() const { return net_; }
  const Protocol& protocol() const { return proto_; }
  int f() const { return f_; }
  Time horizon() const { return horizon_; }
  StateStore& store() const { return store_; }
  int initial_value(ProcId p, int vs) const { return p == net_.source ? vs : 0; }

 private:
  const Protocol& proto_;
  Network net_;
  int f_;
  Time horizon_;
  EnumLimits limits_;
  mutable StateStore store_;

  struct Prescription {
    // prescribed[t] = sends the process would make at t if alive (t < horizon);
    // acts[t] = action indices it would perform at t (t <= horizon).
    std::vector<std::vector<SendPlan::Item>> prescribed;
    std::vector<std::vector<int>> acts;
  };
  Prescription live_continuation(const Run& r, ProcId q) const;
  bool event_compatible(const Run& r, const Prescription& pre, ProcId q, Time crash,
                        uint32_t blocked, bool exact_block) const;
  SendPlan canonical_plan(ProcId self, Time t, const LocalStateView& view) const;
};

}  // namespace nullmsg
