#pragma once

#include <optional>
#include <vector>

#include "nullmsg/simulator.hpp"

namespace nullmsg {

enum class EdgeKind { Local, Actual, Null };

/// Labeled communication graph of one run: nodes are process-time pairs,
/// edges are local clock ticks (implicit, always present), actual messages,
/// and null messages. Masks are indexed by send time and sender; bit j set
/// means an edge to <j, t+1>.
struct CommGraph {
  int n = 0;
  Time horizon = 0;
  std::vector<uint32_t> actual;  // [t*n + i]
  std::vector<uint32_t> nulls;

  uint32_t& actual_from(ProcId i, Time t) { return actual[size_t(t) * n + i]; }
  uint32_t& nulls_from(ProcId i, Time t) { return nulls[size_t(t) * n + i]; }
  uint32_t actual_from(ProcId i, Time t) const { return actual[size_t(t) * n + i]; }
  uint32_t nulls_from(ProcId i, Time t) const { return nulls[size_t(t) * n + i]; }
  bool has_actual(ProcId i, Time t, ProcId j) const { return actual_from(i, t) >> j & 1u; }
  bool has_null(ProcId i, Time t, ProcId j) const { return nulls_from(i, t) >> j & 1u; }
};

CommGraph empty_graph(int n, Time horizon);

/// Whether i's silence toward j at (r, t) is informative: the channel is not
/// blocked, nothing was actually sent, and some indexed run sends an actual
/// message there.
bool is_null_message(const RunIndex& idx, const Run& r, ProcId i, ProcId j, Time t);

CommGraph build_cg(const RunIndex& idx, const Run& r);

/// Per-time reachability layers from `from` using local + actual edges plus
/// the null edges whose sender is outside `banned_null_senders`.
std::vector<uint32_t> reach_layers(const CommGraph& cg, NodeRef from, uint32_t banned_null_senders);
/// Layers of nodes that can still reach `to` (all edge kinds).
std::vector<uint32_t> coreach_layers(const CommGraph& cg, NodeRef to);

bool has_chain(const CommGraph& cg, NodeRef a, NodeRef b);
bool bnf_reachable(const CommGraph& cg, uint32_t b_mask, NodeRef a, NodeRef b);
bool bnf_reachable(const CommGraph& cg, const std::vector<ProcId>& b_set, NodeRef a, NodeRef b);

struct BlockReport {
  bool ok = true;
  std::optional<std::vector<ProcId>> witness;  // a failing B, present iff !ok
  uint64_t checked_sets = 0;
};

struct BlockOptions {
  bool exhaustive = false;  // enumerate every B instead of null-sender subsets
};

/// f-resilient message block check between a and b: a B-null-free path must
/// exist for every |B| <= f. The default search restricts B to null senders
/// occurring on a->b paths at the maximal useful size (sound by monotonicity);
/// --exhaustive cross-validates against the full subset space.
BlockReport check_f_block(const CommGraph& cg, NodeRef a, NodeRef b, int f, BlockOptions opt = {});

/// (f/failed)-resilient variant: quantifies over B with |B ∪ failed| <= f.
BlockReport check_ffailed_block(const CommGraph& cg, NodeRef a, NodeRef b, int f,
                                uint32_t failed_mask, BlockOptions opt = {});

/// Processes that received an actual-only chain from <s,0> by m-1 and send no
/// actual message to d at m-1; returned when together with the run's faulty
/// set they number at least f+1.
std::optional<std::vector<ProcId>> silent_choir(const Network& net, const Run& r,
                                                const CommGraph& cg, Time m, int f);

/// Earliest time at which p is both reachable from a by a B-null-free path
/// and can still reach b; the time at which an adversarial crash of p is
/// unnoticeable yet cuts its influence.
std::optional<Time> critical_time(const CommGraph& cg, uint32_t b_mask, ProcId p, NodeRef a,
                                  NodeRef b);

/// Adversarial twin of r for a failing block witness B: members of a
/// minimized B crash at their critical times with every channel blocked,
/// other faulty processes crash as in r. The result leaves b.proc's state at
/// b.time unchanged while cutting every a->b chain.
Run build_confusion_run(const RunIndex& idx, const Run& r, const std::vector<ProcId>& b_set,
                        NodeRef a, NodeRef b);

/// Edge containment ignoring labels.
bool subgraph_unlabeled(const CommGraph& g1, const CommGraph& g2);

uint32_t null_senders_on_paths(const CommGraph& cg, NodeRef a, NodeRef b);

}  // namespace nullmsg
