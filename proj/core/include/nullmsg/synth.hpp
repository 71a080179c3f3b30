#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nullmsg/commgraph.hpp"
#include "nullmsg/knowledge.hpp"
#include "nullmsg/protocol.hpp"

namespace nullmsg {

struct Violation {
  std::string condition;
  std::string witness;
};

struct ConditionReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string condition, std::string witness) {
    violations.push_back({std::move(condition), std::move(witness)});
  }
};

/// A protocol synthesized from a target communication graph. Guards are:
/// Nbm/Or — the sender knows the run is not nice (state comparison against
/// the nice-run tables); Rbm — the sender knows (v_s != 1 or s is faulty),
/// resolved to a concrete guard table by a run-space fixpoint.
class SynthesizedProtocol : public Protocol {
 public:
  enum class Family { Nbm, Rbm, Or };
  virtual Family family() const = 0;
  virtual const CommGraph& target() const = 0;
};

/// Nice-based message protocol realizing `target`: actual edges carry 1
/// unless the sender detected a deviation (then 0); null edges stay silent
/// unless the sender detected a deviation (then 0). The nice run of the
/// result reproduces exactly the target's actual edges (checked).
std::unique_ptr<SynthesizedProtocol> synth_nbm(const Network& net, const CommGraph& target);

/// Robust-based variant: the guard fact is (v_s != 1 or s faulty), evaluated
/// by the knowledge oracle over the protocol's own run space. Resolved by
/// iterating simulate -> index -> re-derive guards until the guard table is
/// self-consistent (at most n*horizon passes).
std::unique_ptr<SynthesizedProtocol> synth_rbm(const Network& net, const CommGraph& target, int f);

/// Conservative ordered-response protocol: nbm behavior plus "perform a_h at
/// <i_h,t_h> iff the actor's state equals its nice state".
std::unique_ptr<SynthesizedProtocol> synth_or(const Network& net, const CommGraph& target,
                                              const ORInstance& inst);

/// Necessary blocks for solving ordered response on this nice graph: an
/// f-resilient block from <s,0> to every action node, and an (f-1)-resilient
/// block between consecutive action nodes avoiding the predecessor's nulls.
ConditionReport check_or_necessary(const Network& net, const CommGraph& cg, const ORInstance& inst,
                                   int f);

/// The conservative-protocol escape condition: whenever a crash of b on an
/// actual path into theta_x can silently suppress a_x while a B-cut hides
/// this from a later actor, some B-null-free path from <b, m_b+1> must warn
/// that actor.
ConditionReport check_or_conservative(const Network& net, const CommGraph& cg,
                                      const ORInstance& inst, int f);

/// Robust information transfer conditions: an actual s->d message in the
/// nice graph, or f+1 sender-disjoint paths (apart from s and d) to some
/// <d,m>, at least one free of nulls sent by s.
ConditionReport check_robust_conditions(const Network& net, const CommGraph& cg, int f);

struct VerifyOptions {
  bool confusion = true;       // validate the adversarial-run construction on failing blocks
  int lemma6_pair_cap = 600;   // full pairwise subgraph sweep up to this many runs
  std::optional<bool> robust_expected;  // set when the caller classified the target
  /// Override for mutation testing; defaults to check_ffailed_block.
  std::function<BlockReport(const CommGraph&, NodeRef, NodeRef, int, uint32_t)> block_check;
};

/// Runs every registered sweep over the protocol's full enumerated run space
/// and reports each violated instance with a witness.
ConditionReport verify_theorems(const Protocol& proto, const Network& net, int f, Time horizon,
                                const VerifyOptions& opts = {});

}  // namespace nullmsg
