#pragma once

#include "nullmsg/commgraph.hpp"
#include "nullmsg/simulator.hpp"

namespace nullmsg {

/// The fact vocabulary the analyses quantify over. Facts are evaluated at a
/// (run, time) pair against a run index.
struct Fact {
  enum class Kind {
    ValueIs,                  // the source's initial value is `value`
    ChainReached,             // an enhanced chain from `from` to `to` exists
    NotNice,                  // the run is not the failure-free value-1 run
    ActionDone,               // ordered-response action `action` performed
    SourceFaulty,             // the source has crashed by the query time
    ValueNot1OrSourceFaulty,  // guard fact of robust message protocols
  };
  Kind kind = Kind::ValueIs;
  int value = 1;
  NodeRef from, to;
  int action = 0;

  static Fact value_is(int b) { return {Kind::ValueIs, b, {}, {}, 0}; }
  static Fact chain(NodeRef a, NodeRef b) { return {Kind::ChainReached, 0, a, b, 0}; }
  static Fact not_nice() { return {Kind::NotNice, 0, {}, {}, 0}; }
  static Fact action_done(int h) { return {Kind::ActionDone, 0, {}, {}, h}; }
  static Fact source_faulty() { return {Kind::SourceFaulty, 0, {}, {}, 0}; }
  static Fact value_not1_or_source_faulty() { return {Kind::ValueNot1OrSourceFaulty, 0, {}, {}, 0}; }
  std::string describe(const Network& net) const;
};

bool eval_fact(const RunIndex& idx, const Fact& fact, const Run& r, Time m);

struct KnowResult {
  bool holds = false;
  int counterexample = -1;  // an indistinguishable run where the fact fails
  bool subject_crashed = false;

  explicit operator bool() const { return holds; }
};

/// Def.-2 knowledge: the fact holds at every indexed run the subject cannot
/// distinguish from r at time m. Queries on a subject already crashed before
/// m run against the frozen state and come back flagged.
KnowResult knows(const RunIndex& idx, ProcId subject, const Fact& fact, const Run& r, Time m);

/// State-comparison shortcut for K_p(not nice): p's state differs from its
/// nice-run state. Coincides with the oracle everywhere.
bool knows_not_nice_fast(const RunIndex& idx, const Run& r, ProcId p, Time t);

/// Information transfer: the destination knows the source's value.
bool it_achieved(const RunIndex& idx, const Run& r, Time m);

}  // namespace nullmsg
