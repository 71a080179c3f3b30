#include "nullmsg/knowledge.hpp"

namespace nullmsg {

std::string Fact::describe(const Network& net) const {
  switch (kind) {
    case Kind::ValueIs:
      return "v_" + net.name(net.source) + "=" + std::to_string(value);
    case Kind::ChainReached:
      return net.name(from.proc) + "@" + std::to_string(from.time) + "~>" + net.name(to.proc) +
             "@" + std::to_string(to.time);
    case Kind::NotNice:
      return "not-nice";
    case Kind::ActionDone:
      return "action-done:" + std::to_string(action);
    case Kind::SourceFaulty:
      return "source-faulty";
    case Kind::ValueNot1OrSourceFaulty:
      return "v!=1-or-source-faulty";
  }
  return "?";
}

bool eval_fact(const RunIndex& idx, const Fact& fact, const Run& r, Time m) {
  switch (fact.kind) {
    case Fact::Kind::ValueIs:
      return r.vs == fact.value;
    case Fact::Kind::ChainReached: {
      if (fact.to.time > m) return false;
      CommGraph cg = build_cg(idx, r);
      return has_chain(cg, fact.from, fact.to);
    }
    case Fact::Kind::NotNice:
      return !(r.vs == 1 && r.pattern.empty());
    case Fact::Kind::ActionDone:
      for (const ActionRec& a : r.actions)
        if (a.index == fact.action && a.time <= m) return true;
      return false;
    case Fact::Kind::SourceFaulty:
      return r.crash_time(idx.sim->net().source) <= m;
    case Fact::Kind::ValueNot1OrSourceFaulty:
      return r.vs != 1 || r.crash_time(idx.sim->net().source) <= m;
  }
  return false;
}

KnowResult knows(const RunIndex& idx, ProcId subject, const Fact& fact, const Run& r, Time m) {
  if (m < 0 || m > r.horizon) throw InputError("query time outside horizon");
  KnowResult res;
  res.subject_crashed = r.crash_time(subject) < m;
  const std::vector<int>* bucket = idx.bucket(subject, m, r.state[subject][m]);
  if (!bucket) throw InputError("queried state does not occur in the run index");
  for (int id : *bucket) {
    if (!eval_fact(idx, fact, idx.runs[id], m)) {
      res.holds = false;
      res.counterexample = id;
      return res;
    }
  }
  res.holds = true;
  return res;
}

bool knows_not_nice_fast(const RunIndex& idx, const Run& r, ProcId p, Time t) {
  return r.state[p][t] != idx.nice_run().state[p][t];
}

bool it_achieved(const RunIndex& idx, const Run& r, Time m) {
  return knows(idx, idx.sim->net().dest, Fact::value_is(0), r, m).holds ||
         knows(idx, idx.sim->net().dest, Fact::value_is(1), r, m).holds;
}

}  // namespace nullmsg
