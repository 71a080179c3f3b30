#pragma once

#include <string>

#include "nullmsg/commgraph.hpp"
#include "nullmsg/simulator.hpp"

namespace nullmsg {

/// Per-channel message costs in integer cents; exact arithmetic throughout.
struct CostModel {
  std::vector<std::vector<int64_t>> cents;  // [from][to], -1 when undefined

  int64_t channel(ProcId i, ProcId j) const;
  static CostModel from_network(const Network& net);
};

/// Total cost of a run: the sum of channel costs over its actual sends.
/// Null messages and clock ticks are free.
int64_t run_cost(const Run& r, const CostModel& cm);

/// Expected-cost accounting over a mix of nice and worst-case runs.
struct ScenarioMix {
  int64_t nice_count = 0;
  int64_t bad_count = 0;
};

int64_t mix_cost(const ScenarioMix& mix, int64_t nice_cost_cents, int64_t worst_cost_cents);

/// Cheapest all-actual s->d chain cost under the network's cost model.
int64_t cheapest_actual_chain(const Network& net);

std::string format_dollars(int64_t cents);

/// Builtin cost scenario: a five-process network where the three relays are
/// cheap to reach ($1) and expensive to hear from across the d-links ($1000),
/// with the two-actual-sends target pattern that stays resilient at f=2.
struct CostScenario {
  Network net;
  CommGraph target;
  int f = 2;
  Time horizon = 2;
};

CostScenario ocean_scenario();

}  // namespace nullmsg
