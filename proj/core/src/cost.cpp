#include "nullmsg/cost.hpp"

#include <algorithm>

namespace nullmsg {

int64_t CostModel::channel(ProcId i, ProcId j) const {
  if (i < 0 || j < 0 || i >= static_cast<int>(cents.size()) ||
      j >= static_cast<int>(cents[i].size()) || cents[i][j] < 0)
    throw InputError("no cost defined for channel " + std::to_string(i) + "->" + std::to_string(j));
  return cents[i][j];
}

CostModel CostModel::from_network(const Network& net) {
  if (net.cost_cents.empty()) throw InputError("network carries no cost model");
  return CostModel{net.cost_cents};
}

int64_t run_cost(const Run& r, const CostModel& cm) {
  int64_t total = 0;
  for (const Send& s : r.sends) total += cm.channel(s.from, s.to);
  return total;
}

int64_t mix_cost(const ScenarioMix& mix, int64_t nice_cost_cents, int64_t worst_cost_cents) {
  if (mix.nice_count < 0 || mix.bad_count < 0) throw InputError("negative scenario counts");
  return mix.nice_count * nice_cost_cents + mix.bad_count * worst_cost_cents;
}

int64_t cheapest_actual_chain(const Network& net) {
  CostModel cm = CostModel::from_network(net);
  constexpr int64_t inf = INT64_MAX / 4;
  std::vector<int64_t> dist(net.n, inf);
  dist[net.source] = 0;
  for (int round = 0; round < net.n; ++round)
    for (ProcId i = 0; i < net.n; ++i)
      for (ProcId j = 0; j < net.n; ++j)
        if (net.has_channel(i, j) && dist[i] < inf)
          dist[j] = std::min(dist[j], dist[i] + cm.channel(i, j));
  if (dist[net.dest] >= inf) throw InputError("destination unreachable over costed channels");
  return dist[net.dest];
}

std::string format_dollars(int64_t cents) {
  std::string sign = cents < 0 ? "-" : "";
  if (cents < 0) cents = -cents;
  std::string out = sign + "$" + std::to_string(cents / 100);
  if (cents % 100) {
    std::string frac = std::to_string(cents % 100);
    out += "." + std::string(2 - frac.size(), '0') + frac;
  }
  return out;
}

CostScenario ocean_scenario() {
  CostScenario sc;
  sc.net = make_network(
      5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, {"s", "p1", "p2", "p3", "d"});
  sc.net.cost_cents.assign(5, std::vector<int64_t>(5, -1));
  for (ProcId j : {1, 2, 3}) {
    sc.net.cost_cents[0][j] = 100;     // $1 to each relay
    sc.net.cost_cents[j][4] = 100000;  // $1000 across each relay->d link
  }
  sc.f = 2;
  sc.horizon = 2;
  sc.target = empty_graph(5, 2);
  sc.target.actual_from(0, 0) = (1u << 1) | (1u << 2);  // s -> p1, p2
  sc.target.nulls_from(0, 0) = 1u << 3;                 // s -> p3 stays silent
  for (ProcId j : {1, 2, 3}) sc.target.nulls_from(j, 1) = 1u << 4;
  return sc;
}

}  // namespace nullmsg
