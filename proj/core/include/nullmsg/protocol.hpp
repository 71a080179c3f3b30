#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nullmsg/model.hpp"

namespace nullmsg {

constexpr int kBit0 = 0;
constexpr int kBit1 = 1;

/// What one process does in one round: messages to out-neighbors plus local
/// action indices. Sends must target declared channels and are kept sorted by
/// recipient.
struct SendPlan {
  struct Item {
    ProcId to = 0;
    int token = 0;
  };
  std::vector<Item> sends;
  std::vector<int> actions;
};

struct StepContext {
  const Network& net;
  int f = 0;
  Time horizon = 0;
};

/// A deterministic protocol: the plan is a pure function of the local state.
/// At t == horizon the plan's sends are discarded (no further round), only
/// actions take effect.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string name() const = 0;
  virtual SendPlan step(const StepContext& ctx, ProcId self, const LocalStateView& state) const = 0;
  /// Ordered-response schedule, when this protocol carries one.
  virtual const ORInstance* instance() const { return nullptr; }
  /// True when every send/keep-silent choice is guarded by knowledge of
  /// "the run is not nice"; such protocols satisfy the nice-run information
  /// transfer sufficiency direction.
  virtual bool is_nice_based() const { return false; }
};

/// Builtins. p1/p2 are the two 3-process relay protocols on net1(); silent
/// never sends; flood relays a good/bad bit on every channel every round.
std::unique_ptr<Protocol> make_p1();
std::unique_ptr<Protocol> make_p2();
std::unique_ptr<Protocol> make_silent();
std::unique_ptr<Protocol> make_flood();

/// The 3-process network {s->p, s->d, p->d} used by p1/p2.
Network net1();

}  // namespace nullmsg
