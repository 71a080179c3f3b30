#include "nullmsg/protocol.hpp"

namespace nullmsg {

Network net1() { return make_network(3, {{0, 1}, {0, 2}, {1, 2}}, {"s", "p", "d"}); }

namespace {

// s reports its value to p in round 1; p stays silent toward d iff it was
// told the value is 1. When with_sd_alarm is set (p2), s additionally sends
// d a message at time 0 iff its value is not 1.
class RelayProtocol final : public Protocol {
 public:
  RelayProtocol(std::string name, bool with_sd_alarm)
      : name_(std::move(name)), with_sd_alarm_(with_sd_alarm) {}

  std::string name() const override { return name_; }
  bool is_nice_based() const override { return true; }

  SendPlan step(const StepContext& ctx, ProcId self, const LocalStateView& st) const override {
    const ProcId s = ctx.net.index_of("s");
    const ProcId p = ctx.net.index_of("p");
    const ProcId d = ctx.net.index_of("d");
    SendPlan plan;
    if (self == s && st.time == 0) {
      plan.sends.push_back({p, st.initial_value == 1 ? kBit1 : kBit0});
      if (with_sd_alarm_ && st.initial_value != 1) plan.sends.push_back({d, kBit0});
    }
    if (self == p && st.time == 1) {
      if (st.received_token(s, 1) != kBit1) plan.sends.push_back({d, kBit0});
    }
    return plan;
  }

 private:
  std::string name_;
  bool with_sd_alarm_;
};

class SilentProtocol final : public Protocol {
 public:
  std::string name() const override { return "silent"; }
  bool is_nice_based() const override { return true; }
  SendPlan step(const StepContext&, ProcId, const LocalStateView&) const override { return {}; }
};

// Every process sends a bit on every out-channel every round. The bit drops
// to 0 once the sender has seen anything off-script: own value != 1 at the
// source, a received 0, or a missing message from an in-neighbor.
class FloodProtocol final : public Protocol {
 public:
  std::string name() const override { return "flood"; }
  bool is_nice_based() const override { return true; }

  SendPlan step(const StepContext& ctx, ProcId self, const LocalStateView& st) const override {
    bool bad = (self == ctx.net.source && st.initial_value != 1);
    for (Time t = 1; t <= st.time && !bad; ++t) {
      for (ProcId j = 0; j < ctx.net.n && !bad; ++j) {
        if (!ctx.net.has_channel(j, self)) continue;
        auto tok = st.received_token(j, t);
        if (!tok || *tok == kBit0) bad = true;
      }
    }
    SendPlan plan;
    for (ProcId j = 0; j < ctx.net.n; ++j)
      if (ctx.net.has_channel(self, j)) plan.sends.push_back({j, bad ? kBit0 : kBit1});
    return plan;
  }
};

}  // namespace

std::unique_ptr<Protocol> make_p1() { return std::make_unique<RelayProtocol>("p1", false); }
std::unique_ptr<Protocol> make_p2() { return std::make_unique<RelayProtocol>("p2", true); }
std::unique_ptr<Protocol> make_silent() { return std::make_unique<SilentProtocol>(); }
std::unique_ptr<Protocol> make_flood() { return std::make_unique<FloodProtocol>(); }

}  // namespace nullmsg
