#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nullmsg {

/// Process ids are small dense indices into the network's process list.
/// Time steps are non-negative clock ticks bounded by the enclosing horizon.
using ProcId = int;
using Time = int;

constexpr Time kNever = 1 << 20;  // crash time of a correct process

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProtocolViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A process-time pair: the point at time `time` on `proc`'s timeline.
struct NodeRef {
  ProcId proc = 0;
  Time time = 0;
  auto operator<=>(const NodeRef&) const = default;
};

/// Directed communication network. Channel presence is kept as per-process
/// out-neighbor bitmasks; optional per-channel costs are in integer cents.
struct Network {
  int n = 0;
  std::vector<std::string> names;
  std::vector<uint32_t> out;  // out[i] bit j set iff channel i->j exists
  ProcId source = 0;          // the process whose initial value varies
  ProcId dest = 0;
  std::vector<std::vector<int64_t>> cost_cents;  // empty if no cost model; -1 = no channel

  bool has_channel(ProcId i, ProcId j) const {
    return i != j && i >= 0 && j >= 0 && i < n && j < n && (out[i] >> j & 1u);
  }
  int out_degree(ProcId i) const { return __builtin_popcount(out[i]); }
  const std::string& name(ProcId i) const { return names[i]; }
  ProcId index_of(const std::string& nm) const;
};

/// Builds a network from explicit channels; names default to p0..p{n-1} with
/// "s" and "d" recognized as source/destination when present.
Network make_network(int n, const std::vector<std::pair<int, int>>& channels,
                     std::vector<std::string> names = {});

/// One crash: `proc` fails at `time`; channels to `blocked` are suppressed in
/// its crash round and stay blocked afterwards.
struct FailureEvent {
  ProcId proc = 0;
  Time time = 0;
  uint32_t blocked = 0;  // bitmask of recipients
  auto operator<=>(const FailureEvent&) const = default;
};

/// A set of at most f crash events over distinct processes, kept sorted by
/// process index so equality is structural.
struct FailurePattern {
  std::vector<FailureEvent> events;

  bool empty() const { return events.empty(); }
  const FailureEvent* find(ProcId p) const;
  Time crash_time(ProcId p) const;  // kNever if p does not fail
  uint32_t failed_mask() const;
  void add(FailureEvent e);  // keeps events sorted; throws on duplicate proc
  auto operator<=>(const FailurePattern&) const = default;
};

/// True iff fp1 is at least as harsh as fp2: every process failing in fp2
/// fails in fp1 strictly earlier, or at the same time with at least the same
/// blocked set.
bool harsher(const FailurePattern& fp1, const FailurePattern& fp2);

/// Structural validity: at most f events, distinct processes, blocked sets
/// within the out-neighborhood, non-negative times.
bool validate_pattern(const FailurePattern& fp, const Network& net, int f);

/// One observed event in a local history. Within a round the canonical order
/// is: own sends (by recipient), own actions (by index), receives (by sender).
struct Event {
  enum class Kind : uint8_t { SentActual = 0, ActionDone = 1, Received = 2 };
  Kind kind = Kind::SentActual;
  int16_t peer = -1;   // recipient / sender; -1 for actions
  int16_t token = 0;   // message token, or action index
  int16_t at = 0;      // time of the event
  auto operator<=>(const Event&) const = default;
};

/// Read-only view of a local state handed to protocol step functions:
/// the initial value, the current time, and everything observed so far.
struct LocalStateView {
  int initial_value = 0;
  Time time = 0;
  const std::vector<Event>& events;

  std::optional<int> received_token(ProcId from, Time at) const;
  bool received_any(Time at) const;
};

/// An ordered-response instance: actors i_1..i_k with nice-run action times
/// t_1 <= ... <= t_k. Action h is performed by actor h at node <i_h, t_h>.
struct ORInstance {
  std::vector<ProcId> actors;
  std::vector<Time> times;

  int k() const { return static_cast<int>(actors.size()); }
  NodeRef theta(int h) const { return {actors[h], times[h]}; }        // 0-based
  NodeRef theta_plus(int h) const { return {actors[h], times[h] + 1}; }
  void validate(const Network& net, Time horizon) const;
};

}  // namespace nullmsg
