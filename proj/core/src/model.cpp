#include "nullmsg/model.hpp"

#include <algorithm>

namespace nullmsg {

ProcId Network::index_of(const std::string& nm) const {
  for (int i = 0; i < n; ++i)
    if (names[i] == nm) return i;
  throw InputError("unknown process name: " + nm);
}

Network make_network(int n, const std::vector<std::pair<int, int>>& channels,
                     std::vector<std::string> names) {
  if (n <= 0 || n > 31) throw InputError("process count out of range");
  Network net;
  net.n = n;
  net.out.assign(n, 0);
  if (names.empty()) {
    for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  }
  if (static_cast<int>(names.size()) != n) throw InputError("names/process count mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (names[i] == names[j]) throw InputError("duplicate process name: " + names[i]);
  net.names = std::move(names);
  for (auto [from, to] : channels) {
    if (from == to) throw InputError("self-channel not allowed");
    if (from < 0 || from >= n || to < 0 || to >= n) throw InputError("channel endpoint out of range");
    net.out[from] |= 1u << to;
  }
  net.source = 0;
  net.dest = n - 1;
  for (int i = 0; i < n; ++i) {
    if (net.names[i] == "s") net.source = i;
    if (net.names[i] == "d") net.dest = i;
  }
  return net;
}

const FailureEvent* FailurePattern::find(ProcId p) const {
  for (const auto& e : events)
    if (e.proc == p) return &e;
  return nullptr;
}

Time FailurePattern::crash_time(ProcId p) const {
  const FailureEvent* e = find(p);
  return e ? e->time : kNever;
}

uint32_t FailurePattern::failed_mask() const {
  uint32_t m = 0;
  for (const auto& e : events) m |= 1u << e.proc;
  return m;
}

void FailurePattern::add(FailureEvent e) {
  if (find(e.proc)) throw InputError("duplicate process in failure pattern");
  events.push_back(e);
  std::sort(events.begin(), events.end(),
            [](const FailureEvent& a, const FailureEvent& b) { return a.proc < b.proc; });
}

bool harsher(const FailurePattern& fp1, const FailurePattern& fp2) {
  for (const auto& e2 : fp2.events) {
    const FailureEvent* e1 = fp1.find(e2.proc);
    if (!e1) return false;
    if (e1->time < e2.time) continue;
    if (e1->time == e2.time && (e2.blocked & ~e1->blocked) == 0) continue;
    return false;
  }
  return true;
}

bool validate_pattern(const FailurePattern& fp, const Network& net, int f) {
  if (static_cast<int>(fp.events.size()) > f) return false;
  uint32_t seen = 0;
  for (const auto& e : fp.events) {
    if (e.proc < 0 || e.proc >= net.n) return false;
    if (seen & (1u << e.proc)) return false;
    seen |= 1u << e.proc;
    if (e.time < 0) return false;
    if (e.blocked & ~net.out[e.proc]) return false;  // blocked set must be out-neighbors
  }
  return true;
}

std::optional<int> LocalStateView::received_token(ProcId from, Time at) const {
  for (const Event& e : events)
    if (e.kind == Event::Kind::Received && e.peer == from && e.at == at) return e.token;
  return std::nullopt;
}

bool LocalStateView::received_any(Time at) const {
  for (const Event& e : events)
    if (e.kind == Event::Kind::Received && e.at == at) return true;
  return false;
}

void ORInstance::validate(const Network& net, Time horizon) const {
  if (actors.empty() || actors.size() != times.size())
    throw InputError("ordered-response instance needs k >= 1 actors with matching times");
  for (size_t h = 0; h < actors.size(); ++h) {
    if (actors[h] < 0 || actors[h] >= net.n) throw InputError("instance actor out of range");
    if (times[h] < 0 || times[h] > horizon) throw InputError("instance time outside horizon");
    if (h > 0 && times[h] < times[h - 1]) throw InputError("instance times must be non-decreasing");
  }
}

}  // namespace nullmsg
