#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nullmsg/model.hpp"

namespace nullmsg {

/// Interning store for local states. A state is (initial value, time, event
/// history); histories grow by one canonical per-round delta at a time, so
/// states form a tree and two states are structurally equal iff their interned
/// ids are equal. Equality of interned ids is the indistinguishability
/// relation used by the knowledge oracle.
class StateStore {
 public:
  int root(int initial_value);
  int extend(int parent, const std::vector<Event>& delta);

  Time time_of(int id) const { return nodes_[id].time; }
  int initial_of(int id) const { return nodes_[id].init; }
  /// Full event history, oldest first.
  std::vector<Event> reconstruct(int id) const;
  uint64_t content_hash(int id) const { return nodes_[id].hash; }
  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    int parent = -1;
    int32_t time = 0;
    int32_t init = 0;
    uint64_t hash = 0;
    std::vector<Event> delta;
  };
  std::vector<Node> nodes_;
  std::unordered_map<uint64_t, std::vector<int>> buckets_;

  int intern(Node n);
};

}  // namespace nullmsg
