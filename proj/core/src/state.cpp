#include "nullmsg/state.hpp"

namespace nullmsg {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_node(int parent, int32_t time, int32_t init, uint64_t parent_hash,
                   const std::vector<Event>& delta) {
  uint64_t h = 0xcbf29ce484222325ull;
  h = mix(h, static_cast<uint64_t>(parent) + 1);
  h = mix(h, parent_hash);
  h = mix(h, static_cast<uint64_t>(time));
  h = mix(h, static_cast<uint64_t>(init) + 7);
  for (const Event& e : delta) {
    uint64_t packed = (uint64_t(uint8_t(e.kind)) << 48) | (uint64_t(uint16_t(e.peer)) << 32) |
                      (uint64_t(uint16_t(e.token)) << 16) | uint64_t(uint16_t(e.at));
    h = mix(h, packed);
  }
  return h;
}

}  // namespace

int StateStore::intern(Node n) {
  auto& bucket = buckets_[n.hash];
  for (int id : bucket) {
    const Node& o = nodes_[id];
    if (o.parent == n.parent && o.time == n.time && o.init == n.init && o.delta == n.delta)
      return id;
  }
  int id = static_cast<int>(nodes_.size());
  bucket.push_back(id);
  nodes_.push_back(std::move(n));
  return id;
}

int StateStore::root(int initial_value) {
  Node n;
  n.parent = -1;
  n.time = 0;
  n.init = initial_value;
  n.hash = hash_node(-1, 0, initial_value, 0, n.delta);
  return intern(std::move(n));
}

int StateStore::extend(int parent, const std::vector<Event>& delta) {
  Node n;
  n.parent = parent;
  n.time = nodes_[parent].time + 1;
  n.init = nodes_[parent].init;
  n.hash = hash_node(parent, n.time, n.init, nodes_[parent].hash, delta);
  n.delta = delta;
  return intern(std::move(n));
}

std::vector<Event> StateStore::reconstruct(int id) const {
  std::vector<int> chain;
  for (int cur = id; cur >= 0; cur = nodes_[cur].parent) chain.push_back(cur);
  std::vector<Event> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    out.insert(out.end(), nodes_[*it].delta.begin(), nodes_[*it].delta.end());
  return out;
}

}  // namespace nullmsg
