#pragma once

#include "pecsim/name.hpp"
#include "pecsim/packet.hpp"
#include "pecsim/time.hpp"
#include "pecsim/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace pecsim {

// Exact-match content store with LRU replacement. Recency is a monotone use
// counter rather than the clock, so simultaneous operations still have a
// strict eviction order.
class ContentStore {
public:
  struct Entry {
    Data data;
    SimTime insert_time = 0;
    SimTime last_use_time = 0;
    std::uint64_t use_seq = 0;
  };

  explicit ContentStore(std::size_t capacity = 64) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }

  void set_capacity(std::size_t c) { capacity_ = c; }

  // Fresh exact-match lookup; touches the entry on hit.
  const Data* lookup(const Name& name, SimTime now)
  {
    auto it = entries_.find(name);
    if (it == entries_.end())
      return nullptr;
    if (now >= it->second.insert_time + it->second.data.freshness_us)
      return nullptr; // stale entries linger until evicted but never serve
    it->second.last_use_time = now;
    it->second.use_seq = ++seq_;
    return &it->second.data;
  }

  // Returns the evicted name, if the insert displaced one.
  std::optional<Name> insert(const Data& d, SimTime now)
  {
    if (capacity_ == 0 || d.freshness_us <= 0)
      return std::nullopt;
    auto it = entries_.find(d.name);
    if (it != entries_.end()) {
      it->second = Entry{d, now, now, ++seq_};
      return std::nullopt;
    }
    std::optional<Name> evicted;
    if (entries_.size() >= capacity_) {
      auto lru = entries_.begin();
      for (auto e = entries_.begin(); e != entries_.end(); ++e) {
        if (e->second.use_seq < lru->second.use_seq)
          lru = e;
      }
      evicted = lru->first;
      entries_.erase(lru);
    }
    entries_.emplace(d.name, Entry{d, now, now, ++seq_});
    return evicted;
  }

  bool contains(const Name& name) const { return entries_.count(name) > 0; }

  std::vector<Name> names_by_recency() const
  {
    std::vector<std::pair<std::uint64_t, Name>> order;
    for (const auto& [name, e] : entries_)
      order.emplace_back(e.use_seq, name);
    std::sort(order.begin(), order.end());
    std::vector<Name> out;
    for (auto& [seq, name] : order)
      out.push_back(std::move(name));
    return out;
  }

private:
  std::size_t capacity_;
  std::map<Name, Entry> entries_;
  std::uint64_t seq_ = 0;
};

struct PitEntry {
  Name name;
  std::set<FaceId> in_faces;
  std::set<std::uint64_t> nonces;
  SimTime expiry = 0;
};

class Pit {
public:
  PitEntry* find(const Name& name)
  {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  PitEntry& create(const Name& name, FaceId in_face, std::uint64_t nonce, SimTime expiry)
  {
    PitEntry e{name, {in_face}, {nonce}, expiry};
    return entries_.insert_or_assign(name, std::move(e)).first->second;
  }

  void erase(const Name& name) { entries_.erase(name); }

  std::vector<Name> expire_upto(SimTime now)
  {
    std::vector<Name> erased;
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (it->second.expiry <= now) {
        erased.push_back(it->first);
        it = entries_.erase(it);
      } else {
        ++it;
      }
    }
    return erased;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<Name, PitEntry>& entries() const { return entries_; }

private:
  std::map<Name, PitEntry> entries_;
};

struct NextHop {
  FaceId face = 0;
  int cost = 0;
  auto operator<=>(const NextHop&) const = default;
};

struct FibEntry {
  Name prefix;
  std::vector<NextHop> next_hops; // sorted by face id, unique faces
};

class Fib {
public:
  void add_route(const Name& prefix, FaceId face, int cost)
  {
    auto& entry = entries_[prefix];
    entry.prefix = prefix;
    for (auto& hop : entry.next_hops) {
      if (hop.face == face) {
        hop.cost = cost;
        return;
      }
    }
    entry.next_hops.push_back({face, cost});
    std::sort(entry.next_hops.begin(), entry.next_hops.end(),
              [](const NextHop& a, const NextHop& b) { return a.face < b.face; });
  }

  void remove_route(const Name& prefix, FaceId face)
  {
    auto it = entries_.find(prefix);
    if (it == entries_.end())
      return;
    auto& hops = it->second.next_hops;
    std::erase_if(hops, [&](const NextHop& h) { return h.face == face; });
    if (hops.empty())
      entries_.erase(it);
  }

  void clear() { entries_.clear(); }

  // Longest-prefix match over whole components.
  const FibEntry* lpm(const Name& name) const
  {
    for (std::size_t len = name.size() + 1; len-- > 0;) {
      auto it = entries_.find(name.prefix(len));
      if (it != entries_.end())
        return &it->second;
    }
    return nullptr;
  }

  const std::map<Name, FibEntry>& entries() const { return entries_; }

  // (prefix, face, cost) triples; onboarding tests compare these sets.
  std::set<std::tuple<std::string, FaceId, int>> route_set() const
  {
    std::set<std::tuple<std::string, FaceId, int>> out;
    for (const auto& [prefix, entry] : entries_)
      for (const auto& hop : entry.next_hops)
        out.insert({prefix.str(), hop.face, hop.cost});
    return out;
  }

private:
  std::map<Name, FibEntry> entries_;
};

inline const FibEntry* fib_lpm(const Fib& fib, const Name& name)
{
  return fib.lpm(name);
}

enum class Strategy { BestRoute, Multicast, Broadcast };

inline const char* to_string(Strategy s)
{
  switch (s) {
    case Strategy::BestRoute: return "best_route";
    case Strategy::Multicast: return "multicast";
    case Strategy::Broadcast: return "broadcast";
  }
  return "?";
}

class StrategyTable {
public:
  void set(const Name& prefix, Strategy s) { by_prefix_[prefix] = s; }

  Strategy effective(const Name& name) const
  {
    for (std::size_t len = name.size() + 1; len-- > 0;) {
      auto it = by_prefix_.find(name.prefix(len));
      if (it != by_prefix_.end())
        return it->second;
    }
    return Strategy::BestRoute;
  }

private:
  std::map<Name, Strategy> by_prefix_;
};

// BestRoute: single lowest-cost hop, ties by lowest face id. Multicast: all
// entry next-hops except `exclude`. Broadcast: all node link faces except
// `exclude`.
inline std::vector<FaceId> strategy_forward(const FibEntry& entry, Strategy strategy,
                                            FaceId exclude,
                                            std::span<const FaceId> all_faces = {})
{
  std::vector<FaceId> out;
  switch (strategy) {
    case Strategy::BestRoute: {
      const NextHop* best = nullptr;
      for (const auto& hop : entry.next_hops) {
        if (!best || std::tie(hop.cost, hop.face) < std::tie(best->cost, best->face))
          best = &hop;
      }
      if (best)
        out.push_back(best->face);
      break;
    }
    case Strategy::Multicast:
      for (const auto& hop : entry.next_hops)
        if (hop.face != exclude)
          out.push_back(hop.face);
      break;
    case Strategy::Broadcast:
      for (FaceId f : all_faces)
        if (f != exclude)
          out.push_back(f);
      break;
  }
  return out;
}

// Per-node data plane state plus the policy knobs the pipeline needs.
struct ForwarderState {
  ContentStore cs;
  Pit pit;
  Fib fib;
  StrategyTable strategies;
  std::vector<FaceId> link_faces;
  SimTime pit_lifetime_us = 4'000'000;
  std::int64_t nack_bytes = 100;
};

// Fig.-2 pipeline, steps 1-3: CS lookup, PIT lookup (loop drop or
// aggregation), then PIT creation + FIB longest-prefix match + strategy
// forwarding. Every decision emits one trace record.
inline std::vector<Send> on_interest(ForwarderState& fw, const std::string& node,
                                     FaceId in_face, const Interest& interest,
                                     SimTime now, Tracer& tracer)
{
  std::vector<Send> actions;
  const std::string name_text = interest.name.str();

  if (const Data* cached = fw.cs.lookup(interest.name, now)) {
    tracer.emit({now, node, "cs_hit", name_text, {in_face}, cached->payload_bytes, ""});
    actions.push_back({in_face, *cached});
    return actions;
  }
  tracer.emit({now, node, "cs_miss", name_text, {in_face}, 0, ""});

  if (PitEntry* entry = fw.pit.find(interest.name)) {
    if (entry->nonces.count(interest.nonce)) {
      tracer.emit({now, node, "pit_loop_drop", name_text, {in_face}, 0,
                   "nonce=" + std::to_string(interest.nonce)});
      return actions;
    }
    entry->in_faces.insert(in_face);
    entry->nonces.insert(interest.nonce);
    tracer.emit({now, node, "pit_aggregate", name_text, {in_face}, 0, ""});
    return actions;
  }

  const FibEntry* route = fw.fib.lpm(interest.name);
  if (!route) {
    tracer.emit({now, node, "fib_nack", name_text, {in_face}, 0, "no_route"});
    actions.push_back({in_face, Nack{interest.name, interest.nonce,
                                     NackReason::NoRoute, fw.nack_bytes}});
    return actions;
  }

  fw.pit.create(interest.name, in_face, interest.nonce, now + fw.pit_lifetime_us);
  tracer.emit({now, node, "pit_create", name_text, {in_face}, 0, ""});

  Strategy strategy = fw.strategies.effective(interest.name);
  std::vector<FaceId> out_faces =
      strategy_forward(*route, strategy, in_face, fw.link_faces);
  if (out_faces.empty()) {
    tracer.emit({now, node, "drop", name_text, {in_face}, 0, "no_out_face"});
    return actions;
  }

  Interest forwarded = interest;
  forwarded.hop_limit = interest.hop_limit - 1;
  tracer.emit({now, node, "fwd_interest", name_text, out_faces, forwarded.size_bytes,
               std::string("strategy=") + to_string(strategy)});
  for (FaceId f : out_faces)
    actions.push_back({f, forwarded});
  return actions;
}

// Fig.-2 steps 4-6: PIT exact match, copy to every recorded downstream face,
// erase the entry, cache the data.
inline std::vector<Send> on_data(ForwarderState& fw, const std::string& node,
                                 FaceId in_face, const Data& data, SimTime now,
                                 Tracer& tracer)
{
  std::vector<Send> actions;
  const std::string name_text = data.name.str();

  PitEntry* entry = fw.pit.find(data.name);
  if (!entry) {
    tracer.emit({now, node, "drop", name_text, {in_face}, data.payload_bytes, "unsolicited"});
    return actions;
  }

  std::vector<FaceId> down(entry->in_faces.begin(), entry->in_faces.end());
  fw.pit.erase(data.name);

  if (auto evicted = fw.cs.insert(data, now))
    tracer.emit({now, node, "cs_evict", evicted->str(), {}, 0, "lru"});
  if (fw.cs.contains(data.name))
    tracer.emit({now, node, "cs_insert", name_text, {}, data.payload_bytes, ""});

  tracer.emit({now, node, "data_return", name_text, down, data.payload_bytes, ""});
  for (FaceId f : down)
    actions.push_back({f, data});
  return actions;
}

// Nacks consume the PIT entry and propagate to every downstream face, so
// consumers learn about missing routes and can fall back (e.g. to the cloud).
inline std::vector<Send> on_nack(ForwarderState& fw, const std::string& node,
                                 FaceId in_face, const Nack& nack, SimTime now,
                                 Tracer& tracer)
{
  std::vector<Send> actions;
  PitEntry* entry = fw.pit.find(nack.name);
  if (!entry) {
    tracer.emit({now, node, "drop", nack.name.str(), {in_face}, 0, "unsolicited_nack"});
    return actions;
  }
  std::vector<FaceId> down(entry->in_faces.begin(), entry->in_faces.end());
  fw.pit.erase(nack.name);
  tracer.emit({now, node, "nack_return", nack.name.str(), down, nack.size_bytes,
               to_string(nack.reason)});
  for (FaceId f : down)
    actions.push_back({f, nack});
  return actions;
}

// Erases every PIT entry with expiry <= now (boundary inclusive).
inline std::vector<Name> expire_pit(ForwarderState& fw, const std::string& node,
                                    SimTime now, Tracer& tracer)
{
  std::vector<Name> erased = fw.pit.expire_upto(now);
  for (const Name& n : erased)
    tracer.emit({now, node, "pit_expire", n.str(), {}, 0, ""});
  return erased;
}

} // namespace pecsim
