#pragma once

#include "pecsim/name.hpp"
#include "pecsim/service.hpp"
#include "pecsim/time.hpp"
#include "pecsim/topology.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pecsim {

struct InvocationRequest {
  InvocationName invocation_name;
  std::string requester;
  std::int64_t data_bytes = 1;
  SimTime issued_at = 0;
};

enum class ExecState { Running, Done, Failed };

struct ThunkRecord {
  ThunkName thunk;
  InvocationRequest request;
  std::string server;
  SimTime estimate_us = 1;
  ExecState state = ExecState::Running;
  std::optional<std::int64_t> result_bytes;
};

// Capacity triage, IV-C-1 options a/b/c: execute locally, relay within the
// orchestrator domain, or fall back to the cloud.
struct TriageDecision {
  enum Kind { ExecuteHere, RelayIntraDomain, ToCloud } kind = ExecuteHere;
  std::string target; // relay target server
};

inline TriageDecision triage(const World& world, const std::string& server_id,
                             const ServiceId& service)
{
  const NodeState& server = world.node(server_id);
  if (server.role == Role::Cloud ||
      server.running_instances < server.compute_capacity)
    return {TriageDecision::ExecuteHere, ""};

  if (const DomainId* dom = world.domain_of(server_id)) {
    std::optional<std::pair<std::pair<int, std::string>, std::string>> best;
    for (const auto& peer : world.domain_servers(*dom)) {
      if (peer == server_id)
        continue;
      const NodeState& p = world.node(peer);
      if (!p.hosted_services.count(service) ||
          p.running_instances >= p.compute_capacity)
        continue;
      std::pair<int, std::string> key{p.running_instances, peer};
      if (!best || key < best->first)
        best = {{key, peer}};
    }
    if (best)
      return {TriageDecision::RelayIntraDomain, best->second};
  }
  return {TriageDecision::ToCloud, ""};
}

// Cross-domain delegation target: least-loaded server with the service and
// spare capacity across cooperative peer domains, ties by id.
inline std::optional<std::string> delegation_target(const World& world,
                                                    const DomainId& domain,
                                                    const ServiceId& service)
{
  const PecDomain& dom = world.domains.at(domain);
  std::optional<std::pair<std::pair<int, std::string>, std::string>> best;
  for (const auto& [peer_id, cooperative] : dom.peers) {
    if (!cooperative)
      continue;
    for (const auto& server : world.domain_servers(peer_id)) {
      const NodeState& p = world.node(server);
      if (!p.hosted_services.count(service) ||
          p.running_instances >= p.compute_capacity)
        continue;
      std::pair<int, std::string> key{p.running_instances, server};
      if (!best || key < best->first)
        best = {{key, server}};
    }
  }
  if (best)
    return best->second;
  return std::nullopt;
}

struct DelegationRecord {
  std::string designated_server;
  std::string destination_server;
  ThunkName user_thunk;
  ThunkName destination_thunk;
  DelegationMode mode = DelegationMode::Mapped;
  bool completed = false;
};

inline std::string delegation_record_jsonl(const DelegationRecord& r)
{
  std::string out = "{\"designated\":\"" + r.designated_server + "\",\"destination\":\"" +
                    r.destination_server + "\",\"user_thunk\":\"" +
                    r.user_thunk.render().str() + "\",\"destination_thunk\":\"" +
                    r.destination_thunk.render().str() + "\",\"mode\":\"" +
                    to_string(r.mode) + "\",\"completed\":";
  out += r.completed ? "true" : "false";
  out += "}";
  return out;
}

// Append-only delegation accounting. Records mutate only completed
// false -> true.
class Ledger {
public:
  std::size_t append(DelegationRecord record)
  {
    records_.push_back(std::move(record));
    return records_.size() - 1;
  }

  void mark_completed(std::size_t index)
  {
    records_.at(index).completed = true;
  }

  const std::vector<DelegationRecord>& records() const { return records_; }

  // All records whose designated/destination domains match the given pair,
  // in either orientation.
  std::vector<DelegationRecord> query(
      const DomainId& a, const DomainId& b,
      const std::function<std::optional<DomainId>(const std::string&)>& domain_of) const
  {
    std::vector<DelegationRecord> out;
    for (const auto& r : records_) {
      auto da = domain_of(r.designated_server);
      auto db = domain_of(r.destination_server);
      if (!da || !db)
        continue;
      if ((*da == a && *db == b) || (*da == b && *db == a))
        out.push_back(r);
    }
    return out;
  }

  void export_jsonl(std::ostream& os) const
  {
    for (const auto& r : records_)
      os << delegation_record_jsonl(r) << '\n';
  }

private:
  std::vector<DelegationRecord> records_;
};

// Name-equality compute reuse: at most one running execution per (service,
// data) key per server; finished results stay reusable for the freshness
// window.
class ReuseTable {
public:
  struct Entry {
    ExecState state = ExecState::Running;
    std::string state_id;     // the execution everyone shares
    SimTime fresh_until = 0;  // Done only
    std::int64_t result_bytes = 0;
  };

  enum class Outcome { Fresh, JoinRunning, CachedResult };

  struct CheckResult {
    Outcome outcome = Outcome::Fresh;
    const Entry* entry = nullptr;
  };

  CheckResult check(const ReuseKey& key, SimTime now) const
  {
    auto it = entries_.find(key);
    if (it == entries_.end())
      return {Outcome::Fresh, nullptr};
    const Entry& e = it->second;
    if (e.state == ExecState::Running)
      return {Outcome::JoinRunning, &e};
    if (e.state == ExecState::Done && now < e.fresh_until)
      return {Outcome::CachedResult, &e};
    return {Outcome::Fresh, nullptr};
  }

  void start(const ReuseKey& key, const std::string& state_id)
  {
    entries_[key] = Entry{ExecState::Running, state_id, 0, 0};
  }

  void finish(const ReuseKey& key, std::int64_t result_bytes, SimTime fresh_until)
  {
    auto it = entries_.find(key);
    if (it == entries_.end())
      return;
    it->second.state = ExecState::Done;
    it->second.result_bytes = result_bytes;
    it->second.fresh_until = fresh_until;
  }

  void fail(const ReuseKey& key) { entries_.erase(key); }

private:
  std::map<ReuseKey, Entry> entries_;
};

} // namespace pecsim
