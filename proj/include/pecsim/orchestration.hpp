#pragma once

#include "pecsim/errors.hpp"
#include "pecsim/service.hpp"
#include "pecsim/topology.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pecsim {

// Demand per (service, domain) read off the scenario request schedule; the
// window is the whole run.
inline PopularityStats popularity_from_schedule(const ScenarioConfig& cfg)
{
  std::map<std::string, DomainId> user_domain;
  std::map<std::string, std::string> user_ap;
  std::map<std::string, std::optional<DomainId>> ap_domain;
  for (const auto& n : cfg.nodes) {
    if (n.role == Role::AccessPoint)
      ap_domain[n.id] = n.domain;
    if (n.role == Role::User && n.attach)
      user_ap[n.id] = *n.attach;
  }
  PopularityStats stats;
  for (const auto& r : cfg.requests) {
    if (r.type != RequestType::Invoke)
      continue;
    auto ap = user_ap.find(r.user);
    if (ap == user_ap.end())
      continue;
    auto dom = ap_domain.find(ap->second);
    if (dom == ap_domain.end() || !dom->second)
      continue;
    stats.counts[{r.service, *dom->second}] += 1;
  }
  return stats;
}

// Pre-deployment placement: for each service take the k candidate servers
// ranked by their domain's demand (descending), ties by server id.
inline DeploymentPlan orchestrated_deploy(const PopularityStats& stats, int k,
                                          const World& world)
{
  if (k < 1)
    throw SchemaError("orchestrated deployment: replica target must be >= 1");

  DeploymentPlan plan;
  for (const auto& [sid, svc] : world.services) {
    std::vector<std::pair<std::int64_t, std::string>> candidates; // (-demand, server)
    for (const auto& [did, dom] : world.domains) {
      std::int64_t demand = stats.demand(sid, did);
      for (const auto& server : world.domain_servers(did)) {
        if (world.node(server).compute_capacity >= 1)
          candidates.emplace_back(-demand, server);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    if (static_cast<int>(candidates.size()) < k)
      throw SchemaError("InsufficientCapacity: service " + sid.str() + " needs " +
                        std::to_string(k) + " servers, only " +
                        std::to_string(candidates.size()) + " feasible");
    auto& placed = plan.placements[sid];
    for (int i = 0; i < k; ++i)
      placed.insert(candidates[i].second);
  }
  return plan;
}

// Env rule of the descriptor: a server with the service's environment takes
// the container; anything else takes the full VM image.
inline std::int64_t deploy_transfer_bytes(const ServiceDescriptor& svc,
                                          const NodeState& target)
{
  bool env_ok = svc.requires_env.empty() || target.env_tags.count(svc.requires_env);
  return env_ok ? svc.container_bytes : svc.vm_image_bytes;
}

inline int hop_distance(const World& world, const std::string& from,
                        const std::string& to)
{
  if (from == to)
    return 0;
  std::map<std::string, int> dist{{from, 0}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& [f, info] : world.node(cur).faces) {
      if (dist.count(info.peer))
        continue;
      dist[info.peer] = dist[cur] + 1;
      if (info.peer == to)
        return dist[info.peer];
      queue.push_back(info.peer);
    }
  }
  return -1;
}

// Image source for an on-demand fetch: the nearest server of a cooperative
// peer domain holding the service (ties by id), falling back to the cloud.
inline std::optional<std::string> ondemand_source(const World& world,
                                                  const DomainId& domain,
                                                  const ServiceId& service,
                                                  const std::string& target_server)
{
  const PecDomain& dom = world.domains.at(domain);
  std::optional<std::pair<std::pair<int, std::string>, std::string>> best;
  for (const auto& [peer_id, cooperative] : dom.peers) {
    if (!cooperative)
      continue;
    for (const auto& server : world.domain_servers(peer_id)) {
      if (!world.node(server).hosted_services.count(service))
        continue;
      int d = hop_distance(world, server, target_server);
      if (d < 0)
        continue;
      std::pair<int, std::string> key{d, server};
      if (!best || key < best->first)
        best = {{key, server}};
    }
  }
  if (best)
    return best->second;
  return world.cloud_node();
}

// Catalog payload: newline-separated canonical service names, sorted, so a
// cached copy is byte-identical to a controller-served one.
inline std::string catalog_payload(const std::set<ServiceId>& services)
{
  std::string out;
  for (const auto& s : services) {
    out += s.str();
    out += '\n';
  }
  return out;
}

inline std::vector<Name> parse_catalog(const std::string& payload)
{
  std::vector<Name> out;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    std::size_t nl = payload.find('\n', pos);
    if (nl == std::string::npos)
      nl = payload.size();
    if (nl > pos)
      out.push_back(Name::parse(payload.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  return out;
}

// Services invocable in a domain right now: hosted by any member server.
inline std::set<ServiceId> domain_catalog(const World& world, const DomainId& domain)
{
  std::set<ServiceId> out;
  for (const auto& server : world.domain_servers(domain))
    for (const auto& svc : world.node(server).hosted_services)
      out.insert(svc);
  return out;
}

} // namespace pecsim
