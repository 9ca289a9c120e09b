#pragma once

#include "pecsim/errors.hpp"
#include "pecsim/forwarding.hpp"
#include "pecsim/name.hpp"
#include "pecsim/scenario.hpp"
#include "pecsim/service.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pecsim {

using LinkId = std::int32_t;

struct Link {
  LinkId id = 0;
  std::string a;
  std::string b;
  SimTime latency_us = 1000;
  std::int64_t bandwidth_bps = 10'000'000;
  // FIFO serialization horizon per direction.
  SimTime busy_until_ab = 0;
  SimTime busy_until_ba = 0;
};

struct FaceInfo {
  LinkId link = -1;
  std::string peer;
  FaceId peer_face = -1;
};

struct NodeState {
  std::string id;
  Role role = Role::Router;
  std::optional<DomainId> domain;
  std::map<FaceId, FaceInfo> faces;
  ForwarderState fwd;
  int compute_capacity = 0;
  int running_instances = 0;
  std::set<ServiceId> hosted_services;
  std::set<std::string> env_tags;
  bool onboarded = false;
  std::vector<ProducesConfig> produces;
  std::optional<std::string> attached_ap;  // users
  std::optional<std::string> local_server; // access points
  FaceId next_face = kAppFace + 1;
  // Face pair added by onboarding, removed symmetrically by offboarding.
  std::optional<std::pair<FaceId, FaceId>> onboard_faces;

  bool is_compute() const
  {
    return role == Role::EdgeServer || role == Role::Cloud ||
           (role == Role::User && onboarded);
  }
};

struct PecDomain {
  DomainId id;
  std::string orchestrator;
  std::set<std::string> members;
  std::map<DomainId, bool> peers;

  bool cooperative_with(const DomainId& other) const
  {
    auto it = peers.find(other);
    return it != peers.end() && it->second;
  }
};

class World {
public:
  std::map<std::string, NodeState> nodes;
  std::vector<Link> links;
  std::map<DomainId, PecDomain> domains;
  std::map<ServiceId, ServiceDescriptor> services;

  NodeState& node(const std::string& id)
  {
    auto it = nodes.find(id);
    if (it == nodes.end())
      throw SchemaError("unknown node '" + id + "'");
    return it->second;
  }

  const NodeState& node(const std::string& id) const
  {
    return const_cast<World*>(this)->node(id);
  }

  Link* link_between(const std::string& a, const std::string& b)
  {
    for (auto& l : links)
      if ((l.a == a && l.b == b) || (l.a == b && l.b == a))
        return &l;
    return nullptr;
  }

  std::pair<FaceId, FaceId> add_face_pair(const std::string& a, const std::string& b,
                                          LinkId link)
  {
    NodeState& na = node(a);
    NodeState& nb = node(b);
    FaceId fa = na.next_face++;
    FaceId fb = nb.next_face++;
    na.faces[fa] = {link, b, fb};
    nb.faces[fb] = {link, a, fa};
    na.fwd.link_faces.push_back(fa);
    nb.fwd.link_faces.push_back(fb);
    return {fa, fb};
  }

  void remove_face(const std::string& id, FaceId f)
  {
    NodeState& n = node(id);
    n.faces.erase(f);
    std::erase(n.fwd.link_faces, f);
  }

  // Removes every face pair between the two nodes (attachment teardown).
  void remove_faces_between(const std::string& a, const std::string& b)
  {
    NodeState& na = node(a);
    std::vector<std::pair<FaceId, FaceId>> pairs;
    for (const auto& [f, info] : na.faces)
      if (info.peer == b)
        pairs.emplace_back(f, info.peer_face);
    for (auto [fa, fb] : pairs) {
      remove_face(a, fa);
      remove_face(b, fb);
    }
  }

  const DomainId* domain_of(const std::string& node_id) const
  {
    const NodeState& n = node(node_id);
    if (n.domain)
      return &*n.domain;
    if (n.role == Role::User && n.attached_ap) {
      const NodeState& ap = node(*n.attached_ap);
      if (ap.domain)
        return &*ap.domain;
    }
    return nullptr;
  }

  // Domain routing scope: members plus users currently attached to member
  // access points.
  std::set<std::string> domain_scope(const DomainId& d) const
  {
    std::set<std::string> scope = domains.at(d).members;
    for (const auto& [id, n] : nodes)
      if (n.role == Role::User && n.attached_ap && scope.count(*n.attached_ap))
        scope.insert(id);
    return scope;
  }

  std::vector<std::string> domain_servers(const DomainId& d) const
  {
    std::vector<std::string> out;
    for (const auto& member : domains.at(d).members) {
      const NodeState& n = node(member);
      if (n.is_compute() && n.role != Role::Cloud)
        out.push_back(member);
    }
    return out;
  }

  std::optional<std::string> cloud_node() const
  {
    for (const auto& [id, n] : nodes)
      if (n.role == Role::Cloud)
        return id;
    return std::nullopt;
  }

  // ---- route computation -------------------------------------------------

  struct AdGroup {
    Name prefix;
    std::optional<DomainId> scope; // nullopt = global
    std::set<std::string> advertisers;
    bool operator<(const AdGroup& o) const
    {
      return std::tie(prefix, scope) < std::tie(o.prefix, o.scope);
    }
  };

  std::vector<AdGroup> collect_advertisements() const
  {
    std::map<std::pair<Name, std::optional<DomainId>>, std::set<std::string>> groups;
    auto add = [&](const Name& p, const std::optional<DomainId>& scope,
                   const std::string& n) { groups[{p, scope}].insert(n); };

    for (const auto& [id, n] : nodes) {
      for (const auto& p : n.produces)
        add(p.prefix, std::nullopt, id);
      if (n.is_compute()) {
        add(names::thunk_prefix().appended(id), std::nullopt, id);
        add(names::imn_prefix().appended(id), std::nullopt, id);
        add(names::node_prefix().appended(id), std::nullopt, id);
        if (n.role != Role::Cloud) {
          for (const auto& svc : n.hosted_services)
            add(svc, n.domain, id);
        }
      }
    }
    for (const auto& [did, dom] : domains) {
      add(names::join_prefix().appended(did), did, dom.orchestrator);
      add(names::discover_prefix().appended(did), did, dom.orchestrator);
      add(names::ctl_prefix().appended(did), did, dom.orchestrator);
    }

    std::vector<AdGroup> out;
    for (auto& [key, advs] : groups)
      out.push_back({key.first, key.second, std::move(advs)});
    return out;
  }

  // Shortest-path FIBs (link cost 1) from every node toward every advertised
  // prefix. Global prefixes route everywhere; domain prefixes route within
  // the domain scope. `strict` turns unreachable scope nodes into errors.
  void recompute_routes(bool strict = false)
  {
    for (auto& [id, n] : nodes)
      n.fwd.fib.clear();

    for (const AdGroup& group : collect_advertisements()) {
      std::optional<std::set<std::string>> scope;
      if (group.scope)
        scope = domain_scope(*group.scope);
      auto in_scope = [&](const std::string& id) {
        return !scope || scope->count(id) > 0;
      };

      std::map<std::string, int> dist;
      std::deque<std::string> queue;
      for (const auto& adv : group.advertisers) {
        if (!in_scope(adv))
          continue;
        dist[adv] = 0;
        queue.push_back(adv);
      }
      while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        for (const auto& [f, info] : node(cur).faces) {
          if (!in_scope(info.peer) || dist.count(info.peer))
            continue;
          dist[info.peer] = dist[cur] + 1;
          queue.push_back(info.peer);
        }
      }

      for (auto& [id, n] : nodes) {
        if (!in_scope(id))
          continue;
        auto d = dist.find(id);
        if (d == dist.end()) {
          if (strict)
            throw SchemaError("DisconnectedAdvertiser: node '" + id +
                              "' cannot reach prefix " + group.prefix.str());
          continue;
        }
        if (d->second == 0) {
          n.fwd.fib.add_route(group.prefix, kAppFace, 0);
          continue;
        }
        for (const auto& [f, info] : n.faces) {
          auto pd = dist.find(info.peer);
          if (pd != dist.end() && pd->second == d->second - 1)
            n.fwd.fib.add_route(group.prefix, f, d->second);
        }
      }
    }
  }

  std::map<std::string, std::set<std::tuple<std::string, FaceId, int>>> route_set() const
  {
    std::map<std::string, std::set<std::tuple<std::string, FaceId, int>>> out;
    for (const auto& [id, n] : nodes)
      out[id] = n.fwd.fib.route_set();
    return out;
  }

  // ---- structural mutations (protocol layers drive these) -----------------

  void attach_user(const std::string& user, const std::string& ap)
  {
    Link* l = link_between(user, ap);
    if (!l)
      throw SchemaError("no link between " + user + " and " + ap);
    add_face_pair(user, ap, l->id);
    node(user).attached_ap = ap;
  }

  void handover_user(const std::string& user, const std::string& from_ap,
                     const std::string& to_ap)
  {
    remove_faces_between(user, from_ap);
    attach_user(user, to_ap);
    recompute_routes();
  }

  void apply_onboard(const std::string& device, const std::string& ap)
  {
    NodeState& dev = node(device);
    NodeState& apn = node(ap);
    if (dev.onboarded)
      throw SchemaError("AlreadyOnboarded: " + device);
    if (!apn.domain)
      throw SchemaError("UnknownDomain: access point " + ap + " has no domain");
    if (dev.domain && *dev.domain != *apn.domain)
      throw SchemaError("UnknownDomain: " + device + " targets domain " + *dev.domain +
                        " but " + ap + " is in " + *apn.domain);
    Link* l = link_between(device, ap);
    if (!l)
      throw SchemaError("no link between " + device + " and " + ap);
    auto pair = add_face_pair(device, ap, l->id);
    dev.onboard_faces = pair;
    dev.onboarded = true;
    dev.domain = *apn.domain;
    domains.at(*apn.domain).members.insert(device);
    recompute_routes();
  }

  void apply_offboard(const std::string& device)
  {
    NodeState& dev = node(device);
    if (!dev.onboarded)
      throw SchemaError("NotOnboarded: " + device);
    if (dev.onboard_faces && dev.attached_ap) {
      auto [df, af] = *dev.onboard_faces;
      remove_face(device, df);
      remove_face(*dev.attached_ap, af);
    }
    dev.onboard_faces.reset();
    dev.onboarded = false;
    if (dev.domain) {
      domains.at(*dev.domain).members.erase(device);
      if (dev.role == Role::User)
        dev.domain.reset();
    }
    recompute_routes();
  }

  void host_service(const std::string& server, const ServiceId& svc)
  {
    node(server).hosted_services.insert(svc);
    recompute_routes();
  }
};

// Instantiates nodes, links, and domains from config, attaches users, and
// computes initial FIBs. Graph-level errors throw SchemaError.
inline World build_topology(const ScenarioConfig& cfg)
{
  World w;
  for (const auto& nc : cfg.nodes) {
    if (w.nodes.count(nc.id))
      throw SchemaError("DuplicateNodeId: " + nc.id);
    if (!is_valid_component(nc.id))
      throw SchemaError("node id '" + nc.id + "' is not a valid name component");
    NodeState n;
    n.id = nc.id;
    n.role = nc.role;
    n.domain = nc.domain;
    n.compute_capacity = nc.capacity;
    n.env_tags = nc.env;
    n.produces = nc.produces;
    n.local_server = nc.local_server;
    for (const auto& h : nc.hosts)
      n.hosted_services.insert(h);
    n.fwd.cs.set_capacity(cfg.policy.cs_capacity);
    n.fwd.pit_lifetime_us = cfg.policy.pit_lifetime_us;
    n.fwd.nack_bytes = cfg.policy.interest_bytes;
    for (const auto& [prefix, strat] : cfg.policy.strategies)
      n.fwd.strategies.set(prefix, strat);
    w.nodes.emplace(nc.id, std::move(n));
  }

  for (const auto& lc : cfg.links) {
    Link l;
    l.id = static_cast<LinkId>(w.links.size());
    l.a = lc.a;
    l.b = lc.b;
    l.latency_us = lc.latency_us;
    l.bandwidth_bps = lc.bandwidth_bps;
    if (!w.nodes.count(l.a) || !w.nodes.count(l.b))
      throw SchemaError("link references unknown node " + l.a + "-" + l.b);
    if (l.latency_us <= 0 || l.bandwidth_bps <= 0)
      throw SchemaError("link " + l.a + "-" + l.b + ": latency and bandwidth must be > 0");
    w.links.push_back(l);
  }

  for (const auto& dc : cfg.domains) {
    PecDomain d{dc.id, dc.orchestrator, dc.members, dc.peers};
    if (!d.members.count(d.orchestrator))
      throw SchemaError("domain " + d.id + ": orchestrator must be a member");
    w.domains.emplace(dc.id, std::move(d));
  }

  for (const auto& svc : cfg.services) {
    svc.check();
    w.services.emplace(svc.id, svc);
  }

  // Cloud hosts every declared service but advertises none of them; requests
  // reach it only via explicit relay names.
  for (auto& [id, n] : w.nodes) {
    if (n.role == Role::Cloud) {
      for (const auto& [sid, svc] : w.services) {
        n.hosted_services.insert(sid);
        if (!svc.requires_env.empty())
          n.env_tags.insert(svc.requires_env);
      }
    }
  }

  // Faces: every non-attachment link comes up immediately; users attach to
  // their configured access point only.
  for (const auto& l : w.links) {
    const NodeState& na = w.node(l.a);
    const NodeState& nb = w.node(l.b);
    bool attachment = (na.role == Role::User && nb.role == Role::AccessPoint) ||
                      (nb.role == Role::User && na.role == Role::AccessPoint);
    if (!attachment)
      w.add_face_pair(l.a, l.b, l.id);
  }
  for (const auto& nc : cfg.nodes) {
    if (nc.role == Role::User) {
      if (nc.attach) {
        w.attach_user(nc.id, *nc.attach);
      } else {
        for (const auto& l : w.links)
          if (l.a == nc.id || l.b == nc.id)
            throw SchemaError("user " + nc.id + " has links but no 'attach'");
      }
    }
  }

  w.recompute_routes(/*strict=*/true);
  return w;
}

} // namespace pecsim
