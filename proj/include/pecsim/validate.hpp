#pragma once

#include "pecsim/scenario.hpp"
#include "pecsim/topology.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace pecsim {

struct ValidationReport {
  std::vector<std::string> errors;
  std::string summary;
  bool ok() const { return errors.empty(); }
};

// Schema and referential checks over a parsed scenario. Collects every error
// rather than stopping at the first; never throws.
inline ValidationReport validate_scenario(const ScenarioConfig& cfg)
{
  ValidationReport report;
  auto err = [&](const std::string& msg) { report.errors.push_back(msg); };

  std::map<std::string, const NodeConfig*> nodes;
  for (const auto& n : cfg.nodes) {
    if (!nodes.emplace(n.id, &n).second)
      err("duplicate node id '" + n.id + "'");
    if (!is_valid_component(n.id))
      err("node id '" + n.id + "' is not a valid name component");
    if (n.capacity < 0)
      err("node " + n.id + ": capacity must be >= 0");
  }

  std::set<ServiceId> services;
  for (const auto& s : cfg.services) {
    if (!services.insert(s.id).second)
      err("duplicate service id " + s.id.str());
    if (!names::svc_prefix().is_prefix_of(s.id))
      err("service " + s.id.str() + " must live under /pec/svc");
    const auto& comps = s.id.components();
    if (std::find(comps.begin(), comps.end(), names::kDataMarker) != comps.end())
      err("service " + s.id.str() + " may not contain the =data= marker");
    try {
      s.check();
    } catch (const std::exception& e) {
      err(e.what());
    }
    if (s.exec_base_us <= 0 && s.exec_ns_per_byte <= 0)
      err("service " + s.id.str() + ": execution model must be positive");
  }

  std::set<std::pair<std::string, std::string>> link_pairs;
  for (const auto& l : cfg.links) {
    if (!nodes.count(l.a))
      err("link references unknown node '" + l.a + "'");
    if (!nodes.count(l.b))
      err("link references unknown node '" + l.b + "'");
    if (l.a == l.b)
      err("link " + l.a + "-" + l.b + " is a self loop");
    if (l.latency_us <= 0)
      err("link " + l.a + "-" + l.b + ": latency must be > 0");
    if (l.bandwidth_bps <= 0)
      err("link " + l.a + "-" + l.b + ": bandwidth must be > 0");
    auto key = std::minmax(l.a, l.b);
    if (!link_pairs.insert({key.first, key.second}).second)
      err("duplicate link " + l.a + "-" + l.b);
  }

  std::map<DomainId, const DomainConfig*> domains;
  std::map<std::string, DomainId> member_of;
  for (const auto& d : cfg.domains) {
    if (!domains.emplace(d.id, &d).second)
      err("duplicate domain id '" + d.id + "'");
    if (!is_valid_component(d.id))
      err("domain id '" + d.id + "' is not a valid name component");
    if (!d.members.count(d.orchestrator))
      err("domain " + d.id + ": orchestrator '" + d.orchestrator + "' is not a member");
    for (const auto& m : d.members) {
      if (!nodes.count(m)) {
        err("domain " + d.id + ": unknown member '" + m + "'");
        continue;
      }
      auto [it, fresh] = member_of.emplace(m, d.id);
      if (!fresh)
        err("node '" + m + "' is a member of both " + it->second + " and " + d.id);
    }
  }
  for (const auto& d : cfg.domains) {
    for (const auto& [peer, coop] : d.peers) {
      auto it = domains.find(peer);
      if (it == domains.end()) {
        err("domain " + d.id + ": unknown peer domain '" + peer + "'");
        continue;
      }
      auto back = it->second->peers.find(d.id);
      bool back_coop = back != it->second->peers.end() && back->second;
      if (coop != back_coop)
        err("cooperation flag between " + d.id + " and " + peer + " is not symmetric");
    }
  }

  for (const auto& n : cfg.nodes) {
    if (n.domain && !domains.count(*n.domain))
      err("node " + n.id + ": unknown domain '" + *n.domain + "'");
    for (const auto& h : n.hosts)
      if (!services.count(h))
        err("node " + n.id + " hosts undefined service " + h.str());
    if (n.role == Role::User) {
      if (n.attach) {
        auto ap = nodes.find(*n.attach);
        if (ap == nodes.end())
          err("user " + n.id + ": unknown access point '" + *n.attach + "'");
        else if (ap->second->role != Role::AccessPoint)
          err("user " + n.id + ": attach target '" + *n.attach + "' is not an access point");
        else {
          auto key = std::minmax(n.id, *n.attach);
          if (!link_pairs.count({key.first, key.second}))
            err("user " + n.id + ": no link to access point '" + *n.attach + "'");
        }
      }
    }
    if (n.role == Role::AccessPoint && n.local_server) {
      auto s = nodes.find(*n.local_server);
      if (s == nodes.end())
        err("access point " + n.id + ": unknown local_server '" + *n.local_server + "'");
      else if (s->second->role != Role::EdgeServer)
        err("access point " + n.id + ": local_server must be an edge server");
    }
    if (n.role == Role::OrchestratorController) {
      bool is_orch = false;
      for (const auto& d : cfg.domains)
        if (d.orchestrator == n.id)
          is_orch = true;
      if (!is_orch)
        err("controller " + n.id + " orchestrates no domain");
    }
  }

  for (const auto& r : cfg.requests) {
    auto u = nodes.find(r.user);
    if (u == nodes.end()) {
      err("request references unknown user '" + r.user + "'");
      continue;
    }
    if (u->second->role != Role::User)
      err("request user '" + r.user + "' does not have the user role");
    if (r.at_us < 0)
      err("request by " + r.user + ": negative time");
    if (r.type == RequestType::Invoke) {
      if (!services.count(r.service))
        err("request by " + r.user + ": undefined service " + r.service.str());
      if (r.data_bytes <= 0)
        err("request by " + r.user + ": data_bytes must be > 0");
    }
  }

  // Mobility replay: strictly increasing times per user, from_ap must match
  // the attachment at that point, and the target link must exist.
  std::map<std::string, SimTime> last_move;
  std::map<std::string, std::string> current_ap;
  for (const auto& n : cfg.nodes)
    if (n.role == Role::User && n.attach)
      current_ap[n.id] = *n.attach;
  std::map<std::string, bool> onboarded;
  struct TimedEvent {
    SimTime at;
    int kind; // 0 = mobility, 1 = action
    std::size_t index;
  };
  std::vector<TimedEvent> timeline;
  for (std::size_t i = 0; i < cfg.mobility.size(); ++i)
    timeline.push_back({cfg.mobility[i].at_us, 0, i});
  for (std::size_t i = 0; i < cfg.actions.size(); ++i)
    timeline.push_back({cfg.actions[i].at_us, 1, i});
  std::stable_sort(timeline.begin(), timeline.end(),
                   [](const TimedEvent& a, const TimedEvent& b) { return a.at < b.at; });
  for (const auto& ev : timeline) {
    if (ev.kind == 0) {
      const auto& m = cfg.mobility[ev.index];
      if (!nodes.count(m.user) || nodes.at(m.user)->role != Role::User) {
        err("mobility references unknown user '" + m.user + "'");
        continue;
      }
      if (m.from_ap == m.to_ap)
        err("mobility for " + m.user + ": from and to access points are equal");
      auto lm = last_move.find(m.user);
      if (lm != last_move.end() && m.at_us <= lm->second)
        err("mobility for " + m.user + ": times must be strictly increasing");
      last_move[m.user] = m.at_us;
      auto cur = current_ap.find(m.user);
      if (cur == current_ap.end() || cur->second != m.from_ap)
        err("mobility for " + m.user + " at " + std::to_string(m.at_us) +
            "us: from '" + m.from_ap + "' does not match the current attachment '" +
            (cur == current_ap.end() ? std::string("<none>") : cur->second) + "'");
      auto key = std::minmax(m.user, m.to_ap);
      if (!link_pairs.count({key.first, key.second}))
        err("mobility for " + m.user + ": no link to '" + m.to_ap + "'");
      if (onboarded[m.user])
        err("mobility for " + m.user + ": user is onboarded at that time");
      current_ap[m.user] = m.to_ap;
    } else {
      const auto& a = cfg.actions[ev.index];
      if (a.type == ActionType::Onboard) {
        if (!nodes.count(a.device))
          err("onboard action references unknown device '" + a.device + "'");
        if (!nodes.count(a.ap))
          err("onboard action references unknown access point '" + a.ap + "'");
        onboarded[a.device] = true;
      } else if (a.type == ActionType::Offboard) {
        if (!nodes.count(a.device))
          err("offboard action references unknown device '" + a.device + "'");
        onboarded[a.device] = false;
      } else {
        if (!domains.count(a.domain))
          err("ondemand_deploy references unknown domain '" + a.domain + "'");
        if (!services.count(a.service))
          err("ondemand_deploy references undefined service " + a.service.str());
        if (!nodes.count(a.server))
          err("ondemand_deploy references unknown server '" + a.server + "'");
        else if (domains.count(a.domain) &&
                 !domains.at(a.domain)->members.count(a.server))
          err("ondemand_deploy: server '" + a.server + "' is not in domain " + a.domain);
      }
    }
  }

  if (cfg.deployment.mode == DeploymentMode::Orchestrated) {
    if (cfg.deployment.replicas < 1)
      err("deployment: replicas must be >= 1");
    bool has_cloud = false;
    for (const auto& n : cfg.nodes)
      if (n.role == Role::Cloud)
        has_cloud = true;
    if (!has_cloud)
      err("orchestrated deployment needs a cloud node as the image source");
  }

  // Graph-level checks ride on the builder.
  if (report.errors.empty()) {
    try {
      build_topology(cfg);
    } catch (const std::exception& e) {
      err(e.what());
    }
  }

  std::ostringstream s;
  s << "nodes: " << cfg.nodes.size() << "\nlinks: " << cfg.links.size()
    << "\ndomains: " << cfg.domains.size() << "\nservices: " << cfg.services.size()
    << "\nrequests: " << cfg.requests.size() << "\nmobility steps: " << cfg.mobility.size()
    << "\nactions: " << cfg.actions.size() << "\n";
  report.summary = s.str();
  return report;
}

} // namespace pecsim
