#pragma once

#include "pecsim/errors.hpp"
#include "pecsim/forwarding.hpp"
#include "pecsim/name.hpp"
#include "pecsim/service.hpp"
#include "pecsim/time.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pecsim {

enum class Role { User, AccessPoint, Router, EdgeServer, OrchestratorController, Cloud };

inline const char* to_string(Role r)
{
  switch (r) {
    case Role::User: return "user";
    case Role::AccessPoint: return "access_point";
    case Role::Router: return "router";
    case Role::EdgeServer: return "edge_server";
    case Role::OrchestratorController: return "controller";
    case Role::Cloud: return "cloud";
  }
  return "?";
}

enum class DelegationMode { Direct, Mapped };

inline const char* to_string(DelegationMode m)
{
  return m == DelegationMode::Direct ? "direct" : "mapped";
}

struct PolicyConfig {
  SimTime sync_threshold_us = 50'000;
  SimTime pit_lifetime_us = 4'000'000;
  std::size_t cs_capacity = 64;
  SimTime reuse_freshness_us = 1'000'000;
  SimTime discovery_freshness_us = 1'000'000;
  int hop_limit = 32;
  std::int64_t interest_bytes = 100;
  std::int64_t discovery_bytes = 500;
  std::int64_t ack_bytes = 200;
  SimTime interest_timeout_us = 2'000'000;
  DelegationMode delegation_mode = DelegationMode::Mapped;
  bool delegation_enabled = true;
  bool fetch_on_miss = false;
  int thunk_ttl_multiplier = 10;
  std::vector<std::pair<Name, Strategy>> strategies;
};

struct ProducesConfig {
  Name prefix;
  std::int64_t bytes = 1;
  SimTime freshness_us = kForever;
};

struct NodeConfig {
  std::string id;
  Role role = Role::Router;
  std::optional<DomainId> domain;
  int capacity = 0;
  std::set<std::string> env;
  std::vector<Name> hosts;
  std::vector<ProducesConfig> produces;
  std::optional<std::string> attach;       // users: initial access point
  std::optional<std::string> local_server; // access points: migration destination
};

struct LinkConfig {
  std::string a;
  std::string b;
  SimTime latency_us = 1000;
  std::int64_t bandwidth_bps = 10'000'000;
};

struct DomainConfig {
  DomainId id;
  std::string orchestrator;
  std::set<std::string> members;
  std::map<DomainId, bool> peers; // peer domain -> cooperative
};

enum class RequestType { Invoke, Fetch, Discover };

struct RequestConfig {
  SimTime at_us = 0;
  std::string user;
  RequestType type = RequestType::Invoke;
  Name service;           // invoke
  Name data;              // invoke: input data name; fetch: the fetched name
  std::int64_t data_bytes = 1;
};

struct MobilityConfig {
  SimTime at_us = 0;
  std::string user;
  std::string from_ap;
  std::string to_ap;
};

enum class ActionType { Onboard, Offboard, OndemandDeploy };

struct ActionConfig {
  SimTime at_us = 0;
  ActionType type = ActionType::Onboard;
  std::string device; // onboard/offboard
  std::string ap;     // onboard
  DomainId domain;    // ondemand_deploy
  Name service;       // ondemand_deploy
  std::string server; // ondemand_deploy target
};

enum class DeploymentMode { Static, Orchestrated };

struct DeploymentConfig {
  DeploymentMode mode = DeploymentMode::Static;
  int replicas = 1;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 1;
  SimTime end_us = 0; // 0 = run until the event queue drains
  PolicyConfig policy;
  std::vector<NodeConfig> nodes;
  std::vector<LinkConfig> links;
  std::vector<DomainConfig> domains;
  std::vector<ServiceDescriptor> services;
  DeploymentConfig deployment;
  std::vector<RequestConfig> requests;
  std::vector<MobilityConfig> mobility;
  std::vector<ActionConfig> actions;
};

// ---------------------------------------------------------------------------
// JSON loading

namespace cfg_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& msg)
{
  throw SchemaError(msg);
}

inline const json& need(const json& j, const char* key, const std::string& where)
{
  auto it = j.find(key);
  if (it == j.end())
    fail(where + ": missing field '" + key + "'");
  return *it;
}

inline std::int64_t get_int(const json& j, const char* key, const std::string& where)
{
  const json& v = need(j, key, where);
  if (!v.is_number_integer())
    fail(where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline std::int64_t get_int_or(const json& j, const char* key, std::int64_t dflt)
{
  auto it = j.find(key);
  if (it == j.end())
    return dflt;
  if (!it->is_number_integer())
    fail("field '" + std::string(key) + "' must be an integer");
  return it->get<std::int64_t>();
}

inline std::string get_str(const json& j, const char* key, const std::string& where)
{
  const json& v = need(j, key, where);
  if (!v.is_string())
    fail(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

// Durations: "<base>_ms" or "<base>_us", microseconds win if both appear.
inline std::optional<SimTime> get_duration(const json& j, const std::string& base)
{
  auto us = j.find(base + "_us");
  if (us != j.end())
    return us->get<std::int64_t>();
  auto ms = j.find(base + "_ms");
  if (ms != j.end())
    return ms_to_us(ms->get<std::int64_t>());
  return std::nullopt;
}

inline SimTime get_duration_or(const json& j, const std::string& base, SimTime dflt)
{
  return get_duration(j, base).value_or(dflt);
}

inline Name get_name(const json& j, const char* key, const std::string& where)
{
  try {
    return Name::parse(get_str(j, key, where));
  } catch (const ParseError& e) {
    fail(where + ": " + e.what());
  }
}

inline Role parse_role(const std::string& s, const std::string& where)
{
  if (s == "user") return Role::User;
  if (s == "access_point") return Role::AccessPoint;
  if (s == "router") return Role::Router;
  if (s == "edge_server") return Role::EdgeServer;
  if (s == "controller") return Role::OrchestratorController;
  if (s == "cloud") return Role::Cloud;
  fail(where + ": unknown role '" + s + "'");
}

inline Strategy parse_strategy(const std::string& s)
{
  if (s == "best_route") return Strategy::BestRoute;
  if (s == "multicast") return Strategy::Multicast;
  if (s == "broadcast") return Strategy::Broadcast;
  fail("unknown strategy '" + s + "'");
}

} // namespace cfg_detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& j)
{
  using namespace cfg_detail;
  if (!j.is_object())
    fail("scenario: top level must be an object");

  ScenarioConfig cfg;
  cfg.name = j.value("name", "");
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.end_us = get_duration_or(j, "end", 0);

  if (auto p = j.find("policy"); p != j.end()) {
    PolicyConfig& pol = cfg.policy;
    pol.sync_threshold_us = get_duration_or(*p, "sync_threshold", pol.sync_threshold_us);
    pol.pit_lifetime_us = get_duration_or(*p, "pit_lifetime", pol.pit_lifetime_us);
    pol.cs_capacity = static_cast<std::size_t>(get_int_or(*p, "cs_capacity", 64));
    pol.reuse_freshness_us = get_duration_or(*p, "reuse_freshness", pol.reuse_freshness_us);
    pol.discovery_freshness_us =
        get_duration_or(*p, "discovery_freshness", pol.discovery_freshness_us);
    pol.hop_limit = static_cast<int>(get_int_or(*p, "hop_limit", pol.hop_limit));
    pol.interest_bytes = get_int_or(*p, "interest_bytes", pol.interest_bytes);
    pol.discovery_bytes = get_int_or(*p, "discovery_bytes", pol.discovery_bytes);
    pol.ack_bytes = get_int_or(*p, "ack_bytes", pol.ack_bytes);
    pol.interest_timeout_us =
        get_duration_or(*p, "interest_timeout", pol.interest_timeout_us);
    pol.thunk_ttl_multiplier =
        static_cast<int>(get_int_or(*p, "thunk_ttl_multiplier", pol.thunk_ttl_multiplier));
    if (p->contains("delegation_mode")) {
      std::string m = get_str(*p, "delegation_mode", "policy");
      if (m == "direct")
        pol.delegation_mode = DelegationMode::Direct;
      else if (m == "mapped")
        pol.delegation_mode = DelegationMode::Mapped;
      else
        fail("policy: delegation_mode must be 'direct' or 'mapped'");
    }
    pol.delegation_enabled = p->value("delegation_enabled", pol.delegation_enabled);
    pol.fetch_on_miss = p->value("fetch_on_miss", pol.fetch_on_miss);
    if (auto s = p->find("strategies"); s != p->end()) {
      for (const auto& e : *s)
        pol.strategies.emplace_back(get_name(e, "prefix", "policy.strategies"),
                                    parse_strategy(get_str(e, "strategy", "policy.strategies")));
    }
  }

  for (const auto& n : j.value("nodes", nlohmann::json::array())) {
    NodeConfig node;
    node.id = get_str(n, "id", "node");
    const std::string where = "node " + node.id;
    node.role = parse_role(get_str(n, "role", where), where);
    if (n.contains("domain"))
      node.domain = get_str(n, "domain", where);
    node.capacity = static_cast<int>(get_int_or(n, "capacity", 0));
    for (const auto& e : n.value("env", nlohmann::json::array()))
      node.env.insert(e.get<std::string>());
    for (const auto& h : n.value("hosts", nlohmann::json::array())) {
      try {
        node.hosts.push_back(Name::parse(h.get<std::string>()));
      } catch (const ParseError& e) {
        fail(where + ": " + e.what());
      }
    }
    for (const auto& p : n.value("produces", nlohmann::json::array())) {
      ProducesConfig pc;
      pc.prefix = get_name(p, "prefix", where + ".produces");
      pc.bytes = get_int_or(p, "bytes", 1);
      pc.freshness_us = get_duration_or(p, "freshness", kForever);
      node.produces.push_back(std::move(pc));
    }
    if (n.contains("attach"))
      node.attach = get_str(n, "attach", where);
    if (n.contains("local_server"))
      node.local_server = get_str(n, "local_server", where);
    cfg.nodes.push_back(std::move(node));
  }

  for (const auto& l : j.value("links", nlohmann::json::array())) {
    LinkConfig link;
    link.a = get_str(l, "a", "link");
    link.b = get_str(l, "b", "link");
    const std::string where = "link " + link.a + "-" + link.b;
    auto lat = get_duration(l, "latency");
    if (!lat)
      fail(where + ": missing latency_ms/latency_us");
    link.latency_us = *lat;
    if (l.contains("bandwidth_mbps"))
      link.bandwidth_bps = get_int(l, "bandwidth_mbps", where) * 1'000'000;
    else
      link.bandwidth_bps = get_int(l, "bandwidth_bps", where);
    cfg.links.push_back(std::move(link));
  }

  for (const auto& d : j.value("domains", nlohmann::json::array())) {
    DomainConfig dom;
    dom.id = get_str(d, "id", "domain");
    const std::string where = "domain " + dom.id;
    dom.orchestrator = get_str(d, "orchestrator", where);
    for (const auto& m : need(d, "members", where))
      dom.members.insert(m.get<std::string>());
    for (const auto& p : d.value("peers", nlohmann::json::array()))
      dom.peers[get_str(p, "domain", where + ".peers")] = p.value("cooperative", false);
    cfg.domains.push_back(std::move(dom));
  }

  for (const auto& s : j.value("services", nlohmann::json::array())) {
    ServiceDescriptor svc;
    svc.id = cfg_detail::get_name(s, "id", "service");
    const std::string where = "service " + svc.id.str();
    auto exec = get_duration(s, "exec");
    if (!exec)
      fail(where + ": missing exec_ms/exec_us");
    svc.exec_base_us = *exec;
    svc.exec_ns_per_byte = get_int_or(s, "exec_ns_per_byte", 0);
    svc.result_bytes = get_int(s, "result_bytes", where);
    svc.instance_state_bytes = get_int(s, "instance_state_bytes", where);
    svc.container_bytes = get_int(s, "container_bytes", where);
    svc.vm_image_bytes = get_int(s, "vm_image_bytes", where);
    svc.requires_env = s.value("requires_env", "");
    cfg.services.push_back(std::move(svc));
  }

  if (auto d = j.find("deployment"); d != j.end()) {
    std::string mode = d->value("mode", "static");
    if (mode == "static")
      cfg.deployment.mode = DeploymentMode::Static;
    else if (mode == "orchestrated")
      cfg.deployment.mode = DeploymentMode::Orchestrated;
    else
      fail("deployment: mode must be 'static' or 'orchestrated'");
    cfg.deployment.replicas = static_cast<int>(get_int_or(*d, "replicas", 1));
  }

  for (const auto& r : j.value("requests", nlohmann::json::array())) {
    RequestConfig req;
    auto at = get_duration(r, "at");
    if (!at)
      fail("request: missing at_ms/at_us");
    req.at_us = *at;
    req.user = get_str(r, "user", "request");
    const std::string where = "request by " + req.user;
    std::string type = r.value("type", "invoke");
    if (type == "invoke") {
      req.type = RequestType::Invoke;
      req.service = get_name(r, "service", where);
      req.data = get_name(r, "data", where);
      req.data_bytes = get_int_or(r, "data_bytes", 1);
    } else if (type == "fetch") {
      req.type = RequestType::Fetch;
      req.data = get_name(r, "name", where);
    } else if (type == "discover") {
      req.type = RequestType::Discover;
    } else {
      fail(where + ": unknown request type '" + type + "'");
    }
    cfg.requests.push_back(std::move(req));
  }

  for (const auto& m : j.value("mobility", nlohmann::json::array())) {
    MobilityConfig mob;
    auto at = get_duration(m, "at");
    if (!at)
      fail("mobility: missing at_ms/at_us");
    mob.at_us = *at;
    mob.user = get_str(m, "user", "mobility");
    mob.from_ap = get_str(m, "from", "mobility");
    mob.to_ap = get_str(m, "to", "mobility");
    cfg.mobility.push_back(std::move(mob));
  }

  for (const auto& a : j.value("actions", nlohmann::json::array())) {
    ActionConfig act;
    auto at = get_duration(a, "at");
    if (!at)
      fail("action: missing at_ms/at_us");
    act.at_us = *at;
    std::string type = get_str(a, "type", "action");
    if (type == "onboard") {
      act.type = ActionType::Onboard;
      act.device = get_str(a, "device", "action onboard");
      act.ap = get_str(a, "ap", "action onboard");
    } else if (type == "offboard") {
      act.type = ActionType::Offboard;
      act.device = get_str(a, "device", "action offboard");
    } else if (type == "ondemand_deploy") {
      act.type = ActionType::OndemandDeploy;
      act.domain = get_str(a, "domain", "action ondemand_deploy");
      act.service = get_name(a, "service", "action ondemand_deploy");
      act.server = get_str(a, "server", "action ondemand_deploy");
    } else {
      fail("action: unknown type '" + type + "'");
    }
    cfg.actions.push_back(std::move(act));
  }

  return cfg;
}

inline ScenarioConfig scenario_from_text(const std::string& text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid scenario: ") + e.what());
  }
}

} // namespace pecsim
