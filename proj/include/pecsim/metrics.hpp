#pragma once

#include "pecsim/name.hpp"
#include "pecsim/trace.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pecsim {

// "k=v k=v" tokens inside a trace note.
inline std::optional<std::string> note_value(const std::string& note,
                                             const std::string& key)
{
  std::size_t pos = 0;
  while (pos < note.size()) {
    std::size_t end = note.find(' ', pos);
    if (end == std::string::npos)
      end = note.size();
    std::string_view token(note.data() + pos, end - pos);
    auto eq = token.find('=');
    if (eq != std::string_view::npos && token.substr(0, eq) == key)
      return std::string(token.substr(eq + 1));
    pos = end + 1;
  }
  return std::nullopt;
}

inline constexpr std::array<const char*, 4> kMigrationLevelNames{
    "result", "instance", "container", "full_vm"};

inline int migration_level_index(const std::string& level)
{
  for (int i = 0; i < 4; ++i)
    if (level == kMigrationLevelNames[i])
      return i;
  return -1;
}

// Everything here is recomputable from the trace alone; the live run and a
// later fold of the trace file must agree exactly.
struct Metrics {
  std::int64_t requests_issued = 0;
  std::int64_t results_delivered = 0;
  std::int64_t requests_failed = 0;
  std::int64_t invoke_requests = 0;
  std::int64_t invoke_results = 0;

  std::int64_t latency_count = 0;
  std::int64_t latency_total_us = 0;
  std::int64_t latency_min_us = 0;
  std::int64_t latency_max_us = 0;

  std::int64_t cs_hits = 0;
  std::int64_t cs_misses = 0;
  std::int64_t cs_evictions = 0;
  std::int64_t interests_suppressed = 0;
  std::int64_t pit_expired = 0;

  std::int64_t executions_started = 0;
  std::int64_t reuse_joins = 0;
  std::int64_t reuse_cached = 0;

  std::array<std::int64_t, 4> migration_count{};
  std::array<std::int64_t, 4> migration_bytes{};
  std::array<std::int64_t, 4> interruption_total_us{};

  std::int64_t control_plane_bytes = 0;
  std::int64_t link_sends = 0;
  std::int64_t link_delivers = 0;
  std::int64_t drops = 0;

  std::map<std::string, std::int64_t> delegations;           // "d1->d2" -> count
  std::map<std::string, std::int64_t> delegations_completed; // same key

  bool operator==(const Metrics&) const = default;

  std::int64_t reuse_savings() const { return invoke_results - executions_started; }
  std::int64_t in_flight_at_end() const { return link_sends - link_delivers; }

  std::string cs_hit_ratio_text() const
  {
    std::int64_t total = cs_hits + cs_misses;
    std::int64_t micro = total == 0 ? 0 : cs_hits * 1'000'000 / total;
    std::string frac = std::to_string(micro % 1'000'000);
    frac.insert(0, 6 - frac.size(), '0');
    return std::to_string(micro / 1'000'000) + "." + frac;
  }

  void write_csv(std::ostream& os) const
  {
    os << "pec-sim-metrics,v1\n";
    os << "key,value\n";
    auto row = [&](const char* key, std::int64_t v) { os << key << ',' << v << '\n'; };
    row("requests_issued", requests_issued);
    row("results_delivered", results_delivered);
    row("requests_failed", requests_failed);
    row("invoke_requests", invoke_requests);
    row("invoke_results", invoke_results);
    row("latency_count", latency_count);
    row("latency_total_us", latency_total_us);
    row("latency_min_us", latency_min_us);
    row("latency_max_us", latency_max_us);
    row("cs_hits", cs_hits);
    row("cs_misses", cs_misses);
    os << "cs_hit_ratio," << cs_hit_ratio_text() << '\n';
    row("cs_evictions", cs_evictions);
    row("interests_suppressed", interests_suppressed);
    row("pit_expired", pit_expired);
    row("executions_started", executions_started);
    row("reuse_joins", reuse_joins);
    row("reuse_cached", reuse_cached);
    row("reuse_savings", reuse_savings());
    for (int i = 0; i < 4; ++i) {
      std::string base = std::string("migrations_") + kMigrationLevelNames[i];
      os << base << "_count," << migration_count[i] << '\n';
      os << base << "_bytes," << migration_bytes[i] << '\n';
      os << base << "_interruption_us," << interruption_total_us[i] << '\n';
    }
    row("control_plane_bytes", control_plane_bytes);
    row("link_sends", link_sends);
    row("link_delivers", link_delivers);
    row("in_flight_at_end", in_flight_at_end());
    row("drops", drops);
    for (const auto& [pair, count] : delegations)
      os << "delegations_" << pair << ',' << count << '\n';
    for (const auto& [pair, count] : delegations_completed)
      os << "delegations_completed_" << pair << ',' << count << '\n';
  }
};

// Streaming fold over trace records. The simulator feeds it live; `fold`
// replays a written trace through the same code path.
class MetricsAccumulator {
public:
  void add(const TraceRecord& r)
  {
    if (r.ev == "request_issued") {
      m_.requests_issued++;
      issued_.emplace(r.name, r.t);
      if (note_value(r.note, "type") == "invoke")
        m_.invoke_requests++;
    } else if (r.ev == "request_result") {
      m_.results_delivered++;
      auto kind = note_value(r.note, "kind");
      if (kind && *kind != "fetch" && *kind != "discover")
        m_.invoke_results++;
      auto it = issued_.find(r.name);
      if (it != issued_.end()) {
        std::int64_t lat = r.t - it->second;
        m_.latency_count++;
        m_.latency_total_us += lat;
        if (m_.latency_count == 1 || lat < m_.latency_min_us)
          m_.latency_min_us = lat;
        if (lat > m_.latency_max_us)
          m_.latency_max_us = lat;
        issued_.erase(it);
      }
    } else if (r.ev == "request_failed") {
      m_.requests_failed++;
      issued_.erase(r.name);
    } else if (r.ev == "cs_hit") {
      m_.cs_hits++;
    } else if (r.ev == "cs_miss") {
      m_.cs_misses++;
    } else if (r.ev == "cs_evict") {
      m_.cs_evictions++;
    } else if (r.ev == "pit_aggregate") {
      m_.interests_suppressed++;
    } else if (r.ev == "pit_expire") {
      m_.pit_expired++;
    } else if (r.ev == "exec_start") {
      m_.executions_started++;
    } else if (r.ev == "reuse_join") {
      m_.reuse_joins++;
    } else if (r.ev == "reuse_cached") {
      m_.reuse_cached++;
    } else if (r.ev == "link_send") {
      m_.link_sends++;
    } else if (r.ev == "link_deliver") {
      m_.link_delivers++;
      Name n = Name::parse(r.name);
      if (names::join_prefix().is_prefix_of(n) || names::ctl_prefix().is_prefix_of(n) ||
          names::discover_prefix().is_prefix_of(n))
        m_.control_plane_bytes += r.bytes;
    } else if (r.ev == "drop") {
      m_.drops++;
    } else if (r.ev == "migration_begin") {
      auto level = note_value(r.note, "level");
      int idx = level ? migration_level_index(*level) : -1;
      if (idx >= 0) {
        m_.migration_count[idx]++;
        m_.migration_bytes[idx] += r.bytes;
        migration_level_.emplace(r.name, idx);
      }
    } else if (r.ev == "reconnect_poll") {
      reconnect_at_.emplace(r.name, r.t);
    } else if (r.ev == "migrated_result") {
      auto t0 = reconnect_at_.find(r.name);
      auto lvl = migration_level_.find(r.name);
      if (t0 != reconnect_at_.end() && lvl != migration_level_.end())
        m_.interruption_total_us[lvl->second] += r.t - t0->second;
    } else if (r.ev == "delegation_new") {
      auto a = note_value(r.note, "ddom");
      auto b = note_value(r.note, "xdom");
      if (a && b)
        m_.delegations[*a + "->" + *b]++;
    } else if (r.ev == "delegation_completed") {
      auto a = note_value(r.note, "ddom");
      auto b = note_value(r.note, "xdom");
      if (a && b)
        m_.delegations_completed[*a + "->" + *b]++;
    }
  }

  const Metrics& current() const { return m_; }

private:
  Metrics m_;
  std::map<std::string, SimTime> issued_;
  std::map<std::string, SimTime> reconnect_at_;
  std::map<std::string, int> migration_level_;
};

inline Metrics metrics_fold(const std::vector<TraceRecord>& records)
{
  MetricsAccumulator acc;
  for (const auto& r : records)
    acc.add(r);
  return acc.current();
}

inline TraceRecord trace_record_from_json_line(const std::string& line)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedTrace(std::string("bad trace line: ") + e.what());
  }
  TraceRecord r;
  try {
    r.t = j.at("t").get<std::int64_t>();
    r.node = j.at("node").get<std::string>();
    r.ev = j.at("ev").get<std::string>();
    r.name = j.at("name").get<std::string>();
    for (const auto& f : j.at("faces"))
      r.faces.push_back(f.get<std::int32_t>());
    r.bytes = j.at("bytes").get<std::int64_t>();
    r.note = j.at("note").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedTrace(std::string("bad trace record: ") + e.what());
  }
  return r;
}

// Folds a whole trace stream (header line first) back into metrics.
inline Metrics metrics_fold_stream(std::istream& is)
{
  MetricsAccumulator acc;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    if (first) {
      first = false;
      if (line.find("\"kind\":\"header\"") != std::string::npos)
        continue;
    }
    acc.add(trace_record_from_json_line(line));
  }
  return acc.current();
}

} // namespace pecsim
