#pragma once

#include "pecsim/time.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pecsim {

class MalformedTrace : public std::runtime_error {
public:
  explicit MalformedTrace(const std::string& what) : std::runtime_error(what) {}
};

// One line of the JSON-lines trace. Field order is fixed; serialization is
// hand-rolled so trace bytes are identical for identical runs.
struct TraceRecord {
  SimTime t = 0;
  std::string node;
  std::string ev;
  std::string name;
  std::vector<std::int32_t> faces;
  std::int64_t bytes = 0;
  std::string note;

  bool operator==(const TraceRecord&) const = default;

  std::string to_jsonl() const;
};

inline constexpr int kTraceVersion = 1;

namespace detail {

inline void json_escape_to(std::string& out, const std::string& s)
{
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char hex[] = "0123456789abcdef";
          out += "\\u00";
          out += hex[(c >> 4) & 0xf];
          out += hex[c & 0xf];
        } else {
          out += c;
        }
    }
  }
}

} // namespace detail

inline std::string TraceRecord::to_jsonl() const
{
  std::string out = "{\"t\":" + std::to_string(t) + ",\"node\":\"";
  detail::json_escape_to(out, node);
  out += "\",\"ev\":\"";
  detail::json_escape_to(out, ev);
  out += "\",\"name\":\"";
  detail::json_escape_to(out, name);
  out += "\",\"faces\":[";
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (i)
      out += ',';
    out += std::to_string(faces[i]);
  }
  out += "],\"bytes\":" + std::to_string(bytes) + ",\"note\":\"";
  detail::json_escape_to(out, note);
  out += "\"}";
  return out;
}

inline std::string trace_header_line(std::uint64_t seed, const std::string& scenario)
{
  std::string out = "{\"kind\":\"header\",\"v\":" + std::to_string(kTraceVersion) +
                    ",\"seed\":" + std::to_string(seed) + ",\"scenario\":\"";
  detail::json_escape_to(out, scenario);
  out += "\"}";
  return out;
}

// Collects records in order and optionally streams them to a file as they
// are emitted. Records must arrive in nondecreasing time order.
class Tracer {
public:
  Tracer() = default;
  explicit Tracer(std::ostream* sink) : sink_(sink) {}

  void write_header(std::uint64_t seed, const std::string& scenario)
  {
    if (sink_)
      *sink_ << trace_header_line(seed, scenario) << '\n';
  }

  void emit(TraceRecord rec)
  {
    if (!records_.empty() && rec.t < records_.back().t)
      throw std::logic_error("trace time went backwards at ev=" + rec.ev);
    if (sink_)
      *sink_ << rec.to_jsonl() << '\n';
    records_.push_back(std::move(rec));
  }

  const std::vector<TraceRecord>& records() const { return records_; }

private:
  std::vector<TraceRecord> records_;
  std::ostream* sink_ = nullptr;
};

} // namespace pecsim
