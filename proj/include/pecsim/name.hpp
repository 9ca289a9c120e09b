#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pecsim {

class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_valid_component(std::string_view c)
{
  return !c.empty() && c.find('/') == std::string_view::npos;
}

// Hierarchical name. Canonical text form is '/' + components joined by '/'.
// The root name (zero components, rendered "/") exists only so FIB prefixes
// can express a default route; packet names always have >= 1 component.
class Name {
public:
  Name() = default;

  explicit Name(std::vector<std::string> comps) : comps_(std::move(comps))
  {
    for (const auto& c : comps_) {
      if (!is_valid_component(c))
        throw ParseError("invalid name component: '" + c + "'");
    }
  }

  static Name parse(std::string_view text)
  {
    if (text.empty())
      throw ParseError("empty input");
    if (text.front() != '/')
      throw ParseError("missing leading slash: '" + std::string(text) + "'");
    Name n;
    std::string_view rest = text.substr(1);
    if (rest.empty())
      return n; // root
    while (true) {
      auto slash = rest.find('/');
      std::string_view comp = rest.substr(0, slash);
      if (comp.empty())
        throw ParseError("empty component in '" + std::string(text) + "'");
      n.comps_.emplace_back(comp);
      if (slash == std::string_view::npos)
        break;
      rest = rest.substr(slash + 1);
    }
    return n;
  }

  static std::optional<Name> try_parse(std::string_view text)
  {
    try {
      return parse(text);
    } catch (const ParseError&) {
      return std::nullopt;
    }
  }

  std::string str() const
  {
    if (comps_.empty())
      return "/";
    std::string out;
    for (const auto& c : comps_) {
      out += '/';
      out += c;
    }
    return out;
  }

  const std::vector<std::string>& components() const { return comps_; }
  std::size_t size() const { return comps_.size(); }
  bool empty() const { return comps_.empty(); }
  const std::string& at(std::size_t i) const { return comps_.at(i); }

  // Component-wise leading subsequence, not string prefix: /a/b is a prefix
  // of /a/b/c but not of /a/bc.
  bool is_prefix_of(const Name& other) const
  {
    if (comps_.size() > other.comps_.size())
      return false;
    return std::equal(comps_.begin(), comps_.end(), other.comps_.begin());
  }

  Name prefix(std::size_t n) const
  {
    Name out;
    out.comps_.assign(comps_.begin(), comps_.begin() + std::min(n, comps_.size()));
    return out;
  }

  Name sub(std::size_t first, std::size_t count) const
  {
    Name out;
    if (first >= comps_.size())
      return out;
    std::size_t last = std::min(first + count, comps_.size());
    out.comps_.assign(comps_.begin() + first, comps_.begin() + last);
    return out;
  }

  Name appended(std::string_view comp) const
  {
    if (!is_valid_component(comp))
      throw ParseError("invalid name component: '" + std::string(comp) + "'");
    Name out = *this;
    out.comps_.emplace_back(comp);
    return out;
  }

  Name appended(const Name& suffix) const
  {
    Name out = *this;
    out.comps_.insert(out.comps_.end(), suffix.comps_.begin(), suffix.comps_.end());
    return out;
  }

  auto operator<=>(const Name&) const = default;

private:
  std::vector<std::string> comps_;
};

inline bool is_prefix_of(const Name& prefix, const Name& name)
{
  return prefix.is_prefix_of(name);
}

// Reserved top-level namespaces. Fixed here so routing and traces are
// deterministic; the set extends the protocol-facing five with /pec/node
// (directed server-to-server exchanges) and /pec/ctl (orchestrator control).
namespace names {

inline const Name& svc_prefix()       { static const Name n = Name::parse("/pec/svc"); return n; }
inline const Name& discover_prefix()  { static const Name n = Name::parse("/pec/discover"); return n; }
inline const Name& thunk_prefix()     { static const Name n = Name::parse("/pec/thunk"); return n; }
inline const Name& imn_prefix()       { static const Name n = Name::parse("/pec/imn"); return n; }
inline const Name& join_prefix()      { static const Name n = Name::parse("/pec/join"); return n; }
inline const Name& node_prefix()      { static const Name n = Name::parse("/pec/node"); return n; }
inline const Name& ctl_prefix()       { static const Name n = Name::parse("/pec/ctl"); return n; }

inline constexpr std::string_view kDataMarker = "=data=";

} // namespace names

inline std::optional<std::uint64_t> parse_u64(std::string_view s)
{
  if (s.empty())
    return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

// Invocation name: service components, the =data= marker, data components,
// then the nonce as a decimal component. The service name must not contain
// the marker; the data name may (decomposition splits at the first marker).
struct InvocationName {
  Name service;
  Name data;
  std::uint64_t nonce = 0;

  Name render() const
  {
    Name out = service.appended(names::kDataMarker).appended(data);
    return out.appended(std::to_string(nonce));
  }

  static std::optional<InvocationName> parse(const Name& n)
  {
    const auto& comps = n.components();
    auto it = std::find(comps.begin(), comps.end(), names::kDataMarker);
    if (it == comps.begin() || it == comps.end())
      return std::nullopt;
    std::size_t marker = static_cast<std::size_t>(it - comps.begin());
    if (n.size() < marker + 3) // marker + >=1 data comp + nonce
      return std::nullopt;
    auto nonce = parse_u64(comps.back());
    if (!nonce)
      return std::nullopt;
    InvocationName inv;
    inv.service = n.prefix(marker);
    inv.data = n.sub(marker + 1, n.size() - marker - 2);
    inv.nonce = *nonce;
    return inv;
  }

  bool operator==(const InvocationName&) const = default;
};

// Reuse key: the invocation identity with the per-request nonce erased.
struct ReuseKey {
  Name service;
  Name data;
  auto operator<=>(const ReuseKey&) const = default;
};

inline InvocationName make_invocation_name(const Name& service, const Name& data,
                                           std::uint64_t nonce)
{
  const auto& sc = service.components();
  if (service.empty() || data.empty() ||
      std::find(sc.begin(), sc.end(), names::kDataMarker) != sc.end())
    throw ParseError("invalid service name for invocation: " + service.str());
  return InvocationName{service, data, nonce};
}

inline ReuseKey reuse_key(const InvocationName& inv)
{
  return ReuseKey{inv.service, inv.data};
}

// Thunk name: /pec/thunk/<server>/<service...>/<state>. The state id comes
// from a per-server monotone counter, so thunks are unique per server and
// globally unique with the server id embedded.
struct ThunkName {
  std::string server_id;
  Name service;
  std::string state_id;

  Name render() const
  {
    return names::thunk_prefix().appended(server_id).appended(service).appended(state_id);
  }

  static std::optional<ThunkName> parse(const Name& n)
  {
    if (n.size() < 5 || !names::thunk_prefix().is_prefix_of(n))
      return std::nullopt;
    ThunkName t;
    t.server_id = n.at(2);
    t.service = n.sub(3, n.size() - 4);
    t.state_id = n.at(n.size() - 1);
    return t;
  }

  bool operator==(const ThunkName&) const = default;
  auto operator<=>(const ThunkName&) const = default;
};

inline ThunkName make_thunk_name(std::string_view server_id, const Name& service,
                                 std::uint64_t pending_counter)
{
  if (!is_valid_component(server_id) || service.empty())
    throw ParseError("invalid thunk parts");
  return ThunkName{std::string(server_id), service, std::to_string(pending_counter)};
}

// Instance migration name: /pec/imn/<source-server>/<instance>. Disjoint
// from the thunk namespace by its reserved second component.
struct MigrationName {
  std::string source_server_id;
  std::string instance_id;

  Name render() const
  {
    return names::imn_prefix().appended(source_server_id).appended(instance_id);
  }

  static std::optional<MigrationName> parse(const Name& n)
  {
    if (n.size() != 4 || !names::imn_prefix().is_prefix_of(n))
      return std::nullopt;
    return MigrationName{n.at(2), n.at(3)};
  }

  bool operator==(const MigrationName&) const = default;
  auto operator<=>(const MigrationName&) const = default;
};

inline MigrationName make_migration_name(std::string_view source_server_id,
                                         std::uint64_t instance_counter)
{
  if (!is_valid_component(source_server_id))
    throw ParseError("invalid server id");
  return MigrationName{std::string(source_server_id), std::to_string(instance_counter)};
}

} // namespace pecsim
