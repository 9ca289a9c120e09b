#pragma once

#include "pecsim/name.hpp"
#include "pecsim/time.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace pecsim {

// Node-local interface id. Face 0 is the node's own application layer; link
// faces start at 1.
using FaceId = std::int32_t;
inline constexpr FaceId kAppFace = 0;

struct Interest {
  Name name;
  std::uint64_t nonce = 0;
  int hop_limit = 32;
  std::int64_t size_bytes = 100;
};

struct Data {
  Name name;
  std::int64_t payload_bytes = 0;
  // 0 = uncacheable; kForever = effectively never stale.
  SimTime freshness_us = 0;
  std::string producer_id;
  // In-band content for control responses (catalogs, thunk acks, poll
  // results). payload_bytes models the wire size; this string carries the
  // semantics.
  std::string payload;
};

enum class NackReason { NoRoute };

inline const char* to_string(NackReason r)
{
  switch (r) {
    case NackReason::NoRoute: return "no_route";
  }
  return "?";
}

struct Nack {
  Name name;
  std::uint64_t nonce = 0;
  NackReason reason = NackReason::NoRoute;
  std::int64_t size_bytes = 100;
};

using Packet = std::variant<Interest, Data, Nack>;

inline const Name& packet_name(const Packet& p)
{
  return std::visit([](const auto& v) -> const Name& { return v.name; }, p);
}

inline std::int64_t packet_bytes(const Packet& p)
{
  return std::visit([](const auto& v) -> std::int64_t {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Data>)
      return v.payload_bytes;
    else
      return v.size_bytes;
  }, p);
}

inline char packet_kind(const Packet& p)
{
  if (std::holds_alternative<Interest>(p)) return 'I';
  if (std::holds_alternative<Data>(p)) return 'D';
  return 'N';
}

// Output of the forwarding pipeline: packets to put on faces. face ==
// kAppFace means "hand to this node's application layer".
struct Send {
  FaceId face;
  Packet packet;
};

} // namespace pecsim
