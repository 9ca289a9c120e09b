#pragma once

#include "pecsim/name.hpp"
#include "pecsim/time.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace pecsim {

using ServiceId = Name; // lives under /pec/svc
using DomainId = std::string;

// What a service costs to run, move, and complete. Execution time is affine
// in the input size; the byte fields are ordered result <= instance state <=
// container <= VM image (the image includes the guest OS).
struct ServiceDescriptor {
  ServiceId id;
  SimTime exec_base_us = 0;
  std::int64_t exec_ns_per_byte = 0;
  std::int64_t result_bytes = 1;
  std::int64_t instance_state_bytes = 1;
  std::int64_t container_bytes = 1;
  std::int64_t vm_image_bytes = 1;
  std::string requires_env;

  SimTime exec_time_us(std::int64_t data_bytes) const
  {
    return exec_base_us + div_ceil(data_bytes * exec_ns_per_byte, 1000);
  }

  void check() const
  {
    if (result_bytes <= 0 || instance_state_bytes < result_bytes ||
        container_bytes < instance_state_bytes || vm_image_bytes < container_bytes)
      throw std::invalid_argument("service " + id.str() +
                                  ": byte fields must satisfy result <= instance "
                                  "<= container <= vm and be positive");
  }
};

struct DeploymentPlan {
  std::map<ServiceId, std::set<std::string>> placements; // service -> server ids
};

// Demand per (service, domain) over the configured window; read from the
// scenario request schedule.
struct PopularityStats {
  std::map<std::pair<ServiceId, DomainId>, std::int64_t> counts;

  std::int64_t demand(const ServiceId& svc, const DomainId& dom) const
  {
    auto it = counts.find({svc, dom});
    return it == counts.end() ? 0 : it->second;
  }
};

} // namespace pecsim
