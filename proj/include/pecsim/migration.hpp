#pragma once

#include "pecsim/name.hpp"
#include "pecsim/service.hpp"
#include "pecsim/time.hpp"

#include <cstdint>
#include <string>

namespace pecsim {

enum class MigrationLevel { Result, Instance, ContainerService, FullVmService };

inline const char* to_string(MigrationLevel l)
{
  switch (l) {
    case MigrationLevel::Result: return "result";
    case MigrationLevel::Instance: return "instance";
    case MigrationLevel::ContainerService: return "container";
    case MigrationLevel::FullVmService: return "full_vm";
  }
  return "?";
}

struct MigrationDecision {
  MigrationLevel level = MigrationLevel::Result;
  std::int64_t payload_bytes = 0;
};

inline std::int64_t migration_payload_bytes(MigrationLevel level,
                                            const ServiceDescriptor& svc)
{
  switch (level) {
    case MigrationLevel::Result:
      return svc.result_bytes;
    case MigrationLevel::Instance:
      return svc.instance_state_bytes;
    case MigrationLevel::ContainerService:
      return svc.container_bytes + svc.instance_state_bytes;
    case MigrationLevel::FullVmService:
      return svc.vm_image_bytes + svc.instance_state_bytes;
  }
  return 0;
}

// The migration-level decision table. Completion dominates: a finished
// execution only needs its result moved. Otherwise the destination's
// capabilities pick the cheapest level that can carry the running instance.
inline MigrationDecision decide_migration(bool execution_complete,
                                          bool destination_has_service,
                                          bool destination_has_env,
                                          const ServiceDescriptor& svc)
{
  MigrationLevel level;
  if (execution_complete)
    level = MigrationLevel::Result;
  else if (destination_has_service)
    level = MigrationLevel::Instance;
  else if (destination_has_env)
    level = MigrationLevel::ContainerService;
  else
    level = MigrationLevel::FullVmService;
  return {level, migration_payload_bytes(level, svc)};
}

// A running execution as the migration machinery sees it. Progress is
// tracked as integer elapsed execution time, frozen on suspension, so the
// remaining-work arithmetic never touches floating point.
struct InstanceRecord {
  std::string user;
  ServiceId service;
  ThunkName thunk;
  SimTime started_at = 0;
  SimTime exec_duration_us = 1;
  bool started = false; // false while waiting on the input data
  bool suspended = false;
  SimTime elapsed_at_suspend = 0;

  SimTime elapsed_us(SimTime now) const
  {
    if (suspended)
      return elapsed_at_suspend;
    if (!started || now <= started_at)
      return 0;
    SimTime e = now - started_at;
    return e > exec_duration_us ? exec_duration_us : e;
  }

  bool complete(SimTime now) const { return elapsed_us(now) >= exec_duration_us; }

  SimTime remaining_us(SimTime now) const { return exec_duration_us - elapsed_us(now); }

  // progress in thousandths, for traces
  std::int64_t progress_milli(SimTime now) const
  {
    return exec_duration_us == 0 ? 1000 : elapsed_us(now) * 1000 / exec_duration_us;
  }

  void suspend(SimTime now)
  {
    elapsed_at_suspend = elapsed_us(now);
    suspended = true;
  }
};

struct ImnRecord {
  MigrationName imn;
  std::string instance_id; // key into the server's execution table
  std::string source_server;
  SimTime issued_at = 0;
};

} // namespace pecsim
