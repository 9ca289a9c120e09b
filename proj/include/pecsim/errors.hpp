#pragma once

#include "pecsim/trace.hpp"

#include <stdexcept>
#include <string>

namespace pecsim {

// Scenario file failed schema or referential checks. CLI exit code 1.
class SchemaError : public std::runtime_error {
public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// A module invariant broke mid-run; carries the offending record. CLI exit
// code 2.
class RuntimeInvariantViolation : public std::runtime_error {
public:
  RuntimeInvariantViolation(const std::string& what, TraceRecord offending)
    : std::runtime_error(what + " at " + offending.to_jsonl()),
      record(std::move(offending))
  {
  }

  TraceRecord record;
};

} // namespace pecsim
