#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fot {

enum class ErrorKind {
  InfeasibleFlow,
  MalformedWalk,
  NotEulerian,
  UnboundedExpansion,
  CapacityExceeded,
  HorizonTooSmall,
  BadRange,
  NotRepeated,
  OutsideBand,
  BandOverflow,
  IntervalTooSmall,
  NotMaximum,
  Unbounded,
  ConnectorsMissing,
  IntervalExhausted,
  InternalInvariant,
  OptimalityViolation,
  Resource,
  Parse,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) raise(kind, msg);
}

// Cost accumulations can reach theta * sum(|c| * u); keep them overflow-checked.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out))
    raise(ErrorKind::InternalInvariant, "integer overflow in addition");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    raise(ErrorKind::InternalInvariant, "integer overflow in multiplication");
  return out;
}

}  // namespace fot
