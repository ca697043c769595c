#include "fot/error.hpp"

namespace fot {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InfeasibleFlow: return "infeasible-flow";
    case ErrorKind::MalformedWalk: return "malformed-walk";
    case ErrorKind::NotEulerian: return "not-eulerian";
    case ErrorKind::UnboundedExpansion: return "unbounded-expansion";
    case ErrorKind::CapacityExceeded: return "capacity-exceeded";
    case ErrorKind::HorizonTooSmall: return "horizon-too-small";
    case ErrorKind::BadRange: return "bad-range";
    case ErrorKind::NotRepeated: return "not-repeated";
    case ErrorKind::OutsideBand: return "outside-band";
    case ErrorKind::BandOverflow: return "band-overflow";
    case ErrorKind::IntervalTooSmall: return "interval-too-small";
    case ErrorKind::NotMaximum: return "not-maximum";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::ConnectorsMissing: return "connectors-missing";
    case ErrorKind::IntervalExhausted: return "interval-exhausted";
    case ErrorKind::InternalInvariant: return "internal-invariant";
    case ErrorKind::OptimalityViolation: return "optimality-violation";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace fot
