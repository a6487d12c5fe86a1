#include "mmroute/error.hpp"

namespace mmroute {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_geometry: return "degenerate-geometry";
    case ErrorCode::topology: return "topology";
    case ErrorCode::spec: return "spec";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::contract_violation: return "contract-violation";
    case ErrorCode::malformed_action: return "malformed-action";
    case ErrorCode::lifecycle: return "lifecycle";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace mmroute
