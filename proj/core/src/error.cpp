#include "kdvflat/error.hpp"

namespace kdvflat {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::singular: return "singular";
    case ErrorCode::range: return "range";
    case ErrorCode::resolution: return "resolution";
    case ErrorCode::not_reachable: return "not_reachable";
    case ErrorCode::depth: return "depth";
    case ErrorCode::roughness: return "roughness";
    case ErrorCode::stability: return "stability";
    case ErrorCode::divergence_risk: return "divergence_risk";
    case ErrorCode::fit: return "fit";
    case ErrorCode::not_applicable: return "not_applicable";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace kdvflat
