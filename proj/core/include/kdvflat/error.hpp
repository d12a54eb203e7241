#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdvflat {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorCode {
  invalid_argument,   ///< precondition on an input value violated
  domain,             ///< argument outside the certified domain of a function
  singular,           ///< division by a jet with vanishing constant term
  range,              ///< floating-point overflow
  resolution,         ///< a series is too short to resolve the requested accuracy
  not_reachable,      ///< target state violates the reachable-class conditions
  depth,              ///< requested jet depth exceeds what is available or certified
  roughness,          ///< trace requested before the smoothing time
  stability,          ///< time stepper produced growth or non-finite values
  divergence_risk,    ///< envelope outside the regime where the series converges
  fit,                ///< degenerate data for a least-squares fit
  not_applicable,     ///< inequality constant undefined for the given parameters
  config,             ///< malformed run configuration
  io,                 ///< file-system failure
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace kdvflat
