#pragma once

#include <stdexcept>
#include <string>

namespace sidesign {

enum class ErrorCode {
  kConfig,          // invalid configuration or malformed input file
  kResourceCap,     // instance exceeds an enumeration limit
  kModel,           // invalid model (e.g. unstable denominator)
  kNumerical,       // non-finite intermediate value
  kSingularDesign,  // no nonsingular information matrix reachable
  kNotConverged,    // iteration budget exhausted
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

/// Process exit status used by the command-line front end.
int exit_code(ErrorCode code) noexcept;

}  // namespace sidesign
