#include "sidesign/error.hpp"

namespace sidesign {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kResourceCap: return "instance too large";
    case ErrorCode::kModel: return "model error";
    case ErrorCode::kNumerical: return "numerical error";
    case ErrorCode::kSingularDesign: return "singular design";
    case ErrorCode::kNotConverged: return "not converged";
  }
  return "unknown error";
}

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kConfig: return 2;
    case ErrorCode::kResourceCap: return 3;
    case ErrorCode::kModel:
    case ErrorCode::kNumerical:
    case ErrorCode::kSingularDesign: return 4;
    case ErrorCode::kNotConverged: return 5;
  }
  return 1;
}

}  // namespace sidesign
