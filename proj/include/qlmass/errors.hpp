#ifndef QLMASS_ERRORS_HPP
#define QLMASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qlmass {

// Error taxonomy: `input` errors are malformed data or bad arguments (CLI exit
// code 2), `math` errors are well-formed inputs whose geometry violates a
// required condition (CLI exit code 1).
enum class ErrorCode {
  // input
  invalid_input,
  mismatched_grids,
  degenerate_grid,
  pole_closure_violated,
  usage_error,
  io_error,
  // math
  unequal_areas,
  positive_curvature_lost,
  condition_violated,
  non_positive_mass,
  bracket_violation,
  precondition_failed,
  search_exhausted,
  no_delta_found,
  collar_infeasible,
  corner_inequality_failed,
  not_asymptotically_flat,
};

inline bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input:
    case ErrorCode::mismatched_grids:
    case ErrorCode::degenerate_grid:
    case ErrorCode::pole_closure_violated:
    case ErrorCode::usage_error:
    case ErrorCode::io_error:
      return true;
    default:
      return false;
  }
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::mismatched_grids: return "MismatchedGrids";
    case ErrorCode::degenerate_grid: return "DegenerateGrid";
    case ErrorCode::pole_closure_violated: return "PoleClosureViolated";
    case ErrorCode::usage_error: return "UsageError";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::unequal_areas: return "UnequalAreas";
    case ErrorCode::positive_curvature_lost: return "PositiveCurvatureLost";
    case ErrorCode::condition_violated: return "ConditionViolated";
    case ErrorCode::non_positive_mass: return "NonPositiveMass";
    case ErrorCode::bracket_violation: return "BracketViolation";
    case ErrorCode::precondition_failed: return "PreconditionFailed";
    case ErrorCode::search_exhausted: return "SearchExhausted";
    case ErrorCode::no_delta_found: return "NoDeltaFound";
    case ErrorCode::collar_infeasible: return "CollarInfeasible";
    case ErrorCode::corner_inequality_failed: return "CornerInequalityFailed";
    case ErrorCode::not_asymptotically_flat: return "NotAsymptoticallyFlat";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qlmass

#endif
