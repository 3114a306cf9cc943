#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

enum class ErrorCode {
  NonRealSpectrum,
  Singular,
  NumericalBreakdown,
  NotSpd,
  NotSymmetric,
  NotUnit,
  NotProximal,
  NotRegular,
  DimMismatch,
  NotCollinear,
  CoincidentPoints,
  OutsideDomain,
  DegenerateHull,
  NotOnBoundary,
  NotPreserving,
  ToleranceCollision,
  EmptyCone,
  NotUnimodular,
  NotHyperbolicType,
  OutsideWindow,
  NonDiscreteSuspected,
  InsufficientData,
  BudgetExceeded,
  NoConvergence,
  NotInChamber,
  ConfigError,
};

const char* error_code_name(ErrorCode c);

// All library failures are reported through this exception type so that the
// CLI can map them onto exit codes in one place.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace anosov
