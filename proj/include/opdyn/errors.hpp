#pragma once

#include <stdexcept>
#include <string>

namespace opdyn {

// Every failure mode surfaced by the library. The CLI maps these to exit
// status 2 together with a structured diagnostic.
enum class Err {
  FieldMismatch,
  IndexDomainViolation,
  NotPowerBounded,
  AlreadyComplex,
  PreconditionNotReturning,
  NotContraction,
  HypothesisNotSatisfied,
  ScalarNotUnimodular,
  EmptySampleSet,
  NotFiniteDimensional,
  DimensionMismatch,
  NotUnimodular,
  NoApproximateKernel,
  NotIsometry,
  NegativeTime,
  UnboundedSemigroup,
  LNotInvariant,
  ZeroDirection,
  ZeroCandidate,
  EmptyNet,
  ParseError,
  InvariantViolation,
};

const char* err_name(Err code);

class OpdynError : public std::runtime_error {
public:
  OpdynError(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}

  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw OpdynError(code, what);
}

inline void require(bool ok, Err code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace opdyn
