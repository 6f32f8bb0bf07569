#include "opdyn/errors.hpp"

namespace opdyn {

const char* err_name(Err code) {
  switch (code) {
    case Err::FieldMismatch: return "FieldMismatch";
    case Err::IndexDomainViolation: return "IndexDomainViolation";
    case Err::NotPowerBounded: return "NotPowerBounded";
    case Err::AlreadyComplex: return "AlreadyComplex";
    case Err::PreconditionNotReturning: return "PreconditionNotReturning";
    case Err::NotContraction: return "NotContraction";
    case Err::HypothesisNotSatisfied: return "HypothesisNotSatisfied";
    case Err::ScalarNotUnimodular: return "ScalarNotUnimodular";
    case Err::EmptySampleSet: return "EmptySampleSet";
    case Err::NotFiniteDimensional: return "NotFiniteDimensional";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NotUnimodular: return "NotUnimodular";
    case Err::NoApproximateKernel: return "NoApproximateKernel";
    case Err::NotIsometry: return "NotIsometry";
    case Err::NegativeTime: return "NegativeTime";
    case Err::UnboundedSemigroup: return "UnboundedSemigroup";
    case Err::LNotInvariant: return "LNotInvariant";
    case Err::ZeroDirection: return "ZeroDirection";
    case Err::ZeroCandidate: return "ZeroCandidate";
    case Err::EmptyNet: return "EmptyNet";
    case Err::ParseError: return "ParseError";
    case Err::InvariantViolation: return "InvariantViolation";
  }
  return "UnknownError";
}

}  // namespace opdyn
