#pragma once

#include <stdexcept>
#include <string>

namespace previsio {

enum class Errc {
  ParseError,
  InvalidSpace,
  ImpossibleConditioningEvent,
  SpaceMismatch,
  DuplicateEntry,
  MalformedProgram,
  UnassessedVariable,
  EmptyBet,
  EmptyAssessment,
  NotPrecise,
  ConditionalEntriesUnsupported,
  MissingZeroVariables,
  MissingSelfIndicator,
  InvalidPartition,
  PrerequisiteFailed,
  BaseNotCoherent,
  DomainNotClosed,
  EmptyCredalSet,
  PositiveRegimeUnavailable,
  DimensionTooLarge,
  MemberNotCoherent,
  ZeroProbabilityConditioning,
  MissingValues,
  UnknownName,
  InvalidArgument,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidSpace: return "InvalidSpace";
    case Errc::ImpossibleConditioningEvent: return "ImpossibleConditioningEvent";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::MalformedProgram: return "MalformedProgram";
    case Errc::UnassessedVariable: return "UnassessedVariable";
    case Errc::EmptyBet: return "EmptyBet";
    case Errc::EmptyAssessment: return "EmptyAssessment";
    case Errc::NotPrecise: return "NotPrecise";
    case Errc::ConditionalEntriesUnsupported: return "ConditionalEntriesUnsupported";
    case Errc::MissingZeroVariables: return "MissingZeroVariables";
    case Errc::MissingSelfIndicator: return "MissingSelfIndicator";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::PrerequisiteFailed: return "PrerequisiteFailed";
    case Errc::BaseNotCoherent: return "BaseNotCoherent";
    case Errc::DomainNotClosed: return "DomainNotClosed";
    case Errc::EmptyCredalSet: return "EmptyCredalSet";
    case Errc::PositiveRegimeUnavailable: return "PositiveRegimeUnavailable";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::MemberNotCoherent: return "MemberNotCoherent";
    case Errc::ZeroProbabilityConditioning: return "ZeroProbabilityConditioning";
    case Errc::MissingValues: return "MissingValues";
    case Errc::UnknownName: return "UnknownName";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` tells the failure apart.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace previsio
