#pragma once

#include <stdexcept>
#include <string>

namespace bootlab {

enum class ErrorKind {
  EmptyRule,
  OriginInRule,
  DimensionMismatch,
  CapExceeded,
  NotInSet,
  ArrangementTooLarge,
  ConstructionFailed,
  SitesInAssist,
  NotConnected,
  TooSmall,
  NotBounding,
  Unbounded,
  EmptyAboveCut,
  Unspanned,
  BadScale,
  NoPercolation,
  WrapDetected,
  PreconditionFailed,
  TypeMismatch,
  ExtractionFailed,
  IteratedLogDomain,
  HypothesisViolated,
  ParseError,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bootlab
