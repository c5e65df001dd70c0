#include "bootlab/errors.hpp"

namespace bootlab {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::EmptyRule: return "EmptyRule";
    case ErrorKind::OriginInRule: return "OriginInRule";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotInSet: return "NotInSet";
    case ErrorKind::ArrangementTooLarge: return "ArrangementTooLarge";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::SitesInAssist: return "SitesInAssist";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::NotBounding: return "NotBounding";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::EmptyAboveCut: return "EmptyAboveCut";
    case ErrorKind::Unspanned: return "Unspanned";
    case ErrorKind::BadScale: return "BadScale";
    case ErrorKind::NoPercolation: return "NoPercolation";
    case ErrorKind::WrapDetected: return "WrapDetected";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ExtractionFailed: return "ExtractionFailed";
    case ErrorKind::IteratedLogDomain: return "IteratedLogDomain";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace bootlab
