#include "sparserep/error.hpp"

namespace sparserep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OrthogonalInput: return "OrthogonalInput";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::EmptyClassSet: return "EmptyClassSet";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::InfeasibleGeometry: return "InfeasibleGeometry";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::LabelCountMismatch: return "LabelCountMismatch";
    case ErrorKind::ClassTooSmall: return "ClassTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return 1;
    case ErrorKind::OrthogonalInput:
    case ErrorKind::NumericalBreakdown:
    case ErrorKind::SingularCovariance:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorKind kind, const std::string& message, std::int64_t where)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      where_(where) {}

}  // namespace sparserep
