#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sparserep {

enum class ErrorKind {
  ZeroColumn,
  DimensionMismatch,
  OrthogonalInput,
  NumericalBreakdown,
  EmptyClassSet,
  EmptyInput,
  InsufficientData,
  NotSquare,
  DimensionTooLarge,
  DimensionTooSmall,
  EmptyTrainingSet,
  SingularCovariance,
  InfeasibleGeometry,
  ParseError,
  RaggedRow,
  LabelCountMismatch,
  ClassTooSmall,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorKind kind);

// Process exit code for the command line tool: 1 usage, 2 data, 3 numerical.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::int64_t where = -1);

  ErrorKind kind() const noexcept { return kind_; }

  // Column index, line number or class label the error refers to; -1 if none.
  std::int64_t where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::int64_t where_;
};

}  // namespace sparserep
