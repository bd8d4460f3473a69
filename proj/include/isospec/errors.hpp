#pragma once

#include <stdexcept>
#include <string>

namespace isospec {

// Machine-readable failure kinds. The CLI maps any of these to exit code 2
// with the kind name as the reason.
enum class ErrorKind {
  NonSkew,
  DependentBasis,
  UnsupportedL,
  NotAnticommutator,
  Degenerate,
  NotUnit,
  NotAnticommuting,
  BadSigma,
  DimensionMismatch,
  NotHomogeneous,
  SingularTruncation,
  UnexpectedEigenvalue,
  NotSymmetric,
  ShapeMismatch,
  OffSurface,
  RimPoint,
  NotTangent,
  NotEigenvector,
  NotInDistribution,
  WrongGroupFamily,
  BlockNotInvariant,
  OutsideBall,
  BadInput,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace isospec
