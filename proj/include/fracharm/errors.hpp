#pragma once

#include <stdexcept>
#include <string>

namespace fracharm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FRACHARM_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

FRACHARM_DEFINE_ERROR(InvalidGrid);
FRACHARM_DEFINE_ERROR(InvalidField);
FRACHARM_DEFINE_ERROR(GridMismatch);
FRACHARM_DEFINE_ERROR(NonHermitianSymbol);
FRACHARM_DEFINE_ERROR(MeanNotZero);
FRACHARM_DEFINE_ERROR(OrderTooHigh);
FRACHARM_DEFINE_ERROR(GridTooSmall);
FRACHARM_DEFINE_ERROR(ShellOutOfRange);
FRACHARM_DEFINE_ERROR(DivisionByZero);
FRACHARM_DEFINE_ERROR(BadExponent);
FRACHARM_DEFINE_ERROR(DimensionMismatch);
FRACHARM_DEFINE_ERROR(GradeError);
FRACHARM_DEFINE_ERROR(NonOrthonormalFrame);
FRACHARM_DEFINE_ERROR(NearZeroVector);
FRACHARM_DEFINE_ERROR(InvalidMap);
FRACHARM_DEFINE_ERROR(WrongDimension);
FRACHARM_DEFINE_ERROR(NonZeroOrder);
FRACHARM_DEFINE_ERROR(DegreeTooHigh);
FRACHARM_DEFINE_ERROR(UnknownEstimate);
FRACHARM_DEFINE_ERROR(StepFailure);
FRACHARM_DEFINE_ERROR(ConfigError);
FRACHARM_DEFINE_ERROR(IoError);

#undef FRACHARM_DEFINE_ERROR

}  // namespace fracharm
