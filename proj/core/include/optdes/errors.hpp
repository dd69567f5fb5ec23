#ifndef OPTDES_ERRORS_HPP
#define OPTDES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optdes {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define OPTDES_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

OPTDES_DEFINE_ERROR(DimensionMismatch);
OPTDES_DEFINE_ERROR(DegreeOverflow);
OPTDES_DEFINE_ERROR(MissingBallCertificate);
OPTDES_DEFINE_ERROR(NegativeBlockOrder);
OPTDES_DEFINE_ERROR(SamplingFailed);
OPTDES_DEFINE_ERROR(SingularMomentMatrix);
OPTDES_DEFINE_ERROR(InfeasibleStart);
OPTDES_DEFINE_ERROR(NumericalFailure);
OPTDES_DEFINE_ERROR(MaxIterationsReached);
OPTDES_DEFINE_ERROR(NotFlat);
OPTDES_DEFINE_ERROR(EchelonFailure);
OPTDES_DEFINE_ERROR(ExtractionFailed);
OPTDES_DEFINE_ERROR(BadFit);
OPTDES_DEFINE_ERROR(NegativeWeight);
OPTDES_DEFINE_ERROR(UnsupportedDimension);
OPTDES_DEFINE_ERROR(ParseError);

#undef OPTDES_DEFINE_ERROR

}  // namespace optdes

#endif  // OPTDES_ERRORS_HPP
