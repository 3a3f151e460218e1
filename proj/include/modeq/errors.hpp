#ifndef MODEQ_ERRORS_HPP
#define MODEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modeq {

// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MODEQ_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

MODEQ_DEFINE_ERROR(DivisionByZeroSeries);
MODEQ_DEFINE_ERROR(NonMonicBase);
MODEQ_DEFINE_ERROR(UnknownGenerator);
MODEQ_DEFINE_ERROR(UnsupportedSpace);
MODEQ_DEFINE_ERROR(InsufficientPrecision);
MODEQ_DEFINE_ERROR(NotQuasimodular);
MODEQ_DEFINE_ERROR(NonUniqueExtremal);
MODEQ_DEFINE_ERROR(NoExtremal);
MODEQ_DEFINE_ERROR(ExponentMismatch);
MODEQ_DEFINE_ERROR(ConditionHViolated);
MODEQ_DEFINE_ERROR(CertificationFailed);
MODEQ_DEFINE_ERROR(WronskianNotSquareCompatible);
MODEQ_DEFINE_ERROR(ZeroDivision);
MODEQ_DEFINE_ERROR(GeneratorMismatch);
MODEQ_DEFINE_ERROR(ParamMismatch);
MODEQ_DEFINE_ERROR(InhomogeneousInput);
MODEQ_DEFINE_ERROR(NotSimpleZero);
MODEQ_DEFINE_ERROR(IndicialMismatch);
MODEQ_DEFINE_ERROR(DegenerateParameter);
MODEQ_DEFINE_ERROR(UnsupportedArity);
MODEQ_DEFINE_ERROR(ParseError);

#undef MODEQ_DEFINE_ERROR

}  // namespace modeq

#endif
