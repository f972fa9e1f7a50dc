#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace qmc {

/// Base class of every error raised by the library. The CLI maps any of
/// these to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QMC_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

QMC_DEFINE_ERROR(InvalidDensityMatrix)
QMC_DEFINE_ERROR(DimensionMismatch)
QMC_DEFINE_ERROR(IndexCollision)
QMC_DEFINE_ERROR(MalformedNetwork)
QMC_DEFINE_ERROR(RankLimitExceeded)
QMC_DEFINE_ERROR(UnknownGate)
QMC_DEFINE_ERROR(BadParameter)
QMC_DEFINE_ERROR(RepeatedQubit)
QMC_DEFINE_ERROR(TargetOutOfRange)
QMC_DEFINE_ERROR(MalformedCircuit)
QMC_DEFINE_ERROR(UnknownLocation)
QMC_DEFINE_ERROR(UnboundAtom)
QMC_DEFINE_ERROR(NoTraceAvailable)

#undef QMC_DEFINE_ERROR

/// 1-based source position inside a model or assertion file.
/// Line 0 means "no position" (errors raised outside a parser).
struct SourcePos {
  int line = 0;
  int column = 0;
};

inline std::string position_prefix(SourcePos pos) {
  if (pos.line <= 0) return "";
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
}

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, SourcePos pos)
      : Error(position_prefix(pos) + message),
        pos_(pos) {}

  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

inline std::string format_defect(double defect) {
  std::ostringstream os;
  os << defect;
  return os.str();
}

/// A location whose outgoing Kraus operators do not sum to the identity.
class NormalisationViolation : public Error {
 public:
  NormalisationViolation(const std::string& location, double defect,
                         SourcePos pos)
      : Error(position_prefix(pos) + "normalisation violated at location '" + location +
              "' (defect norm " + format_defect(defect) + ")"),
        location_(location),
        defect_(defect),
        pos_(pos) {}

  const std::string& location() const { return location_; }
  double defect() const { return defect_; }
  SourcePos pos() const { return pos_; }

 private:
  std::string location_;
  double defect_;
  SourcePos pos_;
};

}  // namespace qmc
