#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace obstructkit {

enum class ErrorKind {
  InvalidMatrix,
  InvalidSize,
  NotInvertible,
  NotUnitary,
  NotProjection,
  SpectralGapViolation,
  HypothesisViolation,
  OpenPath,
  NumericalInconsistency,
  BoundViolation,
  AsymmetricSet,
  NotInCommutatorSubgroup,
  SubdivisionTooCoarse,
  ZeroMode,
  NotAnAutomorphism,
  InvalidFamily,
  Overflow,
  Parse,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::SpectralGapViolation: return "SpectralGapViolation";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::OpenPath: return "OpenPath";
    case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::AsymmetricSet: return "AsymmetricSet";
    case ErrorKind::NotInCommutatorSubgroup: return "NotInCommutatorSubgroup";
    case ErrorKind::SubdivisionTooCoarse: return "SubdivisionTooCoarse";
    case ErrorKind::ZeroMode: return "ZeroMode";
    case ErrorKind::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorKind::InvalidFamily: return "InvalidFamily";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Single exception type for the library. `measured` carries the offending
/// quantity (an eigenvalue, a norm, ...) and `index` an offending position
/// when the error is about one element of a list.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<double> measured = std::nullopt,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        measured_(measured),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> measured() const noexcept { return measured_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<double> measured_;
  std::optional<std::size_t> index_;
};

}  // namespace obstructkit
