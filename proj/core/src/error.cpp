#include "randcompare/error.hpp"

namespace randcompare {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Data: return "DataError";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Numeric: return "NumericError";
    case ErrorKind::Bounds: return "BoundsError";
    case ErrorKind::DesignInvalid: return "DesignInvalid";
    case ErrorKind::UnsupportedDesign: return "UnsupportedDesign";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::NoncomputableDistribution: return "NoncomputableDistribution";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NotFound: return "NotFound";
  }
  return "Error";
}

}  // namespace randcompare
