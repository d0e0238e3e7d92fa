#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randcompare {

enum class ErrorKind {
  Data,
  Domain,
  Numeric,
  Bounds,
  DesignInvalid,
  UnsupportedDesign,
  EnumerationTooLarge,
  NoncomputableDistribution,
  DegenerateData,
  InsufficientData,
  NotFound,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. Callers that only need the
/// category switch on kind(); callers that need to react to one failure mode
/// catch the concrete subclass.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define RANDCOMPARE_DEFINE_ERROR(Name, Kind)                            \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& message) : Error(Kind, message) {} \
  };

RANDCOMPARE_DEFINE_ERROR(DataError, ErrorKind::Data)
RANDCOMPARE_DEFINE_ERROR(DomainError, ErrorKind::Domain)
RANDCOMPARE_DEFINE_ERROR(NumericError, ErrorKind::Numeric)
RANDCOMPARE_DEFINE_ERROR(BoundsError, ErrorKind::Bounds)
RANDCOMPARE_DEFINE_ERROR(DesignInvalidError, ErrorKind::DesignInvalid)
RANDCOMPARE_DEFINE_ERROR(UnsupportedDesignError, ErrorKind::UnsupportedDesign)
RANDCOMPARE_DEFINE_ERROR(EnumerationTooLargeError, ErrorKind::EnumerationTooLarge)
RANDCOMPARE_DEFINE_ERROR(NoncomputableDistributionError,
                         ErrorKind::NoncomputableDistribution)
RANDCOMPARE_DEFINE_ERROR(DegenerateDataError, ErrorKind::DegenerateData)
RANDCOMPARE_DEFINE_ERROR(InsufficientDataError, ErrorKind::InsufficientData)
RANDCOMPARE_DEFINE_ERROR(NotFoundError, ErrorKind::NotFound)

#undef RANDCOMPARE_DEFINE_ERROR

}  // namespace randcompare
