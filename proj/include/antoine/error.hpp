#pragma once

#include <stdexcept>
#include <string>

namespace antoine {

enum class ErrorKind {
  InvalidArgument,
  InvalidMultiplicity,
  NoUniqueFixedPoint,
  MultipleChildren,
  MinSeparationTooSmall,
  NoGenericProjection,
  UndefinedAtOrigin,
  NonInvertibleJacobian,
  DegenerateFit,
  TooManyTori,
  SearchLimit,
  Io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported with this type; the C layer maps kind()
// onto a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace antoine
