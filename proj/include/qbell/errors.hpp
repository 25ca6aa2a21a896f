#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace qbell {

namespace detail {
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}
}  // namespace detail

/// Base class for all library errors. what() begins with the name of the
/// violated invariant so scripts can match on it.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDimension : Error {
  explicit InvalidDimension(const std::string& detail)
      : Error("InvalidDimension: " + detail) {}
};

struct NotFinite : Error {
  explicit NotFinite(const std::string& detail)
      : Error("NotFinite: " + detail) {}
};

struct NotHermitian : Error {
  explicit NotHermitian(double residual_)
      : Error("NotHermitian: Frobenius residual " + detail::num(residual_)),
        residual(residual_) {}
  double residual;
};

struct TraceNotOne : Error {
  explicit TraceNotOne(double residual_)
      : Error("TraceNotOne: |trace - 1| = " + detail::num(residual_)),
        residual(residual_) {}
  double residual;
};

struct NotPositive : Error {
  explicit NotPositive(double min_eigenvalue_)
      : Error("NotPositive: minimum eigenvalue " + detail::num(min_eigenvalue_)),
        min_eigenvalue(min_eigenvalue_) {}
  double min_eigenvalue;
};

struct NotUnitVector : Error {
  explicit NotUnitVector(double norm_)
      : Error("NotUnitVector: norm " + detail::num(norm_)), norm(norm_) {}
  double norm;
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& detail) : Error("OutOfRange: " + detail) {}
};

struct EigenFailure : Error {
  explicit EigenFailure(const std::string& detail) : Error("EigenFailure: " + detail) {}
};

struct NotDetectable : Error {
  explicit NotDetectable(const std::string& detail) : Error("NotDetectable: " + detail) {}
};

struct EmptyGrid : Error {
  explicit EmptyGrid(const std::string& detail) : Error("EmptyGrid: " + detail) {}
};

/// Filesystem/stream failures; mapped to a distinct process exit code by the CLI.
struct IoError : Error {
  explicit IoError(const std::string& detail) : Error("IoError: " + detail) {}
};

}  // namespace qbell
