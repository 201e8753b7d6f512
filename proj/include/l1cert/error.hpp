#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l1cert {

enum class ErrorKind {
  DomainError,
  RankDeficient,
  NotUnderdetermined,
  NonFinite,
  TooLarge,
  Infeasible,
  MaxIters,
  SolverFailure,
  ConfigError,
  ParseError,
  FieldMissing,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers which
/// precondition or solver outcome was hit.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace l1cert
