#include "l1cert/error.hpp"

namespace l1cert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotUnderdetermined: return "NotUnderdetermined";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::MaxIters: return "MaxIters";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FieldMissing: return "FieldMissing";
  }
  return "Unknown";
}

}  // namespace l1cert
