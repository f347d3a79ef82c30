#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace deltab {

enum class ErrorKind {
  invalid_argument,
  unknown_catalog_name,
  point_outside_domain,
  rank_deficient_jacobian,
  syntax_error,
  unknown_identifier,
  wrong_component_count,
  domain_error,
  degenerate_metric,
  not_isothermal,
  too_close_to_boundary,
  not_minimal,
  not_harmonic,
  io_error,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unknown_catalog_name: return "unknown-catalog-name";
    case ErrorKind::point_outside_domain: return "point-outside-domain";
    case ErrorKind::rank_deficient_jacobian: return "rank-deficient-jacobian";
    case ErrorKind::syntax_error: return "syntax-error";
    case ErrorKind::unknown_identifier: return "unknown-identifier";
    case ErrorKind::wrong_component_count: return "wrong-component-count";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::degenerate_metric: return "degenerate-metric";
    case ErrorKind::not_isothermal: return "not-isothermal";
    case ErrorKind::too_close_to_boundary: return "too-close-to-boundary";
    case ErrorKind::not_minimal: return "not-minimal-input";
    case ErrorKind::not_harmonic: return "not-harmonic-input";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

/// Structured failure raised by every module. `offset()` is set for
/// parser errors and points at the offending byte of the input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message),
        offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::optional<std::size_t> offset_;
};

}  // namespace deltab
