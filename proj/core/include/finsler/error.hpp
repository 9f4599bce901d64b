// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler {

enum class ErrorKind {
  unsupported_order,
  slit_bundle,
  domain_violation,
  regularity_failure,
  strong_convexity,
  invalid_params,
  shrinking_required,
  integration_failure,
  unreachable_in_chart,
  degenerate_family,
  usage,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for library failures; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace finsler
