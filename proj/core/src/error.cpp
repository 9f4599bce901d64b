// SPDX-License-Identifier: Apache-2.0
#include "finsler/error.hpp"

namespace finsler {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::unsupported_order: return "unsupported-order";
    case ErrorKind::slit_bundle: return "slit-bundle violation";
    case ErrorKind::domain_violation: return "domain violation";
    case ErrorKind::regularity_failure: return "regularity failure";
    case ErrorKind::strong_convexity: return "strong-convexity failure";
    case ErrorKind::invalid_params: return "invalid parameters";
    case ErrorKind::shrinking_required: return "shrinking soliton required";
    case ErrorKind::integration_failure: return "integration failure";
    case ErrorKind::unreachable_in_chart: return "unreachable in chart";
    case ErrorKind::degenerate_family: return "degenerate family";
    case ErrorKind::usage: return "usage error";
  }
  return "error";
}

}  // namespace finsler
