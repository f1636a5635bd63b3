#include "levyspec/error.hpp"

namespace levyspec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::incompatible_grids: return "incompatible-grids";
    case ErrorKind::degenerate_vector: return "degenerate-vector";
    case ErrorKind::domain_too_small: return "domain-too-small";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::spectral_breakdown: return "spectral-breakdown";
    case ErrorKind::rank_deficient: return "rank-deficient";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::invalid_matrix: return "invalid-matrix";
    case ErrorKind::unstable_step: return "unstable-step";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace levyspec
