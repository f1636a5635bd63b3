#ifndef LEVYSPEC_ERROR_HPP
#define LEVYSPEC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace levyspec {

enum class ErrorKind {
  invalid_argument,
  incompatible_grids,
  degenerate_vector,
  domain_too_small,
  singular_point,
  spectral_breakdown,
  rank_deficient,
  too_large,
  invalid_matrix,
  unstable_step,
  config,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure
/// class and `index()` carries a state/vector index where one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long index = -1)
      : std::runtime_error(message), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

}  // namespace levyspec

#endif  // LEVYSPEC_ERROR_HPP
