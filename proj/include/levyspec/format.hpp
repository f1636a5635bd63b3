#ifndef LEVYSPEC_FORMAT_HPP
#define LEVYSPEC_FORMAT_HPP

#include <string>
#include <string_view>

namespace levyspec {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-string parse; throws Error(config) naming `what` on failure.
double parse_double(std::string_view text, std::string_view what = "number");

}  // namespace levyspec

#endif  // LEVYSPEC_FORMAT_HPP
