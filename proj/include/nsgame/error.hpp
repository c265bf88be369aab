#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsgame {

enum class ErrorKind {
  sum_not_one,
  shape_mismatch,
  index_out_of_range,
  cap_exceeded,
  unknown_name,
  zero_probability_event,
  empty_subset,
  non_positive_epsilon,
  budget_exceeded,
  non_integer_entries,
  no_complete_support,
  non_positive_delta,
  signaling_strategy,
  k_too_large,
  parse_error,
  numeric_overflow_cap,
  invalid_argument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nsgame
