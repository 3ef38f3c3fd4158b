#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grassfq {

enum class errc {
  non_prime,
  degree_out_of_range,
  no_irreducible_found,
  spec_mismatch,
  division_by_zero,
  ambient_mismatch,
  not_a_subspace,
  too_large,
  not_an_integer,
  singular,
  pattern_out_of_range,
  precondition_violated,
  window_too_small,
  chart_search_exhausted,
  non_terminating,
  lower_parameter_pole,
  parameter_out_of_range,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::non_prime: return "NonPrime";
    case errc::degree_out_of_range: return "DegreeOutOfRange";
    case errc::no_irreducible_found: return "NoIrreducibleFound";
    case errc::spec_mismatch: return "SpecMismatch";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::ambient_mismatch: return "AmbientMismatch";
    case errc::not_a_subspace: return "NotASubspace";
    case errc::too_large: return "TooLarge";
    case errc::not_an_integer: return "NotAnInteger";
    case errc::singular: return "Singular";
    case errc::pattern_out_of_range: return "PatternOutOfRange";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::window_too_small: return "WindowTooSmall";
    case errc::chart_search_exhausted: return "ChartSearchExhausted";
    case errc::non_terminating: return "NonTerminating";
    case errc::lower_parameter_pole: return "LowerParameterPole";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace grassfq
