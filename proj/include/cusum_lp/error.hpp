#pragma once

#include <stdexcept>
#include <string>

namespace cusum_lp {

/// Error classes raised by the library. Each maps onto one CLI exit code.
enum class error_kind {
  invalid_input,        ///< malformed or too-short series, non-finite values
  weight_inadmissible,  ///< weight violates the integrability condition
  divergent_limit,      ///< kappa <= p/2 + 1 for the trimmed statistic
  invalid_trim,         ///< empty or out-of-range trimming interval
  invalid_parameter,    ///< other out-of-domain arguments
  insufficient_data,    ///< sample too short for the requested estimator
  accuracy,             ///< quadrature did not reach the requested accuracy
  precision,            ///< too few Monte Carlo replications
  invalid_model,        ///< noise or change specification out of range
  io                    ///< file could not be read or written
};

class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

/// Raised by quadrature routines; carries the best estimate reached.
class accuracy_error : public error {
 public:
  accuracy_error(const std::string& what, double value, double error_estimate)
      : error(error_kind::accuracy, what), value_(value), error_estimate_(error_estimate) {}

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

namespace detail {

[[noreturn]] inline void fail(error_kind kind, const std::string& what) { throw error(kind, what); }

inline void require(bool cond, error_kind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace detail
}  // namespace cusum_lp
