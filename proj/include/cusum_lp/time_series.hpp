#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cusum_lp/error.hpp"

namespace cusum_lp {

/// Observed scalar sample X_1..X_N. At least two finite values.
class time_series {
 public:
  explicit time_series(std::vector<double> values) : values_(std::move(values)) {
    detail::require(values_.size() >= 2, error_kind::invalid_input,
                    "time series needs at least 2 observations, got " + std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        detail::fail(error_kind::invalid_input,
                     "observation " + std::to_string(i + 1) + " is not finite");
      }
    }
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// True when every observation equals the first one exactly.
  [[nodiscard]] bool is_constant() const noexcept {
    for (double v : values_) {
      if (v != values_.front()) return false;
    }
    return true;
  }

 private:
  std::vector<double> values_;
};

}  // namespace cusum_lp
