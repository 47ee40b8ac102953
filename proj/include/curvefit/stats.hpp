#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace curvefit {

struct SummaryStats {
  double mean = 0.0;
  double std_dev = 0.0;  // n-1 denominator
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  std::size_t count = 0;
  std::size_t unique_count = 0;  // exact bitwise equality of values
  double skewness = 0.0;         // (1/n) sum z^3, z standardized by the population std
  double excess_kurtosis = 0.0;  // (1/n) sum z^4 - 3; both are 0 for zero variance
  bool degenerate = false;       // single observation; std reported as 0
};

// Descriptive aggregates over the present values. `present` may be empty,
// meaning every value is observed. Throws when nothing is observed.
SummaryStats summary_statistics(std::span<const double> values,
                                std::span<const std::uint8_t> present = {});

}  // namespace curvefit
