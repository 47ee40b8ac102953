#include "curvefit/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "curvefit/errors.hpp"
#include "curvefit/kernels.hpp"

namespace curvefit {

SummaryStats summary_statistics(std::span<const double> values,
                                std::span<const std::uint8_t> present) {
  std::vector<double> v;
  v.reserve(values.size());
  if (present.empty()) {
    v.assign(values.begin(), values.end());
  } else {
    if (present.size() != values.size()) {
      throw Error(ErrorKind::shape_mismatch, "presence mask length mismatch");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (present[i]) v.push_back(values[i]);
    }
  }
  if (v.empty()) {
    throw Error(ErrorKind::no_observed_values, "no observed values");
  }

  const std::size_t n = v.size();
  SummaryStats s;
  s.count = n;

  // Moments run over the sorted values, which makes every statistic
  // bit-identical under permutations of the input.
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  s.mean = kernels::sum(sorted) / static_cast<double>(n);
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = n % 2 == 1 ? sorted[n / 2]
                        : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  // unique_count compares raw bit patterns, so 0.0 and -0.0 stay distinct.
  std::vector<std::uint64_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = std::bit_cast<std::uint64_t>(sorted[i]);
  std::sort(bits.begin(), bits.end());
  s.unique_count = static_cast<std::size_t>(
      std::distance(bits.begin(), std::unique(bits.begin(), bits.end())));

  if (n == 1) {
    s.degenerate = true;
    return s;
  }

  const double mean = s.mean;
  const double ss = kernels::sum_map(
      n, [&](std::size_t i) { return (sorted[i] - mean) * (sorted[i] - mean); });
  s.std_dev = std::sqrt(ss / static_cast<double>(n - 1));

  const double pop_var = ss / static_cast<double>(n);
  if (pop_var > 0.0) {
    const double pop_std = std::sqrt(pop_var);
    const double m3 = kernels::sum_map(n, [&](std::size_t i) {
      const double z = (sorted[i] - mean) / pop_std;
      return z * z * z;
    });
    const double m4 = kernels::sum_map(n, [&](std::size_t i) {
      const double z = (sorted[i] - mean) / pop_std;
      return z * z * z * z;
    });
    s.skewness = m3 / static_cast<double>(n);
    s.excess_kurtosis = m4 / static_cast<double>(n) - 3.0;
  }
  return s;
}

}  // namespace curvefit
