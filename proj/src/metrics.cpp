#include "curvefit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "curvefit/errors.hpp"
#include "curvefit/kernels.hpp"
#include "curvefit/normal.hpp"

namespace curvefit {

namespace {

void check_pair(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) {
    throw Error(ErrorKind::shape_mismatch, "y and y_hat differ in length");
  }
  if (y.size() < 2) {
    throw Error(ErrorKind::invalid_data, "need at least 2 observations");
  }
}

}  // namespace

Metrics model_analysis(std::span<const double> y, std::span<const double> y_hat) {
  check_pair(y, y_hat);
  const std::size_t n = y.size();

  const double rss = kernels::sum_squared_diff(y, y_hat);
  Metrics m;
  m.n = n;
  m.mse = rss / static_cast<double>(n);
  m.rmse = std::sqrt(m.mse);

  const double mean = kernels::sum(y) / static_cast<double>(n);
  const double tss = kernels::sum_map(
      n, [&](std::size_t i) { return (y[i] - mean) * (y[i] - mean); });
  if (tss > 0.0) {
    m.r_squared = rss == 0.0 ? 1.0 : 1.0 - rss / tss;
  }
  return m;
}

ResidualDiagnostics residual_diagnostics(std::span<const double> y,
                                         std::span<const double> y_hat) {
  check_pair(y, y_hat);
  const std::size_t n = y.size();

  ResidualDiagnostics d;
  d.fitted.assign(y_hat.begin(), y_hat.end());
  d.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.residual[i] = y[i] - y_hat[i];

  std::vector<double> sorted = d.residual;
  std::sort(sorted.begin(), sorted.end());
  d.qq.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    d.qq[i] = QQPoint{normal_quantile(p), sorted[i]};
  }
  return d;
}

}  // namespace curvefit
