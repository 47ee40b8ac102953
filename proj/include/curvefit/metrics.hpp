#pragma once

#include <optional>
#include <span>
#include <vector>

namespace curvefit {

struct Metrics {
  // Absent when y has zero variance (R^2 undefined); mse/rmse still hold.
  std::optional<double> r_squared;
  double mse = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
};

struct QQPoint {
  double theoretical;  // standard-normal quantile at position (i + 0.5) / n
  double sample;       // i-th order statistic
};

struct ResidualDiagnostics {
  std::vector<double> fitted;
  std::vector<double> residual;  // y - y_hat, same order as the inputs
  std::vector<QQPoint> qq;
};

// R^2 = 1 - RSS/TSS, MSE = RSS/n, RMSE = sqrt(MSE). Lengths must match and
// be at least 2.
Metrics model_analysis(std::span<const double> y, std::span<const double> y_hat);

ResidualDiagnostics residual_diagnostics(std::span<const double> y,
                                         std::span<const double> y_hat);

}  // namespace curvefit
