#pragma once

#include <span>
#include <string>
#include <vector>

#include "curvefit/dataset.hpp"
#include "curvefit/models.hpp"

namespace curvefit {

enum class LocalMethod { levenberg_marquardt, nelder_mead, gradient_descent };

struct LocalConfig {
  std::size_t max_iter = 100;
  double loss_tol = 1e-10;  // relative change of the residual sum of squares
  double step_tol = 1e-10;  // parameter step norm
  LocalMethod method = LocalMethod::levenberg_marquardt;
};

struct FitResult {
  std::vector<double> theta_hat;
  double loss = 0.0;  // residual sum of squares at theta_hat
  std::size_t iterations = 0;
  bool converged = false;
  std::string method;
};

const char* method_name(LocalMethod method);

// Residual sum of squares sum_i (y_i - f(x_i; theta))^2. d must be complete;
// DomainError propagates from evaluation.
double rss(const ModelSpec& spec, std::span<const double> theta, const Dataset& d);

// As rss but never throws past construction: out-of-domain or non-finite
// evaluations give +infinity.
double rss_or_inf(const ModelSpec& spec, std::span<const double> theta,
                  std::span<const double> x, std::span<const double> y);

// Gradient of the RSS objective, -2 J^T r.
std::vector<double> rss_gradient(const ModelSpec& spec, std::span<const double> theta,
                                 const Dataset& d);

// Deterministic descent from `init`. The final loss never exceeds the loss at
// init; trial points outside the model domain are treated as +infinity.
FitResult fit(const ModelSpec& spec, const Dataset& d, std::span<const double> init,
              const LocalConfig& cfg = {});

}  // namespace curvefit
