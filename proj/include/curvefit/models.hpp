#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvefit/dataset.hpp"
#include "curvefit/linalg.hpp"

namespace curvefit {

// A parametric family f(x; theta). Instances are immutable and reentrant;
// evaluation is pure.
struct ModelSpec {
  std::string name;
  std::size_t param_count = 0;

  std::function<double(std::span<const double> theta, double x)> eval;

  // d f / d theta_j written into grad (length param_count). Empty means the
  // jacobian falls back to central finite differences.
  std::function<void(std::span<const double> theta, double x, std::span<double> grad)>
      gradient;

  // Admissible abscissa; empty means every finite x.
  std::function<bool(double x)> in_domain;

  bool linear_in_params = false;

  // Basis row phi(x) for families that are linear in their parameters
  // (f = theta . phi), used for exact least-squares initialization.
  std::function<void(double x, std::span<double> row)> basis;
};

// The eight built-in families: linear, quadratic, cubic, sinusoidal,
// logarithmic, exponential, gaussian, power.
const std::vector<ModelSpec>& builtin_models();
const ModelSpec* find_model(std::string_view name);
std::vector<std::string> builtin_model_names();

// Elementwise f(x_i; theta). Throws DomainError(i) for the first x_i outside
// the family's domain.
std::vector<double> evaluate(const ModelSpec& spec, std::span<const double> theta,
                             std::span<const double> x);

// len(x) x param_count matrix of partials; analytic when the family has one,
// otherwise central differences with step max(1e-6, 1e-6 |theta_j|).
Matrix jacobian(const ModelSpec& spec, std::span<const double> theta,
                std::span<const double> x);

// Family-specific starting point from the data; falls back to all ones when
// the heuristic is degenerate. d must be complete.
std::vector<double> default_init(const ModelSpec& spec, const Dataset& d);

}  // namespace curvefit
