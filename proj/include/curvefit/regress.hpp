#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "curvefit/linalg.hpp"
#include "curvefit/metrics.hpp"
#include "curvefit/models.hpp"

namespace curvefit {

// Basis expansion for linear regression; the design matrix always carries an
// intercept as column 0. exponential_link and power_link are not linear in
// their parameters and are fitted through the matching nonlinear family
// instead of a design matrix.
struct BasisSpec {
  enum class Kind { polynomial, sinusoidal, logarithmic, exponential_link, power_link, custom };

  Kind kind = Kind::polynomial;
  std::size_t degree = 1;     // polynomial; at most 10
  std::size_t harmonics = 1;  // sinusoidal; at most 10
  std::vector<std::pair<std::string, std::function<double(double)>>> functions;

  std::size_t column_count() const;  // p + 1 including the intercept
  std::string name() const;
};

Matrix design_matrix(const BasisSpec& basis, std::span<const double> x);

// theta minimizing ||y - phi theta||^2 via pivoted QR; rank-deficient
// systems give the minimum-norm solution.
std::vector<double> ols_fit(const Matrix& phi, std::span<const double> y);

// Adds lambda ||theta_1..||^2; column 0 (the intercept) is never penalized.
std::vector<double> ridge_fit(const Matrix& phi, std::span<const double> y,
                              double lambda);

struct LassoResult {
  std::vector<double> theta;  // original column scale
  bool converged = true;
  std::size_t sweeps = 0;
};

// Elastic net (1/2n) ||y - phi theta||^2 + lambda (alpha |theta_1..|_1 +
// (1-alpha)/2 ||theta_1..||^2) by cyclic coordinate descent on standardized
// columns. alpha = 1 is the lasso. Convergence flag is false when the sweep
// budget (10000) runs out; the result is still returned.
LassoResult lasso_fit(const Matrix& phi, std::span<const double> y, double lambda,
                      double alpha = 1.0);

struct Candidate {
  std::string name;
  std::variant<BasisSpec, ModelSpec> form;

  // Builtin family name ("linear", "quadratic", ... "power").
  static Candidate from_name(std::string_view name);
};

struct SelectionEntry {
  std::string name;
  std::vector<double> params;
  Metrics metrics;
  std::optional<double> adj_r_squared;
  std::size_t param_count = 0;
  std::string error;  // non-empty when the candidate failed to fit
};

// Fits every candidate (linear-in-parameter forms by OLS, nonlinear families
// by local fitting from the default init) and ranks by adjusted R^2,
// descending. Ties within 1e-9 go to the fewer-parameter model, then to
// candidate order. Candidates that fail keep an error note and rank last.
std::vector<SelectionEntry> select_model(std::span<const double> x,
                                         std::span<const double> y,
                                         const std::vector<Candidate>& candidates);

}  // namespace curvefit
