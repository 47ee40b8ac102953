#include "curvefit/regress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvefit/errors.hpp"
#include "curvefit/optimize_local.hpp"

namespace curvefit {

namespace {

constexpr std::size_t max_polynomial_degree = 10;
constexpr std::size_t max_harmonics = 10;
constexpr std::size_t max_lasso_sweeps = 10000;
constexpr double lasso_tol = 1e-8;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

void check_design_shapes(const Matrix& phi, std::span<const double> y) {
  if (phi.rows() != y.size()) {
    throw Error(ErrorKind::shape_mismatch, "design rows and y length differ");
  }
  if (phi.rows() < phi.cols()) {
    throw Error(ErrorKind::shape_mismatch,
                "underdetermined design (" + std::to_string(phi.rows()) + " rows, " +
                    std::to_string(phi.cols()) + " columns)");
  }
}

}  // namespace

std::size_t BasisSpec::column_count() const {
  switch (kind) {
    case Kind::polynomial:
      return degree + 1;
    case Kind::sinusoidal:
      return 2 * harmonics + 1;
    case Kind::logarithmic:
      return 2;
    case Kind::custom:
      return functions.size() + 1;
    case Kind::exponential_link:
    case Kind::power_link:
      return 2;
  }
  return 0;
}

std::string BasisSpec::name() const {
  switch (kind) {
    case Kind::polynomial:
      return "polynomial(" + std::to_string(degree) + ")";
    case Kind::sinusoidal:
      return "sinusoidal(" + std::to_string(harmonics) + ")";
    case Kind::logarithmic:
      return "logarithmic";
    case Kind::exponential_link:
      return "exponential";
    case Kind::power_link:
      return "power";
    case Kind::custom:
      return "custom";
  }
  return "?";
}

Matrix design_matrix(const BasisSpec& basis, std::span<const double> x) {
  switch (basis.kind) {
    case BasisSpec::Kind::polynomial: {
      if (basis.degree > max_polynomial_degree) {
        throw Error(ErrorKind::invalid_config, "polynomial degree capped at 10");
      }
      Matrix phi(x.size(), basis.degree + 1);
      for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j <= basis.degree; ++j) {
          phi(i, j) = p;
          p *= x[i];
        }
      }
      return phi;
    }
    case BasisSpec::Kind::sinusoidal: {
      if (basis.harmonics == 0 || basis.harmonics > max_harmonics) {
        throw Error(ErrorKind::invalid_config, "harmonics must lie in 1..10");
      }
      Matrix phi(x.size(), 2 * basis.harmonics + 1);
      for (std::size_t i = 0; i < x.size(); ++i) {
        phi(i, 0) = 1.0;
        for (std::size_t h = 1; h <= basis.harmonics; ++h) {
          phi(i, 2 * h - 1) = std::sin(static_cast<double>(h) * x[i]);
          phi(i, 2 * h) = std::cos(static_cast<double>(h) * x[i]);
        }
      }
      return phi;
    }
    case BasisSpec::Kind::logarithmic: {
      Matrix phi(x.size(), 2);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) {
          throw DomainError(i, "logarithmic basis needs x > 0");
        }
        phi(i, 0) = 1.0;
        phi(i, 1) = std::log(x[i]);
      }
      return phi;
    }
    case BasisSpec::Kind::custom: {
      Matrix phi(x.size(), basis.functions.size() + 1);
      for (std::size_t i = 0; i < x.size(); ++i) {
        phi(i, 0) = 1.0;
        for (std::size_t j = 0; j < basis.functions.size(); ++j) {
          const double v = basis.functions[j].second(x[i]);
          if (!std::isfinite(v)) {
            throw DomainError(i, "custom basis function '" + basis.functions[j].first +
                                     "' is not finite at x[" + std::to_string(i) + "]");
          }
          phi(i, j + 1) = v;
        }
      }
      return phi;
    }
    case BasisSpec::Kind::exponential_link:
    case BasisSpec::Kind::power_link:
      throw Error(ErrorKind::invalid_config,
                  "link bases are not linear in their parameters; fit them through "
                  "the matching model family");
  }
  throw Error(ErrorKind::invalid_config, "unknown basis kind");
}

std::vector<double> ols_fit(const Matrix& phi, std::span<const double> y) {
  check_design_shapes(phi, y);
  Matrix a = phi;
  return lstsq(std::move(a), std::vector<double>(y.begin(), y.end())).solution;
}

std::vector<double> ridge_fit(const Matrix& phi, std::span<const double> y,
                              double lambda) {
  check_design_shapes(phi, y);
  if (lambda < 0.0) {
    throw Error(ErrorKind::invalid_config, "lambda must be non-negative");
  }
  const std::size_t n = phi.rows();
  const std::size_t p = phi.cols();
  // Augmented system [phi; sqrt(lambda) I_slopes] against [y; 0]; the row for
  // the intercept column stays zero, leaving it unpenalized.
  Matrix a(n + p - 1, p);
  std::vector<double> b(n + p - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) a(i, j) = phi(i, j);
    b[i] = y[i];
  }
  const double damping = std::sqrt(lambda);
  for (std::size_t j = 1; j < p; ++j) a(n + j - 1, j) = damping;
  return lstsq(std::move(a), std::move(b)).solution;
}

LassoResult lasso_fit(const Matrix& phi, std::span<const double> y, double lambda,
                      double alpha) {
  check_design_shapes(phi, y);
  if (lambda < 0.0 || alpha < 0.0 || alpha > 1.0) {
    throw Error(ErrorKind::invalid_config, "need lambda >= 0 and alpha in [0, 1]");
  }
  const std::size_t n = phi.rows();
  const std::size_t p = phi.cols();
  const double dn = static_cast<double>(n);

  // Standardize the slope columns (population std); constant columns are
  // frozen at zero. Coordinates are mapped back to the original scale at
  // the end.
  std::vector<double> mu(p, 0.0);
  std::vector<double> sigma(p, 0.0);
  for (std::size_t j = 1; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += phi(i, j);
    mu[j] = s / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = phi(i, j) - mu[j];
      ss += c * c;
    }
    sigma[j] = std::sqrt(ss / dn);
  }

  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) y_mean += y[i];
  y_mean /= dn;

  Matrix xs(n, p);  // standardized slope columns; column 0 unused
  for (std::size_t j = 1; j < p; ++j) {
    if (sigma[j] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) xs(i, j) = (phi(i, j) - mu[j]) / sigma[j];
  }

  std::vector<double> beta(p, 0.0);  // standardized-scale slopes
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - y_mean;

  const double l1 = lambda * alpha;
  const double l2 = lambda * (1.0 - alpha);

  LassoResult result;
  result.converged = false;
  std::size_t sweep = 0;
  while (sweep < max_lasso_sweeps) {
    ++sweep;
    double max_delta = 0.0;
    for (std::size_t j = 1; j < p; ++j) {
      if (sigma[j] == 0.0) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += xs(i, j) * residual[i];
      const double rho = beta[j] + dot / dn;
      const double updated = soft_threshold(rho, l1) / (1.0 + l2);
      const double delta = updated - beta[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * xs(i, j);
        beta[j] = updated;
        max_delta = std::max(max_delta, std::fabs(delta));
      }
    }
    if (max_delta < lasso_tol) {
      result.converged = true;
      break;
    }
  }
  result.sweeps = sweep;

  result.theta.assign(p, 0.0);
  double intercept = y_mean;
  for (std::size_t j = 1; j < p; ++j) {
    if (sigma[j] == 0.0) continue;
    result.theta[j] = beta[j] / sigma[j];
    intercept -= beta[j] * mu[j] / sigma[j];
  }
  result.theta[0] = intercept;
  return result;
}

Candidate Candidate::from_name(std::string_view name) {
  const ModelSpec* spec = find_model(name);
  if (!spec) {
    throw Error(ErrorKind::invalid_config,
                "unknown candidate '" + std::string(name) + "'");
  }
  return Candidate{spec->name, *spec};
}

namespace {

SelectionEntry fit_candidate(const Candidate& candidate, std::span<const double> x,
                             std::span<const double> y) {
  SelectionEntry entry;
  entry.name = candidate.name;

  std::vector<double> predicted;
  if (const BasisSpec* basis = std::get_if<BasisSpec>(&candidate.form)) {
    if (basis->kind == BasisSpec::Kind::exponential_link ||
        basis->kind == BasisSpec::Kind::power_link) {
      const char* family =
          basis->kind == BasisSpec::Kind::exponential_link ? "exponential" : "power";
      Candidate relay{entry.name, *find_model(family)};
      return fit_candidate(relay, x, y);
    }
    const Matrix phi = design_matrix(*basis, x);
    entry.params = ols_fit(phi, y);
    entry.param_count = phi.cols();
    predicted = matvec(phi, entry.params);
  } else {
    const ModelSpec& spec = std::get<ModelSpec>(candidate.form);
    entry.param_count = spec.param_count;
    if (spec.linear_in_params && spec.basis) {
      Matrix phi(x.size(), spec.param_count);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (spec.in_domain && !spec.in_domain(x[i])) {
          throw DomainError(i, "x outside the domain of '" + spec.name + "'");
        }
        spec.basis(x[i], phi.row(i));
      }
      entry.params = ols_fit(phi, y);
      predicted = matvec(phi, entry.params);
    } else {
      const Dataset d = Dataset::from_complete(std::vector<double>(x.begin(), x.end()),
                                               std::vector<double>(y.begin(), y.end()));
      const std::vector<double> init = default_init(spec, d);
      const FitResult fitted = fit(spec, d, init, LocalConfig{});
      entry.params = fitted.theta_hat;
      predicted = evaluate(spec, entry.params, x);
    }
  }

  entry.metrics = model_analysis(y, predicted);
  if (entry.metrics.r_squared) {
    // p counts parameters beyond the level term.
    const double nn = static_cast<double>(y.size());
    const double p = static_cast<double>(entry.param_count) - 1.0;
    if (nn - p - 1.0 > 0.0) {
      entry.adj_r_squared =
          1.0 - (1.0 - *entry.metrics.r_squared) * (nn - 1.0) / (nn - p - 1.0);
    }
  }
  return entry;
}

}  // namespace

std::vector<SelectionEntry> select_model(std::span<const double> x,
                                         std::span<const double> y,
                                         const std::vector<Candidate>& candidates) {
  if (candidates.empty()) {
    throw Error(ErrorKind::invalid_data, "no candidates given");
  }
  if (x.size() != y.size()) {
    throw Error(ErrorKind::shape_mismatch, "x and y differ in length");
  }
  std::size_t largest = 0;
  for (const Candidate& c : candidates) {
    const std::size_t np = std::holds_alternative<BasisSpec>(c.form)
                               ? std::get<BasisSpec>(c.form).column_count()
                               : std::get<ModelSpec>(c.form).param_count;
    largest = std::max(largest, np);
  }
  if (x.size() < largest + 2) {
    throw Error(ErrorKind::insufficient_data,
                "need at least " + std::to_string(largest + 2) + " points for these "
                "candidates, got " + std::to_string(x.size()));
  }

  std::vector<SelectionEntry> entries;
  entries.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    try {
      entries.push_back(fit_candidate(c, x, y));
    } catch (const Error& err) {
      SelectionEntry failed;
      failed.name = c.name;
      failed.error = err.what();
      failed.param_count = std::holds_alternative<BasisSpec>(c.form)
                               ? std::get<BasisSpec>(c.form).column_count()
                               : std::get<ModelSpec>(c.form).param_count;
      entries.push_back(std::move(failed));
    }
  }

  std::vector<std::size_t> index(entries.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::stable_sort(index.begin(), index.end(), [&](std::size_t ia, std::size_t ib) {
    const SelectionEntry& a = entries[ia];
    const SelectionEntry& b = entries[ib];
    if (a.adj_r_squared.has_value() != b.adj_r_squared.has_value()) {
      return a.adj_r_squared.has_value();
    }
    if (!a.adj_r_squared) return false;
    if (*a.adj_r_squared > *b.adj_r_squared + 1e-9) return true;
    if (*b.adj_r_squared > *a.adj_r_squared + 1e-9) return false;
    return a.param_count < b.param_count;
  });

  std::vector<SelectionEntry> ranked;
  ranked.reserve(entries.size());
  for (std::size_t i : index) ranked.push_back(std::move(entries[i]));
  return ranked;
}

}  // namespace curvefit
