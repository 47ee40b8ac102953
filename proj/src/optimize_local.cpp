#include "curvefit/optimize_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvefit/errors.hpp"
#include "curvefit/kernels.hpp"
#include "curvefit/linalg.hpp"

namespace curvefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_complete(const Dataset& d, const char* op) {
  if (d.has_missing()) {
    throw Error(ErrorKind::invalid_data,
                std::string(op) + " needs a complete dataset (impute or drop first)");
  }
}

double step_norm(std::span<const double> delta) {
  double s = 0.0;
  for (double v : delta) s += v * v;
  return std::sqrt(s);
}

struct Problem {
  const ModelSpec& spec;
  std::span<const double> x;
  std::span<const double> y;

  double loss(std::span<const double> theta) const {
    return rss_or_inf(spec, theta, x, y);
  }
};

FitResult run_levenberg_marquardt(const Problem& p, std::vector<double> theta,
                                  double loss, const LocalConfig& cfg) {
  FitResult result;
  result.method = method_name(LocalMethod::levenberg_marquardt);

  const std::size_t n = p.x.size();
  const std::size_t np = theta.size();
  double lambda = 1e-3;
  std::size_t it = 0;
  bool converged = false;

  while (it < cfg.max_iter) {
    ++it;
    const Matrix j = jacobian(p.spec, theta, p.x);
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = p.y[i] - p.spec.eval(theta, p.x[i]);
    }

    // Damped step: minimize ||J d - r||^2 + lambda ||d||^2 via the stacked
    // system [J; sqrt(lambda) I] d = [r; 0], solved by QR.
    Matrix stacked(n + np, np);
    std::vector<double> rhs(n + np, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < np; ++k) stacked(i, k) = j(i, k);
      rhs[i] = residual[i];
    }
    const double damping = std::sqrt(lambda);
    for (std::size_t k = 0; k < np; ++k) stacked(n + k, k) = damping;

    const std::vector<double> delta = lstsq(std::move(stacked), std::move(rhs)).solution;
    if (step_norm(delta) < cfg.step_tol) {
      converged = true;
      break;
    }

    std::vector<double> trial(np);
    for (std::size_t k = 0; k < np; ++k) trial[k] = theta[k] + delta[k];
    const double trial_loss = p.loss(trial);

    if (trial_loss < loss) {
      const double rel_change = (loss - trial_loss) / std::max(loss, 1e-300);
      theta = std::move(trial);
      loss = trial_loss;
      lambda = std::max(lambda / 10.0, 1e-12);
      if (rel_change < cfg.loss_tol) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;  // stalled; no acceptable step at any damping
    }
  }

  result.theta_hat = std::move(theta);
  result.loss = loss;
  result.iterations = it;
  result.converged = converged;
  return result;
}

FitResult run_nelder_mead(const Problem& p, std::vector<double> init, double init_loss,
                          const LocalConfig& cfg) {
  FitResult result;
  result.method = method_name(LocalMethod::nelder_mead);

  const std::size_t np = init.size();
  constexpr double reflection = 1.0;
  constexpr double expansion = 2.0;
  constexpr double contraction = 0.5;
  constexpr double shrink = 0.5;

  // Initial simplex: init plus one vertex per coordinate, displaced by 5% of
  // the coordinate (0.05 when it is zero).
  std::vector<std::vector<double>> vertex(np + 1, init);
  std::vector<double> value(np + 1);
  value[0] = init_loss;
  for (std::size_t k = 0; k < np; ++k) {
    const double step = init[k] != 0.0 ? 0.05 * std::fabs(init[k]) : 0.05;
    vertex[k + 1][k] += step;
    value[k + 1] = p.loss(vertex[k + 1]);
  }

  std::vector<std::size_t> order(np + 1);
  auto sort_order = [&] {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
  };

  std::size_t it = 0;
  bool converged = false;
  while (it < cfg.max_iter) {
    ++it;
    sort_order();
    const std::size_t best = order[0];
    const std::size_t worst = order[np];

    const double spread = value[worst] - value[best];
    if (spread <= cfg.loss_tol * (std::fabs(value[best]) + cfg.loss_tol)) {
      converged = true;
      break;
    }
    double diameter = 0.0;
    for (std::size_t i = 0; i <= np; ++i) {
      double dist = 0.0;
      for (std::size_t k = 0; k < np; ++k) {
        const double dv = vertex[i][k] - vertex[best][k];
        dist += dv * dv;
      }
      diameter = std::max(diameter, std::sqrt(dist));
    }
    if (diameter < cfg.step_tol) {
      converged = true;
      break;
    }

    // Centroid of all vertices except the worst.
    std::vector<double> centroid(np, 0.0);
    for (std::size_t i = 0; i <= np; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < np; ++k) centroid[k] += vertex[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(np);

    auto blend = [&](double t) {
      std::vector<double> pt(np);
      for (std::size_t k = 0; k < np; ++k) {
        pt[k] = centroid[k] + t * (centroid[k] - vertex[worst][k]);
      }
      return pt;
    };

    const std::vector<double> reflected = blend(reflection);
    const double f_reflected = p.loss(reflected);

    if (f_reflected < value[order[0]]) {
      const std::vector<double> expanded = blend(expansion);
      const double f_expanded = p.loss(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[order[np - 1]]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < value[worst];
    const std::vector<double> contracted = blend(outside ? contraction : -contraction);
    const double f_contracted = p.loss(contracted);
    if (f_contracted < std::min(f_reflected, value[worst])) {
      vertex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }

    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= np; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < np; ++k) {
        vertex[i][k] = vertex[best][k] + shrink * (vertex[i][k] - vertex[best][k]);
      }
      value[i] = p.loss(vertex[i]);
    }
  }

  sort_order();
  result.theta_hat = vertex[order[0]];
  result.loss = value[order[0]];
  result.iterations = it;
  result.converged = converged;
  return result;
}

FitResult run_gradient_descent(const Problem& p, std::vector<double> theta, double loss,
                               const LocalConfig& cfg) {
  FitResult result;
  result.method = method_name(LocalMethod::gradient_descent);

  constexpr double armijo = 1e-4;
  const std::size_t np = theta.size();
  std::size_t it = 0;
  bool converged = false;

  while (it < cfg.max_iter) {
    ++it;
    // gradient of RSS = -2 J^T r
    const Matrix j = jacobian(p.spec, theta, p.x);
    std::vector<double> residual(p.x.size());
    for (std::size_t i = 0; i < residual.size(); ++i) {
      residual[i] = p.y[i] - p.spec.eval(theta, p.x[i]);
    }
    std::vector<double> grad = matvec_transposed(j, residual);
    for (double& g : grad) g *= -2.0;

    double grad_sq = 0.0;
    for (double g : grad) grad_sq += g * g;
    if (std::sqrt(grad_sq) < cfg.step_tol) {
      converged = true;
      break;
    }

    // Backtracking line search along -grad.
    double t = 1.0;
    double trial_loss = kInf;
    std::vector<double> trial(np);
    bool accepted = false;
    while (t >= 1e-16) {
      for (std::size_t k = 0; k < np; ++k) trial[k] = theta[k] - t * grad[k];
      trial_loss = p.loss(trial);
      if (trial_loss <= loss - armijo * t * grad_sq) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no descent at machine-level steps

    const double rel_change = (loss - trial_loss) / std::max(loss, 1e-300);
    const double moved = t * std::sqrt(grad_sq);
    theta = trial;
    loss = trial_loss;
    if (rel_change < cfg.loss_tol || moved < cfg.step_tol) {
      converged = true;
      break;
    }
  }

  result.theta_hat = std::move(theta);
  result.loss = loss;
  result.iterations = it;
  result.converged = converged;
  return result;
}

}  // namespace

const char* method_name(LocalMethod method) {
  switch (method) {
    case LocalMethod::levenberg_marquardt:
      return "levenberg_marquardt";
    case LocalMethod::nelder_mead:
      return "nelder_mead";
    case LocalMethod::gradient_descent:
      return "gradient_descent";
  }
  return "unknown";
}

double rss(const ModelSpec& spec, std::span<const double> theta, const Dataset& d) {
  require_complete(d, "rss");
  const std::vector<double> predicted = evaluate(spec, theta, d.x);
  return kernels::sum_squared_diff(d.y, predicted);
}

double rss_or_inf(const ModelSpec& spec, std::span<const double> theta,
                  std::span<const double> x, std::span<const double> y) {
  for (double t : theta) {
    if (!std::isfinite(t)) return kInf;
  }
  if (spec.in_domain) {
    for (double xv : x) {
      if (!spec.in_domain(xv)) return kInf;
    }
  }
  const double total = kernels::sum_map(x.size(), [&](std::size_t i) {
    const double r = y[i] - spec.eval(theta, x[i]);
    return r * r;
  });
  return std::isfinite(total) ? total : kInf;
}

std::vector<double> rss_gradient(const ModelSpec& spec, std::span<const double> theta,
                                 const Dataset& d) {
  require_complete(d, "rss_gradient");
  const Matrix j = jacobian(spec, theta, d.x);
  std::vector<double> residual(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    residual[i] = d.y[i] - spec.eval(theta, d.x[i]);
  }
  std::vector<double> grad = matvec_transposed(j, residual);
  for (double& g : grad) g *= -2.0;
  return grad;
}

FitResult fit(const ModelSpec& spec, const Dataset& d, std::span<const double> init,
              const LocalConfig& cfg) {
  require_complete(d, "fit");
  if (init.size() != spec.param_count) {
    throw Error(ErrorKind::shape_mismatch, "init length does not match param_count");
  }
  for (double v : init) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::non_finite, "init holds a non-finite value");
    }
  }
  if (cfg.max_iter == 0 || cfg.loss_tol <= 0.0 || cfg.step_tol <= 0.0) {
    throw Error(ErrorKind::invalid_config, "max_iter and tolerances must be positive");
  }

  // The starting point is evaluated strictly: DomainError propagates and a
  // non-finite initial loss is an error. Later trial points degrade to +inf.
  const double init_loss = rss(spec, init, d);
  if (!std::isfinite(init_loss)) {
    throw Error(ErrorKind::non_finite, "loss is not finite at the initial guess");
  }

  const Problem p{spec, d.x, d.y};
  std::vector<double> theta(init.begin(), init.end());
  switch (cfg.method) {
    case LocalMethod::levenberg_marquardt:
      return run_levenberg_marquardt(p, std::move(theta), init_loss, cfg);
    case LocalMethod::nelder_mead:
      return run_nelder_mead(p, std::move(theta), init_loss, cfg);
    case LocalMethod::gradient_descent:
      return run_gradient_descent(p, std::move(theta), init_loss, cfg);
  }
  throw Error(ErrorKind::invalid_config, "unknown local method");
}

}  // namespace curvefit
