#include "curvefit/models.hpp"

#include <cmath>
#include <exception>
#include <mutex>

#include "curvefit/errors.hpp"
#include "curvefit/kernels.hpp"

namespace curvefit {

namespace {

bool positive_only(double x) { return x > 0.0; }

std::vector<ModelSpec> make_builtins() {
  std::vector<ModelSpec> models;

  {
    ModelSpec m;
    m.name = "linear";
    m.param_count = 2;
    m.eval = [](std::span<const double> t, double x) { return t[0] * x + t[1]; };
    m.gradient = [](std::span<const double>, double x, std::span<double> g) {
      g[0] = x;
      g[1] = 1.0;
    };
    m.linear_in_params = true;
    m.basis = [](double x, std::span<double> row) {
      row[0] = x;
      row[1] = 1.0;
    };
    models.push_back(std::move(m));
  }
  {
    ModelSpec m;
    m.name = "quadratic";
    m.param_count = 3;
    m.eval = [](std::span<const double> t, double x) {
      return (t[0] * x + t[1]) * x + t[2];
    };
    m.gradient = [](std::span<const double>, double x, std::span<double> g) {
      g[0] = x * x;
      g[1] = x;
      g[2] = 1.0;
    };
    m.linear_in_params = true;
    m.basis = [](double x, std::span<double> row) {
      row[0] = x * x;
      row[1] = x;
      row[2] = 1.0;
    };
    models.push_back(std::move(m));
  }
  {
    ModelSpec m;
    m.name = "cubic";
    m.param_count = 4;
    m.eval = [](std::span<const double> t, double x) {
      return ((t[0] * x + t[1]) * x + t[2]) * x + t[3];
    };
    m.gradient = [](std::span<const double>, double x, std::span<double> g) {
      g[0] = x * x * x;
      g[1] = x * x;
      g[2] = x;
      g[3] = 1.0;
    };
    m.linear_in_params = true;
    m.basis = [](double x, std::span<double> row) {
      row[0] = x * x * x;
      row[1] = x * x;
      row[2] = x;
      row[3] = 1.0;
    };
    models.push_back(std::move(m));
  }
  {
    ModelSpec m;
    m.name = "sinusoidal";
    m.param_count = 2;
    m.eval = [](std::span<const double> t, double x) {
      return t[0] * std::sin(x) + t[1] * std::cos(x);
    };
    m.gradient = [](std::span<const double>, double x, std::span<double> g) {
      g[0] = std::sin(x);
      g[1] = std::cos(x);
    };
    m.linear_in_params = true;
    m.basis = [](double x, std::span<double> row) {
      row[0] = std::sin(x);
      row[1] = std::cos(x);
    };
    models.push_back(std::move(m));
  }
  {
    ModelSpec m;
    m.name = "logarithmic";
    m.param_count = 2;
    m.eval = [](std::span<const double> t, double x) {
      return t[0] * std::log(x) + t[1];
    };
    m.gradient = [](std::span<const double>, double x, std::span<double> g) {
      g[0] = std::log(x);
      g[1] = 1.0;
    };
    m.in_domain = positive_only;
    m.linear_in_params = true;
    m.basis = [](double x, std::span<double> row) {
      row[0] = std::log(x);
      row[1] = 1.0;
    };
    models.push_back(std::move(m));
  }
  {
    ModelSpec m;
    m.name = "exponential";
    m.param_count = 2;
    m.eval = [](std::span<const double> t, double x) {
      return t[0] * std::exp(t[1] * x);
    };
    m.gradient = [](std::span<const double> t, double x, std::span<double> g) {
      const double e = std::exp(t[1] * x);
      g[0] = e;
      g[1] = t[0] * x * e;
    };
    models.push_back(std::move(m));
  }
  {
    // theta = (amplitude a, mean m, width s); only s^2 enters the value, so
    // the sign of s is free and no positivity constraint is needed.
    ModelSpec m;
    m.name = "gaussian";
    m.param_count = 3;
    m.eval = [](std::span<const double> t, double x) {
      const double z = x - t[1];
      return t[0] * std::exp(-z * z / (2.0 * t[2] * t[2]));
    };
    m.gradient = [](std::span<const double> t, double x, std::span<double> g) {
      const double z = x - t[1];
      const double s2 = t[2] * t[2];
      const double e = std::exp(-z * z / (2.0 * s2));
      g[0] = e;
      g[1] = t[0] * e * z / s2;
      g[2] = t[0] * e * z * z / (s2 * t[2]);
    };
    models.push_back(std::move(m));
  }
  {
    ModelSpec m;
    m.name = "power";
    m.param_count = 2;
    m.eval = [](std::span<const double> t, double x) {
      return t[0] * std::pow(x, t[1]);
    };
    m.gradient = [](std::span<const double> t, double x, std::span<double> g) {
      const double p = std::pow(x, t[1]);
      g[0] = p;
      g[1] = t[0] * p * std::log(x);
    };
    m.in_domain = positive_only;
    models.push_back(std::move(m));
  }

  return models;
}

void check_theta(const ModelSpec& spec, std::span<const double> theta) {
  if (theta.size() != spec.param_count) {
    throw Error(ErrorKind::shape_mismatch,
                "model '" + spec.name + "' takes " +
                    std::to_string(spec.param_count) + " parameters, got " +
                    std::to_string(theta.size()));
  }
}

// DomainError is raised here, serially, so the parallel map below never
// throws.
void check_domain(const ModelSpec& spec, std::span<const double> x) {
  if (!spec.in_domain) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!spec.in_domain(x[i])) {
      throw DomainError(i, "x[" + std::to_string(i) + "] = " + format_double(x[i]) +
                               " is outside the domain of '" + spec.name + "'");
    }
  }
}

}  // namespace

const std::vector<ModelSpec>& builtin_models() {
  static const std::vector<ModelSpec> models = make_builtins();
  return models;
}

const ModelSpec* find_model(std::string_view name) {
  for (const ModelSpec& m : builtin_models()) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const ModelSpec& m : builtin_models()) names.push_back(m.name);
  return names;
}

std::vector<double> evaluate(const ModelSpec& spec, std::span<const double> theta,
                             std::span<const double> x) {
  check_theta(spec, theta);
  check_domain(spec, x);
  std::vector<double> out(x.size(), 0.0);
  std::exception_ptr failure = nullptr;
  std::mutex failure_mutex;
  kernels::map_index(x.size(), [&](std::size_t i) {
    try {
      out[i] = spec.eval(theta, x[i]);
    } catch (...) {
      const std::scoped_lock lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return out;
}

Matrix jacobian(const ModelSpec& spec, std::span<const double> theta,
                std::span<const double> x) {
  check_theta(spec, theta);
  check_domain(spec, x);
  Matrix j(x.size(), spec.param_count);
  std::exception_ptr failure = nullptr;
  std::mutex failure_mutex;

  if (spec.gradient) {
    kernels::map_index(x.size(), [&](std::size_t i) {
      try {
        spec.gradient(theta, x[i], j.row(i));
      } catch (...) {
        const std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  } else {
    const std::vector<double> base(theta.begin(), theta.end());
    for (std::size_t p = 0; p < spec.param_count; ++p) {
      const double h = std::max(1e-6, 1e-6 * std::fabs(base[p]));
      std::vector<double> plus = base;
      std::vector<double> minus = base;
      plus[p] += h;
      minus[p] -= h;
      kernels::map_index(x.size(), [&](std::size_t i) {
        try {
          j(i, p) = (spec.eval(plus, x[i]) - spec.eval(minus, x[i])) / (2.0 * h);
        } catch (...) {
          const std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
      if (failure) break;
    }
  }
  if (failure) std::rethrow_exception(failure);
  return j;
}

namespace {

bool all_finite(std::span<const double> v) {
  for (double e : v) {
    if (!std::isfinite(e)) return false;
  }
  return true;
}

// Exact least squares in the family's own basis; empty on any failure.
std::vector<double> basis_least_squares(const ModelSpec& spec, const Dataset& d) {
  if (spec.in_domain) {
    for (double xv : d.x) {
      if (!spec.in_domain(xv)) return {};
    }
  }
  Matrix phi(d.size(), spec.param_count);
  for (std::size_t i = 0; i < d.size(); ++i) spec.basis(d.x[i], phi.row(i));
  std::vector<double> theta = lstsq(std::move(phi), d.y).solution;
  if (!all_finite(theta)) return {};
  return theta;
}

std::vector<double> log_linear_init(const Dataset& d) {
  // ln|y| = ln|a| + b x on the rows with y != 0; the sign of the dominant y
  // is carried onto a.
  std::vector<double> xs;
  std::vector<double> logs;
  double dominant_y = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::fabs(d.y[i]) > std::fabs(dominant_y)) dominant_y = d.y[i];
    if (d.y[i] != 0.0) {
      xs.push_back(d.x[i]);
      logs.push_back(std::log(std::fabs(d.y[i])));
    }
  }
  if (xs.size() < 2 || dominant_y == 0.0) return {};
  Matrix phi(xs.size(), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    phi(i, 0) = xs[i];
    phi(i, 1) = 1.0;
  }
  const std::vector<double> coef = lstsq(std::move(phi), logs).solution;
  const double a = std::copysign(std::exp(coef[1]), dominant_y);
  const std::vector<double> theta{a, coef[0]};
  if (!all_finite(theta)) return {};
  return theta;
}

std::vector<double> log_log_init(const Dataset& d) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.x[i] > 0.0 && d.y[i] > 0.0) {
      lx.push_back(std::log(d.x[i]));
      ly.push_back(std::log(d.y[i]));
    }
  }
  if (lx.size() < 2) return {};
  Matrix phi(lx.size(), 2);
  for (std::size_t i = 0; i < lx.size(); ++i) {
    phi(i, 0) = lx[i];
    phi(i, 1) = 1.0;
  }
  const std::vector<double> coef = lstsq(std::move(phi), ly).solution;
  const std::vector<double> theta{std::exp(coef[1]), coef[0]};
  if (!all_finite(theta)) return {};
  return theta;
}

std::vector<double> gaussian_init(const Dataset& d) {
  std::size_t peak = 0;
  double max_abs = -1.0;
  double max_y = d.y[0];
  double mean_x = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (std::fabs(d.y[i]) > max_abs) {
      max_abs = std::fabs(d.y[i]);
      peak = i;
    }
    max_y = std::max(max_y, d.y[i]);
    mean_x += d.x[i];
  }
  mean_x /= static_cast<double>(d.size());
  double ss = 0.0;
  for (double xv : d.x) ss += (xv - mean_x) * (xv - mean_x);
  const double s = d.size() > 1
                       ? std::sqrt(ss / static_cast<double>(d.size() - 1))
                       : 0.0;
  if (s == 0.0) return {};
  const std::vector<double> theta{max_y, d.x[peak], s};
  if (!all_finite(theta)) return {};
  return theta;
}

}  // namespace

std::vector<double> default_init(const ModelSpec& spec, const Dataset& d) {
  if (d.has_missing()) {
    throw Error(ErrorKind::invalid_data, "default_init needs a complete dataset");
  }
  std::vector<double> theta;
  try {
    if (spec.linear_in_params && spec.basis) {
      theta = basis_least_squares(spec, d);
    } else if (spec.name == "exponential") {
      theta = log_linear_init(d);
    } else if (spec.name == "power") {
      theta = log_log_init(d);
    } else if (spec.name == "gaussian") {
      theta = gaussian_init(d);
    }
  } catch (const Error&) {
    theta.clear();
  }
  if (theta.size() != spec.param_count) {
    theta.assign(spec.param_count, 1.0);
  }
  return theta;
}

}  // namespace curvefit
