#include "curvefit/smooth.hpp"

#include <cmath>

#include "curvefit/errors.hpp"
#include "curvefit/kernels.hpp"
#include "curvefit/linalg.hpp"

namespace curvefit {

namespace {

void check_config(const SGConfig& cfg) {
  if (cfg.half_window == 0) {
    throw Error(ErrorKind::invalid_config, "half_window must be positive");
  }
  if (cfg.degree > 2 * cfg.half_window) {
    throw Error(ErrorKind::invalid_config,
                "degree must not exceed 2 * half_window (the local fit would be "
                "underdetermined)");
  }
}

}  // namespace

std::vector<double> sg_eval_weights(const SGConfig& cfg, long long offset) {
  check_config(cfg);
  const long long w = static_cast<long long>(cfg.half_window);
  if (offset < -w || offset > w) {
    throw Error(ErrorKind::invalid_config, "offset outside the window");
  }
  const std::size_t window = 2 * cfg.half_window + 1;
  const std::size_t terms = cfg.degree + 1;

  // Vandermonde in the scaled offset k/w, which keeps the normal equations
  // well conditioned for wide windows. The fitted value at offset t is
  // b(t)^T (A^T A)^{-1} A^T y, i.e. the convolution with A (A^T A)^{-1} b(t).
  Matrix a(window, terms);
  for (std::size_t i = 0; i < window; ++i) {
    const double k = (static_cast<double>(i) - static_cast<double>(w)) /
                     static_cast<double>(w);
    double p = 1.0;
    for (std::size_t j = 0; j < terms; ++j) {
      a(i, j) = p;
      p *= k;
    }
  }
  Matrix gram(terms, terms);
  for (std::size_t r = 0; r < terms; ++r) {
    for (std::size_t c = 0; c < terms; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < window; ++i) s += a(i, r) * a(i, c);
      gram(r, c) = s;
    }
  }
  std::vector<double> rhs(terms, 0.0);
  const double t = static_cast<double>(offset) / static_cast<double>(w);
  double p = 1.0;
  for (std::size_t j = 0; j < terms; ++j) {
    rhs[j] = p;
    p *= t;
  }
  const std::vector<double> z = lstsq(std::move(gram), std::move(rhs)).solution;

  std::vector<double> weights(window, 0.0);
  for (std::size_t i = 0; i < window; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < terms; ++j) s += a(i, j) * z[j];
    weights[i] = s;
  }
  return weights;
}

SGWeights sg_coefficients(const SGConfig& cfg) {
  return SGWeights{sg_eval_weights(cfg, 0)};
}

std::vector<double> savitzky_golay(std::span<const double> y, const SGConfig& cfg) {
  check_config(cfg);
  const std::size_t n = y.size();
  const std::size_t w = cfg.half_window;
  const std::size_t window = 2 * w + 1;
  if (n < window) {
    throw Error(ErrorKind::too_short,
                "series of length " + std::to_string(n) + " is shorter than the " +
                    std::to_string(window) + "-point window");
  }

  const std::vector<double> center = sg_eval_weights(cfg, 0);
  std::vector<double> out(n, 0.0);

  // Interior convolution; each output depends only on its own window.
  kernels::map_index(n - 2 * w, [&](std::size_t k) {
    const std::size_t j = k + w;
    double s = 0.0;
    for (std::size_t i = 0; i < window; ++i) s += center[i] * y[j - w + i];
    out[j] = s;
  });

  // Edges: evaluate the first/last window's fit at the edge point's offset.
  for (std::size_t j = 0; j < w; ++j) {
    const long long offset = static_cast<long long>(j) - static_cast<long long>(w);
    const std::vector<double> weights = sg_eval_weights(cfg, offset);
    double s = 0.0;
    for (std::size_t i = 0; i < window; ++i) s += weights[i] * y[i];
    out[j] = s;
  }
  for (std::size_t j = n - w; j < n; ++j) {
    const long long offset =
        static_cast<long long>(j) - static_cast<long long>(n - 1 - w);
    const std::vector<double> weights = sg_eval_weights(cfg, offset);
    double s = 0.0;
    for (std::size_t i = 0; i < window; ++i) s += weights[i] * y[n - window + i];
    out[j] = s;
  }
  return out;
}

}  // namespace curvefit
