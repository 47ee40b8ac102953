#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curvefit {

// Savitzky-Golay configuration: the window spans 2 * half_window + 1 points
// and carries a local polynomial of the given degree.
struct SGConfig {
  std::size_t half_window = 2;
  std::size_t degree = 2;
};

struct SGWeights {
  std::vector<double> coefficients;  // offsets -w..w
};

// Convolution weights reproducing the degree-d least-squares fit over the
// window, evaluated at the center. Sum to 1 and are symmetric.
SGWeights sg_coefficients(const SGConfig& cfg);

// Weights evaluating the same local fit at window offset t in [-w, w];
// offset 0 recovers sg_coefficients.
std::vector<double> sg_eval_weights(const SGConfig& cfg, long long offset);

// Smooths y on a uniform grid. Interior points are the central convolution;
// each edge point is the nearest full window's polynomial evaluated at that
// point's own offset, so polynomials of degree <= d pass through unchanged.
std::vector<double> savitzky_golay(std::span<const double> y, const SGConfig& cfg);

}  // namespace curvefit
