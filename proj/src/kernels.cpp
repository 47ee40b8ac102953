#include "curvefit/kernels.hpp"

namespace curvefit::kernels {

namespace serial {

double sum(std::span<const double> v) {
  return sum_map(v.size(), [&](std::size_t i) { return v[i]; });
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  return sum_map(a.size(), [&](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

}  // namespace serial

double sum(std::span<const double> v) {
  return sum_map(v.size(), [&](std::size_t i) { return v[i]; });
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  return sum_map(a.size(), [&](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

}  // namespace curvefit::kernels
