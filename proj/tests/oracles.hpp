// Independent reference implementations used by the tests. These stay
// deliberately naive (plain loops, Gaussian elimination, Jacobi rotations)
// so they share no code path with the library.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

inline double sum(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s;
}

inline double mean(std::span<const double> v) {
  return sum(v) / static_cast<double>(v.size());
}

inline double rss(std::span<const double> y, std::span<const double> y_hat) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - y_hat[i];
    s += d * d;
  }
  return s;
}

inline double r_squared(std::span<const double> y, std::span<const double> y_hat) {
  const double m = mean(y);
  double tss = 0.0;
  for (double v : y) tss += (v - m) * (v - m);
  return 1.0 - rss(y, y_hat) / tss;
}

struct NaiveStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

inline NaiveStats naive_stats(std::span<const double> v) {
  NaiveStats s;
  const double n = static_cast<double>(v.size());
  s.mean = mean(v);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double e : v) {
    const double d = e - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  s.std_dev = v.size() > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
  const double pop_var = m2 / n;
  if (pop_var > 0.0) {
    s.skewness = (m3 / n) / std::pow(pop_var, 1.5);
    s.excess_kurtosis = (m4 / n) / (pop_var * pop_var) - 3.0;
  }
  return s;
}

// Dense column-major-free helpers over std::vector<std::vector<double>> rows.
using Rows = std::vector<std::vector<double>>;

inline Rows transpose(const Rows& a) {
  Rows t(a[0].size(), std::vector<double>(a.size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

inline Rows multiply(const Rows& a, const Rows& b) {
  Rows c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

inline std::vector<double> multiply_vec(const Rows& a, std::span<const double> x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

// Symmetric eigendecomposition by cyclic Jacobi rotations; a is overwritten
// with the eigenvalues on its diagonal, v holds the eigenvectors as columns.
inline void jacobi_eigen(Rows& a, Rows& v) {
  const std::size_t n = a.size();
  v.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

// Minimum-norm least-squares solution via the pseudoinverse of the Gram
// matrix: x = V (S^2)^+ V^T A^T b.
inline std::vector<double> pinv_lstsq(const Rows& a, std::span<const double> b) {
  const Rows at = transpose(a);
  Rows gram = multiply(at, a);
  Rows v;
  jacobi_eigen(gram, v);
  const std::size_t p = gram.size();

  double max_eig = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_eig = std::max(max_eig, gram[i][i]);

  const std::vector<double> atb = multiply_vec(at, b);
  std::vector<double> vt_atb(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < p; ++k) vt_atb[i] += v[k][i] * atb[k];
  }
  for (std::size_t i = 0; i < p; ++i) {
    vt_atb[i] = gram[i][i] > 1e-12 * max_eig ? vt_atb[i] / gram[i][i] : 0.0;
  }
  std::vector<double> x(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < p; ++i) x[k] += v[k][i] * vt_atb[i];
  }
  return x;
}

// Gaussian elimination with partial pivoting for small square systems.
inline std::vector<double> gauss_solve(Rows a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(a[i][k]) > std::fabs(a[pivot][k])) pivot = i;
    }
    std::swap(a[k], a[pivot]);
    std::swap(b[k], b[pivot]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t kk = n; kk > 0; --kk) {
    const std::size_t k = kk - 1;
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

// Savitzky-Golay weights straight from the unscaled normal equations: the
// value at offset t of the degree-d least-squares polynomial over offsets
// -w..w equals A (A^T A)^{-1} b(t) dotted with the window values.
inline std::vector<double> sg_weights(std::size_t half_window, std::size_t degree,
                                      long long offset) {
  const std::size_t window = 2 * half_window + 1;
  const std::size_t terms = degree + 1;
  Rows a(window, std::vector<double>(terms, 0.0));
  for (std::size_t i = 0; i < window; ++i) {
    const double k = static_cast<double>(i) - static_cast<double>(half_window);
    double p = 1.0;
    for (std::size_t j = 0; j < terms; ++j) {
      a[i][j] = p;
      p *= k;
    }
  }
  Rows gram = multiply(transpose(a), a);
  std::vector<double> rhs(terms, 0.0);
  double p = 1.0;
  for (std::size_t j = 0; j < terms; ++j) {
    rhs[j] = p;
    p *= static_cast<double>(offset);
  }
  const std::vector<double> z = gauss_solve(std::move(gram), std::move(rhs));
  std::vector<double> weights(window, 0.0);
  for (std::size_t i = 0; i < window; ++i) {
    for (std::size_t j = 0; j < terms; ++j) weights[i] += a[i][j] * z[j];
  }
  return weights;
}

}  // namespace oracle
