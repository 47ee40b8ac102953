#include "curvefit/linalg.hpp"

#include <cmath>
#include <numeric>

#include "curvefit/errors.hpp"

namespace curvefit {

namespace {

// Packed Householder QR. Reflectors live below the diagonal of `a`
// (normalized so the head entry is 1), R on and above it.
struct QrFactors {
  Matrix a;
  std::vector<double> tau;
  std::vector<std::size_t> perm;  // column j of the factored matrix is column perm[j] of the input
};

// One Householder step on column k, rows k..m-1. Returns the new diagonal.
double make_reflector(Matrix& a, std::vector<double>& tau, std::size_t k) {
  const std::size_t m = a.rows();
  double norm_sq = 0.0;
  for (std::size_t i = k; i < m; ++i) norm_sq += a(i, k) * a(i, k);
  const double sigma = std::sqrt(norm_sq);
  if (sigma == 0.0) {
    tau[k] = 0.0;
    return 0.0;
  }
  const double alpha = a(k, k);
  const double beta = -std::copysign(sigma, alpha);
  const double v0 = alpha - beta;
  for (std::size_t i = k + 1; i < m; ++i) a(i, k) /= v0;
  tau[k] = (beta - alpha) / beta;
  a(k, k) = beta;
  return beta;
}

// Applies H_k = I - tau_k v v^T (v packed in column k) to columns j0..n-1.
void apply_reflector(Matrix& a, const std::vector<double>& tau, std::size_t k,
                     std::size_t j0) {
  if (tau[k] == 0.0) return;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  for (std::size_t j = j0; j < n; ++j) {
    double s = a(k, j);
    for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
    s *= tau[k];
    a(k, j) -= s;
    for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= s * a(i, k);
  }
}

QrFactors qr_pivoted(Matrix a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t steps = std::min(m, n);
  QrFactors f{std::move(a), std::vector<double>(steps, 0.0),
              std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

  for (std::size_t k = 0; k < steps; ++k) {
    // Column norms are recomputed each step; the matrices here are small and
    // this avoids the classic downdating instability.
    std::size_t pivot = k;
    double best = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += f.a(i, j) * f.a(i, j);
      if (s > best) {
        best = s;
        pivot = j;
      }
    }
    if (pivot != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(f.a(i, k), f.a(i, pivot));
      std::swap(f.perm[k], f.perm[pivot]);
    }
    make_reflector(f.a, f.tau, k);
    apply_reflector(f.a, f.tau, k, k + 1);
  }
  return f;
}

QrFactors qr_plain(Matrix a) {
  const std::size_t steps = std::min(a.rows(), a.cols());
  QrFactors f{std::move(a), std::vector<double>(steps, 0.0), {}};
  for (std::size_t k = 0; k < steps; ++k) {
    make_reflector(f.a, f.tau, k);
    apply_reflector(f.a, f.tau, k, k + 1);
  }
  return f;
}

// b <- Q^T b.
void apply_qt(const QrFactors& f, std::vector<double>& b) {
  const std::size_t m = f.a.rows();
  for (std::size_t k = 0; k < f.tau.size(); ++k) {
    if (f.tau[k] == 0.0) continue;
    double s = b[k];
    for (std::size_t i = k + 1; i < m; ++i) s += f.a(i, k) * b[i];
    s *= f.tau[k];
    b[k] -= s;
    for (std::size_t i = k + 1; i < m; ++i) b[i] -= s * f.a(i, k);
  }
}

// b <- Q b (reflectors applied in reverse).
void apply_q(const QrFactors& f, std::vector<double>& b) {
  const std::size_t m = f.a.rows();
  for (std::size_t kk = f.tau.size(); kk > 0; --kk) {
    const std::size_t k = kk - 1;
    if (f.tau[k] == 0.0) continue;
    double s = b[k];
    for (std::size_t i = k + 1; i < m; ++i) s += f.a(i, k) * b[i];
    s *= f.tau[k];
    b[k] -= s;
    for (std::size_t i = k + 1; i < m; ++i) b[i] -= s * f.a(i, k);
  }
}

std::size_t numeric_rank(const QrFactors& f, double rank_tol) {
  const double head = std::fabs(f.a(0, 0));
  if (head == 0.0) return 0;
  std::size_t r = 0;
  while (r < f.tau.size() && std::fabs(f.a(r, r)) > rank_tol * head) ++r;
  return r;
}

}  // namespace

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw Error(ErrorKind::shape_mismatch, "matvec: dimension mismatch");
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> matvec_transposed(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) {
    throw Error(ErrorKind::shape_mismatch, "matvec_transposed: dimension mismatch");
  }
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  }
  return y;
}

LstsqResult lstsq(Matrix a, std::vector<double> b, double rank_tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) {
    throw Error(ErrorKind::shape_mismatch,
                "lstsq: rhs length does not match row count");
  }
  if (m == 0 || n == 0) {
    throw Error(ErrorKind::shape_mismatch, "lstsq: empty system");
  }

  QrFactors f = qr_pivoted(std::move(a));
  apply_qt(f, b);
  const std::size_t r = numeric_rank(f, rank_tol);

  LstsqResult result;
  result.rank = r;
  result.solution.assign(n, 0.0);
  if (r == 0) return result;

  std::vector<double> z(n, 0.0);
  if (r == n) {
    for (std::size_t kk = n; kk > 0; --kk) {
      const std::size_t k = kk - 1;
      double s = b[k];
      for (std::size_t j = k + 1; j < n; ++j) s -= f.a(k, j) * z[j];
      z[k] = s / f.a(k, k);
    }
  } else {
    // Minimum-norm branch: with R1 the leading r x n trapezoid, factor
    // R1^T = U S and solve S^T u = c; z = U u has the smallest norm among
    // all z with R1 z = c.
    Matrix rt(n, r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i; j < n; ++j) rt(j, i) = f.a(i, j);
    }
    QrFactors g = qr_plain(std::move(rt));

    std::vector<double> u(r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < i; ++j) s -= g.a(j, i) * u[j];
      u[i] = s / g.a(i, i);
    }
    z.assign(n, 0.0);
    for (std::size_t i = 0; i < r; ++i) z[i] = u[i];
    apply_q(g, z);
  }

  for (std::size_t j = 0; j < n; ++j) result.solution[f.perm[j]] = z[j];
  return result;
}

std::vector<double> solve_least_squares(const Matrix& a, std::span<const double> b) {
  return lstsq(a, std::vector<double>(b.begin(), b.end())).solution;
}

}  // namespace curvefit
