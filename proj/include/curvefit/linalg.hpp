#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curvefit {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> matvec(const Matrix& a, std::span<const double> x);
std::vector<double> matvec_transposed(const Matrix& a, std::span<const double> x);

struct LstsqResult {
  std::vector<double> solution;
  std::size_t rank = 0;
};

// Minimizes ||a x - b||_2 by Householder QR with column pivoting. When a is
// numerically rank deficient the minimum-norm solution is returned (the
// trapezoidal factor is re-factored from the right). rank_tol is relative to
// the largest diagonal of R.
LstsqResult lstsq(Matrix a, std::vector<double> b, double rank_tol = 1e-10);

std::vector<double> solve_least_squares(const Matrix& a, std::span<const double> b);

}  // namespace curvefit
