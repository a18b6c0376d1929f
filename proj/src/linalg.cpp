#include "rbfpu/linalg.hpp"

#include <cmath>
#include <string>

#include "rbfpu/error.hpp"

namespace rbfpu {

CholeskyFactor factorize_spd(const SymmetricMatrix& a) {
  const std::size_t n = a.n;
  CholeskyFactor f;
  f.n_ = n;
  f.l_.assign(n * n, 0.0);
  double* l = f.l_.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* li = l + i * n;
    for (std::size_t j = 0; j < i; ++j) {
      const double* lj = l + j * n;
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      li[j] = s / lj[j];
    }
    double pivot = a(i, i);
    for (std::size_t k = 0; k < i; ++k) pivot -= li[k] * li[k];
    if (!(pivot > kPivotTolerance)) {
      throw Error(ErrorCode::NotSpd, "pivot " + std::to_string(i) + " is " +
                                         std::to_string(pivot) + ", matrix not numerically SPD");
    }
    li[i] = std::sqrt(pivot);
  }
  return f;
}

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
  if (rhs.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "rhs of length " + std::to_string(rhs.size()) +
                                                  " for system of size " + std::to_string(n_));
  }
  std::vector<double> x(rhs.begin(), rhs.end());
  // L y = b
  for (std::size_t i = 0; i < n_; ++i) {
    const double* li = l_.data() + i * n_;
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * x[k];
    x[i] = s / li[i];
  }
  // L^T x = y
  for (std::size_t i = n_; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n_; ++k) s -= l_[k * n_ + i] * x[k];
    x[i] = s / l_[i * n_ + i];
  }
  return x;
}

std::vector<double> CholeskyFactor::inverse_diagonal() const {
  // Row i of L^{-1} holds entries (L^{-1})_{i,j}, j <= i. Build it row by row
  // and accumulate squares into the column sums.
  std::vector<double> inv(n_ * n_, 0.0);
  std::vector<double> diag(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* li = l_.data() + i * n_;
    double* row = inv.data() + i * n_;
    const double lii = li[i];
    row[i] = 1.0 / lii;
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= li[k] * inv[k * n_ + j];
      row[j] = s / lii;
    }
    for (std::size_t j = 0; j <= i; ++j) diag[j] += row[j] * row[j];
  }
  return diag;
}

std::vector<double> lu_solve(const SymmetricMatrix& a, std::span<const double> rhs) {
  const std::size_t n = a.n;
  if (rhs.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "rhs of length " + std::to_string(rhs.size()) +
                                                  " for system of size " + std::to_string(n));
  }
  std::vector<double> m = a.data;
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    }
    if (m[piv * n + col] == 0.0) throw Error(ErrorCode::NotSpd, "matrix is singular");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[piv * n + k], m[col * n + k]);
      std::swap(x[piv], x[col]);
    }
    const double d = m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) m[r * n + k] -= f * m[col * n + k];
      x[r] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= m[i * n + k] * x[k];
    x[i] = s / m[i * n + i];
  }
  return x;
}

}  // namespace rbfpu
