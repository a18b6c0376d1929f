#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfpu/kernels.hpp"

namespace rbfpu {

/// Pivots at or below this value reject the factorization. No jitter is
/// added; callers score the failing candidate as unusable instead.
inline constexpr double kPivotTolerance = 1e-14;

/// Lower-triangular factor L with A = L L^T.
class CholeskyFactor {
 public:
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t k) const noexcept { return l_[i * n_ + k]; }

  /// Solution of A x = rhs. Throws DimensionMismatch on a wrong-sized rhs.
  std::vector<double> solve(std::span<const double> rhs) const;

  /// Diagonal of A^{-1}: squared column norms of L^{-1}.
  std::vector<double> inverse_diagonal() const;

 private:
  friend CholeskyFactor factorize_spd(const SymmetricMatrix& a);
  std::size_t n_ = 0;
  std::vector<double> l_;
};

/// Throws NotSpd when a pivot falls to kPivotTolerance or below.
CholeskyFactor factorize_spd(const SymmetricMatrix& a);

/// Gaussian elimination with partial pivoting on a general square system.
/// Used where a result is wanted even for numerically indefinite systems.
/// Throws DimensionMismatch on a size mismatch and NotSpd for an exactly
/// singular matrix.
std::vector<double> lu_solve(const SymmetricMatrix& a, std::span<const double> rhs);

inline std::vector<double> solve(const CholeskyFactor& f, std::span<const double> rhs) {
  return f.solve(rhs);
}

inline std::vector<double> inverse_diagonal(const CholeskyFactor& f) { return f.inverse_diagonal(); }

}  // namespace rbfpu
