#pragma once

#include "vpfp/common.hpp"

#include <vector>

namespace vpfp {

/// Tridiagonal n x n operator. lower[0] and upper[n-1] are unused (kept zero).
struct Tridiagonal {
  Vec lower, diag, upper;

  Tridiagonal() = default;
  explicit Tridiagonal(int n) : lower(Vec::Zero(n)), diag(Vec::Zero(n)), upper(Vec::Zero(n)) {}

  int size() const { return static_cast<int>(diag.size()); }
  Vec apply(const Vec& w) const;
  /// Applies the operator to every column of w (rows of w index the grid).
  Mat apply_columns(const Mat& w) const;
  Mat to_dense() const;
};

/// Thomas algorithm for a general tridiagonal system. Throws NumericalError
/// on a vanishing pivot; `where` is included in the message.
Vec solve_tridiagonal(const Vec& lower, const Vec& diag, const Vec& upper, const Vec& rhs,
                      const std::string& where);

/// Block-tridiagonal solve with square blocks of equal size r. Row q reads
/// lower[q] u[q-1] + diag[q] u[q] + upper[q] u[q+1] = rhs.row(q); the system
/// unknown is a (n x r) matrix whose row q is the block unknown u[q].
Mat solve_block_tridiagonal(const std::vector<Mat>& lower, const std::vector<Mat>& diag,
                            const std::vector<Mat>& upper, const Mat& rhs,
                            const std::string& where);

/// Dense LU solve with a reciprocal-condition guard.
Mat solve_dense(const Mat& a, const Mat& rhs, const std::string& where);

}  // namespace vpfp
