#include "vpfp/linalg.hpp"

#include <cmath>

namespace vpfp {

namespace {

constexpr double kMinRcond = 1e-15;

Eigen::PartialPivLU<Mat> checked_lu(const Mat& a, const std::string& where) {
  Eigen::PartialPivLU<Mat> lu(a);
  const double rc = lu.rcond();
  if (!(rc > kMinRcond) || !std::isfinite(rc)) {
    throw NumericalError("linalg", "singular system at " + where +
                                       " (rcond=" + std::to_string(rc) + ")");
  }
  return lu;
}

}  // namespace

Vec Tridiagonal::apply(const Vec& w) const {
  const int n = size();
  Vec out(n);
  for (int q = 0; q < n; ++q) {
    double s = diag[q] * w[q];
    if (q > 0) s += lower[q] * w[q - 1];
    if (q + 1 < n) s += upper[q] * w[q + 1];
    out[q] = s;
  }
  return out;
}

Mat Tridiagonal::apply_columns(const Mat& w) const {
  const int n = size();
  Mat out = diag.asDiagonal() * w;
  if (n > 1) {
    out.topRows(n - 1) += upper.head(n - 1).asDiagonal() * w.bottomRows(n - 1);
    out.bottomRows(n - 1) += lower.tail(n - 1).asDiagonal() * w.topRows(n - 1);
  }
  return out;
}

Mat Tridiagonal::to_dense() const {
  const int n = size();
  Mat d = Mat::Zero(n, n);
  for (int q = 0; q < n; ++q) {
    d(q, q) = diag[q];
    if (q > 0) d(q, q - 1) = lower[q];
    if (q + 1 < n) d(q, q + 1) = upper[q];
  }
  return d;
}

Vec solve_tridiagonal(const Vec& lower, const Vec& diag, const Vec& upper, const Vec& rhs,
                      const std::string& where) {
  const int n = static_cast<int>(diag.size());
  Vec c(n), d(n);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) {
    throw NumericalError("linalg", "zero pivot at row 0 of " + where);
  }
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  d[0] = rhs[0] / pivot;
  for (int i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw NumericalError("linalg", "zero pivot at row " + std::to_string(i) + " of " + where);
    }
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  Vec x(n);
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

Mat solve_block_tridiagonal(const std::vector<Mat>& lower, const std::vector<Mat>& diag,
                            const std::vector<Mat>& upper, const Mat& rhs,
                            const std::string& where) {
  const int n = static_cast<int>(diag.size());
  const Eigen::Index r = rhs.cols();
  // Forward sweep: C[q] = D'^{-1} U[q], y[q] = D'^{-1}(b[q] - L[q] y[q-1]).
  std::vector<Mat> c(n);
  Mat y(n, r);
  for (int q = 0; q < n; ++q) {
    Mat pivot = diag[q];
    Vec b = rhs.row(q).transpose();
    if (q > 0) {
      pivot.noalias() -= lower[q] * c[q - 1];
      b.noalias() -= lower[q] * y.row(q - 1).transpose();
    }
    const auto lu = checked_lu(pivot, where + ", block row q=" + std::to_string(q));
    if (q + 1 < n) c[q] = lu.solve(upper[q]);
    y.row(q) = lu.solve(b).transpose();
  }
  for (int q = n - 2; q >= 0; --q) {
    y.row(q) -= (c[q] * y.row(q + 1).transpose()).transpose();
  }
  return y;
}

Mat solve_dense(const Mat& a, const Mat& rhs, const std::string& where) {
  return checked_lu(a, where).solve(rhs);
}

}  // namespace vpfp
