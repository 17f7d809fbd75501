#include "heightkit/matrix.hpp"

#include <cmath>
#include <utility>

namespace heightkit {

namespace {

bool is_zero(const Rat& x) { return sgn(x) == 0; }
bool is_zero(Real x) { return x == 0; }

template <typename T>
std::size_t pick_pivot(const Matrix<T>& a, std::size_t col) {
  std::size_t best = col;
  if constexpr (std::is_same_v<T, Real>) {
    for (std::size_t r = col + 1; r < a.rows(); ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(best, col))) best = r;
  } else {
    while (best < a.rows() && is_zero(a(best, col))) ++best;
    if (best == a.rows()) best = col;
  }
  return best;
}

template <typename T>
void swap_rows(Matrix<T>& a, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}

template <typename T>
T det_impl(Matrix<T> a) {
  if (!a.square()) throw ValidationError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = pick_pivot(a, c);
    if (is_zero(a(p, c))) return T(0);
    if (p != c) {
      swap_rows(a, p, c);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_zero(a(r, c))) continue;
      const T f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

template <typename T>
Matrix<T> inverse_impl(Matrix<T> a) {
  if (!a.square()) throw ValidationError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = pick_pivot(a, c);
    if (is_zero(a(p, c))) throw SingularMatrixError("matrix is singular");
    swap_rows(a, p, c);
    swap_rows(inv, p, c);
    const T pivot = a(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      a(c, k) /= pivot;
      inv(c, k) /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(a(r, c))) continue;
      const T f = a(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

}  // namespace

RealMatrix to_real(const RatMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_real(m(i, j));
  return r;
}

Rat determinant(const RatMatrix& m) { return det_impl(m); }
Real determinant(const RealMatrix& m) { return det_impl(m); }
RatMatrix inverse(const RatMatrix& m) { return inverse_impl(m); }
RealMatrix inverse(const RealMatrix& m) { return inverse_impl(m); }

std::vector<Rat> leading_minors(const RatMatrix& m) {
  std::vector<Rat> out;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    RatMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(i, j);
    out.push_back(determinant(sub));
  }
  return out;
}

}  // namespace heightkit
