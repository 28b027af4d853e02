// Dense exact matrices: Eigen containers over the scalars of scalar.hpp.
#ifndef STRATIFY_MATRIX_HPP
#define STRATIFY_MATRIX_HPP

#include <Eigen/Core>

#include "stratify/scalar.hpp"

namespace stratify {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;

template <class Scalar>
Matrix<Scalar> zero_matrix(Index rows, Index cols) {
  return Matrix<Scalar>::Constant(rows, cols, Scalar(0));
}

template <class Scalar>
Matrix<Scalar> identity_matrix(Index n) {
  Matrix<Scalar> m = zero_matrix<Scalar>(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

template <class Derived>
bool is_zero_matrix(const Eigen::MatrixBase<Derived>& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!is_zero(m(i, j))) return false;
  return true;
}

/// Exact product; handles empty operands (Eigen's generic product is fine for
/// exact scalars but we keep the zero-size corner explicit).
template <class Scalar>
Matrix<Scalar> multiply(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() == 0 || a.rows() == 0 || b.cols() == 0) return zero_matrix<Scalar>(a.rows(), b.cols());
  Matrix<Scalar> out = zero_matrix<Scalar>(a.rows(), b.cols());
  for (Index k = 0; k < a.cols(); ++k) {
    for (Index j = 0; j < b.cols(); ++j) {
      const Scalar& bkj = b(k, j);
      if (is_zero(bkj)) continue;
      for (Index i = 0; i < a.rows(); ++i) {
        if (!is_zero(a(i, k))) out(i, j) += a(i, k) * bkj;
      }
    }
  }
  return out;
}

template <class Scalar>
Matrix<Scalar> hstack(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

template <class Scalar>
Matrix<Scalar> vstack(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows() + b.rows(), a.cols());
  if (a.rows() > 0) out.topRows(a.rows()) = a;
  if (b.rows() > 0) out.bottomRows(b.rows()) = b;
  return out;
}

/// Kronecker product; vec(A X B) = kron(B^T, A) vec(X) with column-major vec.
template <class Scalar>
Matrix<Scalar> kron(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out = zero_matrix<Scalar>(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  return out;
}

/// Entry-wise conversion of an integer matrix into the given scalar type.
template <class Scalar>
Matrix<Scalar> convert(const IntMatrix& m, const Ring& ring) {
  Matrix<Scalar> out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = ScalarTraits<Scalar>::from_integer(m(i, j), ring);
  return out;
}

}  // namespace stratify

#endif  // STRATIFY_MATRIX_HPP
