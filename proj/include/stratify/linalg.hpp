// Exact linear algebra, generic over the coefficient scalar. Field scalars
// (Rational, Modular) use Gauss-Jordan elimination; Integer dispatches to the
// Smith-form routines in smith.hpp.
#ifndef STRATIFY_LINALG_HPP
#define STRATIFY_LINALG_HPP

#include <optional>
#include <utility>
#include <vector>

#include "stratify/matrix.hpp"
#include "stratify/smith.hpp"

namespace stratify {

template <class Field>
struct Echelon {
  Matrix<Field> reduced;        // reduced row echelon form
  std::vector<Index> pivots;    // pivot column of each non-zero row
};

template <class Field>
Echelon<Field> row_reduce(Matrix<Field> m) {
  static_assert(is_field_v<Field>, "row_reduce needs a field");
  Echelon<Field> out;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index pivot = -1;
    for (Index i = row; i < m.rows(); ++i)
      if (!is_zero(m(i, col))) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row) m.row(pivot).swap(m.row(row));
    const Field inv = Field(1) / m(row, col);
    for (Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      const Field f = m(i, col);
      for (Index j = col; j < m.cols(); ++j)
        if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <class Scalar>
Index rank(const Matrix<Scalar>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if constexpr (is_field_v<Scalar>) {
    return static_cast<Index>(row_reduce(m).pivots.size());
  } else {
    return integer_rank(m);
  }
}

/// Columns spanning {x : m x = 0}. Over a field the basis is read off the
/// reduced echelon form (free variable = 1); over Z it is saturated.
template <class Scalar>
Matrix<Scalar> kernel_basis(const Matrix<Scalar>& m) {
  if constexpr (is_field_v<Scalar>) {
    const Index n = m.cols();
    if (m.rows() == 0) return identity_matrix<Scalar>(n);
    const auto e = row_reduce(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Index p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Index> free;
    for (Index j = 0; j < n; ++j)
      if (!is_pivot[static_cast<std::size_t>(j)]) free.push_back(j);
    Matrix<Scalar> k = zero_matrix<Scalar>(n, static_cast<Index>(free.size()));
    for (std::size_t f = 0; f < free.size(); ++f) {
      const Index col = static_cast<Index>(f);
      k(free[f], col) = Scalar(1);
      for (std::size_t r = 0; r < e.pivots.size(); ++r)
        k(e.pivots[r], col) = -e.reduced(static_cast<Index>(r), free[f]);
    }
    return k;
  } else {
    return integer_kernel(m);
  }
}

/// Solves m X = b exactly; nullopt when the system is inconsistent (over Z:
/// when no integral solution exists).
template <class Scalar>
std::optional<Matrix<Scalar>> solve(const Matrix<Scalar>& m, const Matrix<Scalar>& b) {
  if constexpr (is_field_v<Scalar>) {
    const Index n = m.cols();
    if (m.rows() == 0) return zero_matrix<Scalar>(n, b.cols());
    const auto e = row_reduce(hstack(m, b));
    for (Index p : e.pivots)
      if (p >= n) return std::nullopt;
    Matrix<Scalar> x = zero_matrix<Scalar>(n, b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      x.row(e.pivots[r]) = e.reduced.block(static_cast<Index>(r), n, 1, b.cols());
    return x;
  } else {
    return integer_solve(m, b);
  }
}

/// A maximal independent subset of the columns of m (over a field).
template <class Field>
Matrix<Field> column_basis(const Matrix<Field>& m) {
  if (m.cols() == 0 || m.rows() == 0) return zero_matrix<Field>(m.rows(), 0);
  const auto e = row_reduce(m);
  Matrix<Field> out(m.rows(), static_cast<Index>(e.pivots.size()));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) out.col(static_cast<Index>(i)) = m.col(e.pivots[i]);
  return out;
}

/// Columns of `vectors` that are independent modulo span(sub), chosen
/// greedily left to right. Together with a basis of span(sub) they form a
/// basis of span(sub) + span(vectors).
template <class Field>
Matrix<Field> complement_columns(const Matrix<Field>& sub, const Matrix<Field>& vectors) {
  const Matrix<Field> all = hstack(column_basis(sub), vectors);
  const Index offset = all.cols() - vectors.cols();
  if (all.rows() == 0) return zero_matrix<Field>(0, 0);
  const auto e = row_reduce(all);
  std::vector<Index> picked;
  for (Index p : e.pivots)
    if (p >= offset) picked.push_back(p - offset);
  Matrix<Field> out(vectors.rows(), static_cast<Index>(picked.size()));
  for (std::size_t i = 0; i < picked.size(); ++i) out.col(static_cast<Index>(i)) = vectors.col(picked[i]);
  return out;
}

}  // namespace stratify

#endif  // STRATIFY_LINALG_HPP
