#include "stratify/smith.hpp"

#include <utility>

namespace stratify {

namespace {

// Elementary operations applied to the working matrix, mirrored on the
// transforms so that U * M0 * V = M holds throughout.
class SmithState {
 public:
  SmithState(const IntMatrix& m, bool track) : m_(m), track_(track) {
    if (track_) {
      u_ = identity_matrix<Integer>(m.rows());
      uinv_ = u_;
      v_ = identity_matrix<Integer>(m.cols());
      vinv_ = v_;
    }
  }

  IntMatrix& m() { return m_; }

  void swap_rows(Index i, Index j) {
    if (i == j) return;
    m_.row(i).swap(m_.row(j));
    if (track_) {
      u_.row(i).swap(u_.row(j));
      uinv_.col(i).swap(uinv_.col(j));
    }
  }
  void swap_cols(Index i, Index j) {
    if (i == j) return;
    m_.col(i).swap(m_.col(j));
    if (track_) {
      v_.col(i).swap(v_.col(j));
      vinv_.row(i).swap(vinv_.row(j));
    }
  }
  // row_i += c * row_j
  void add_row(Index i, Index j, const Integer& c) {
    if (c == 0) return;
    m_.row(i) += c * m_.row(j);
    if (track_) {
      u_.row(i) += c * u_.row(j);
      uinv_.col(j) -= c * uinv_.col(i);
    }
  }
  // col_i += c * col_j
  void add_col(Index i, Index j, const Integer& c) {
    if (c == 0) return;
    m_.col(i) += c * m_.col(j);
    if (track_) {
      v_.col(i) += c * v_.col(j);
      vinv_.row(j) -= c * vinv_.row(i);
    }
  }
  void negate_row(Index i) {
    m_.row(i) = -m_.row(i);
    if (track_) {
      u_.row(i) = -u_.row(i);
      uinv_.col(i) = -uinv_.col(i);
    }
  }

  SmithForm finish(Index rank) {
    SmithForm out;
    out.D = std::move(m_);
    out.rank = rank;
    if (track_) {
      out.U = std::move(u_);
      out.Uinv = std::move(uinv_);
      out.V = std::move(v_);
      out.Vinv = std::move(vinv_);
    }
    return out;
  }

 private:
  IntMatrix m_, u_, uinv_, v_, vinv_;
  bool track_;
};

// Floor-free quotient used for reduction: q = trunc(a / b).
Integer quotient(const Integer& a, const Integer& b) { return a / b; }

}  // namespace

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> out;
  for (Index i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

SmithForm smith_normal_form(const IntMatrix& input, SmithTracking tracking) {
  SmithState st(input, tracking == SmithTracking::Full);
  IntMatrix& m = st.m();
  const Index rows = m.rows(), cols = m.cols();
  Index t = 0;
  while (t < rows && t < cols) {
    // smallest non-zero entry of the trailing block becomes the pivot
    Index pi = -1, pj = -1;
    for (Index j = t; j < cols; ++j)
      for (Index i = t; i < rows; ++i) {
        if (m(i, j) == 0) continue;
        if (pi < 0 || abs(m(i, j)) < abs(m(pi, pj))) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    st.swap_rows(t, pi);
    st.swap_cols(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (Index i = t + 1; i < rows; ++i) {
        if (m(i, t) == 0) continue;
        st.add_row(i, t, -quotient(m(i, t), m(t, t)));
        if (m(i, t) != 0) {
          st.swap_rows(t, i);
          clean = false;
        }
      }
      for (Index j = t + 1; j < cols; ++j) {
        if (m(t, j) == 0) continue;
        st.add_col(j, t, -quotient(m(t, j), m(t, t)));
        if (m(t, j) != 0) {
          st.swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // divisibility: pivot must divide the whole trailing block
      for (Index i = t + 1; i < rows && clean; ++i)
        for (Index j = t + 1; j < cols; ++j)
          if (m(i, j) % m(t, t) != 0) {
            st.add_row(t, i, Integer(1));
            clean = false;
            break;
          }
    }
    if (m(t, t) < 0) st.negate_row(t);
    ++t;
  }
  return st.finish(t);
}

std::vector<Integer> invariant_factors(const IntMatrix& m) {
  return smith_normal_form(m, SmithTracking::None).diagonal();
}

Index integer_rank(const IntMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return smith_normal_form(m, SmithTracking::None).rank;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const Index n = m.cols();
  if (m.rows() == 0) return identity_matrix<Integer>(n);
  const SmithForm s = smith_normal_form(m);
  return s.V.rightCols(n - s.rank);
}

std::optional<IntMatrix> integer_solve(const IntMatrix& m, const IntMatrix& b) {
  const Index n = m.cols();
  if (m.rows() == 0) return zero_matrix<Integer>(n, b.cols());
  const SmithForm s = smith_normal_form(m);
  const IntMatrix ub = multiply<Integer>(s.U, b);
  IntMatrix y = zero_matrix<Integer>(n, b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < ub.rows(); ++i) {
      if (i < s.rank) {
        if (ub(i, j) % s.D(i, i) != 0) return std::nullopt;
        y(i, j) = ub(i, j) / s.D(i, i);
      } else if (ub(i, j) != 0) {
        return std::nullopt;
      }
    }
  }
  return multiply<Integer>(s.V, y);
}

}  // namespace stratify
