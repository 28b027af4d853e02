// Bounded cochain complexes of finite free modules (d : C^n -> C^{n+1}),
// graded maps between them, homology, and the standard constructions.
#ifndef STRATIFY_COMPLEX_HPP
#define STRATIFY_COMPLEX_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "stratify/linalg.hpp"

namespace stratify {

/// Raised when a hard algebraic check (d^2 = 0, commutation, ...) fails.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's mathematical precondition does not hold.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
decltype(auto) dispatch_ring(const Ring& ring, F&& f) {
  switch (ring.kind) {
    case Ring::Kind::Z: return f(std::type_identity<Integer>{});
    case Ring::Kind::Q: return f(std::type_identity<Rational>{});
    case Ring::Kind::Fp: break;
  }
  return f(std::type_identity<Modular>{});
}

// --- graded modules ---------------------------------------------------------

struct GradedModule {
  struct Piece {
    Index rank = 0;
    std::vector<Integer> torsion;  // invariant factors >= 2, each dividing the next
    std::vector<int> weights;      // sorted weights of the free part (when known)
    bool operator==(const Piece&) const = default;
  };
  std::map<int, Piece> degrees;  // only non-zero pieces are stored
  bool weighted = false;

  Index rank(int n) const {
    auto it = degrees.find(n);
    return it == degrees.end() ? 0 : it->second.rank;
  }
  std::vector<Integer> torsion(int n) const {
    auto it = degrees.find(n);
    return it == degrees.end() ? std::vector<Integer>{} : it->second.torsion;
  }
  bool is_zero() const { return degrees.empty(); }
  Index total_rank() const {
    Index t = 0;
    for (const auto& [n, piece] : degrees) t += piece.rank;
    return t;
  }
  /// Ranks in degrees lo..hi inclusive.
  std::vector<Index> ranks(int lo, int hi) const {
    std::vector<Index> out;
    for (int n = lo; n <= hi; ++n) out.push_back(rank(n));
    return out;
  }
  /// Compares ranks and torsion, ignoring weights.
  bool same_groups(const GradedModule& o) const {
    std::set<int> ds;
    for (const auto& [n, p] : degrees) ds.insert(n);
    for (const auto& [n, p] : o.degrees) ds.insert(n);
    for (int n : ds)
      if (rank(n) != o.rank(n) || torsion(n) != o.torsion(n)) return false;
    return true;
  }
  GradedModule shifted(int k) const {  // M[k]^n = M^{n+k}
    GradedModule out;
    out.weighted = weighted;
    for (const auto& [n, p] : degrees) out.degrees[n - k] = p;
    return out;
  }
  GradedModule negated() const {  // degree n -> -n
    GradedModule out;
    out.weighted = weighted;
    for (const auto& [n, p] : degrees) out.degrees[-n] = p;
    return out;
  }
  std::string to_string() const;
};

/// Invariant factors of the direct sum of cyclic groups Z/t_i.
std::vector<Integer> normalize_torsion(const std::vector<Integer>& orders);

// --- complexes --------------------------------------------------------------

template <class S>
class FreeComplex {
 public:
  using Scalar = S;
  using WeightMap = std::map<int, std::vector<int>>;

  FreeComplex() : ring_(default_ring()) {}
  explicit FreeComplex(Ring ring) : ring_(ring) { check_ring(); }

  /// diff[n] is the matrix of d : C^n -> C^{n+1}, shape ranks(n+1) x ranks(n).
  FreeComplex(Ring ring, std::map<int, Index> ranks, std::map<int, Matrix<S>> diff,
              std::optional<WeightMap> weights = std::nullopt)
      : ring_(ring) {
    check_ring();
    for (auto& [n, r] : ranks) {
      if (r < 0) throw std::invalid_argument("negative rank");
      if (r > 0) ranks_[n] = r;
    }
    for (auto& [n, m] : diff) {
      if (m.rows() != rank(n + 1) || m.cols() != rank(n)) {
        std::ostringstream os;
        os << "differential in degree " << n << " has shape " << m.rows() << "x" << m.cols()
           << ", expected " << rank(n + 1) << "x" << rank(n);
        throw std::invalid_argument(os.str());
      }
      if (m.size() > 0 && !is_zero_matrix(m)) diff_[n] = std::move(m);
    }
    if (weights) {
      weighted_ = true;
      for (const auto& [n, r] : ranks_) {
        auto it = weights->find(n);
        if (it == weights->end() || static_cast<Index>(it->second.size()) != r)
          throw std::invalid_argument("weights missing or of wrong length in degree " + std::to_string(n));
        weights_[n] = it->second;
      }
    }
    validate();
  }

  const Ring& ring() const { return ring_; }
  Index rank(int n) const {
    auto it = ranks_.find(n);
    return it == ranks_.end() ? 0 : it->second;
  }
  const std::map<int, Index>& ranks() const { return ranks_; }
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [n, r] : ranks_) out.push_back(n);
    return out;
  }
  bool empty() const { return ranks_.empty(); }
  int min_degree() const { return ranks_.empty() ? 0 : ranks_.begin()->first; }
  int max_degree() const { return ranks_.empty() ? -1 : ranks_.rbegin()->first; }
  Index total_rank() const {
    Index t = 0;
    for (const auto& [n, r] : ranks_) t += r;
    return t;
  }

  Matrix<S> d(int n) const {
    auto it = diff_.find(n);
    if (it != diff_.end()) return it->second;
    return zero_matrix<S>(rank(n + 1), rank(n));
  }
  const std::map<int, Matrix<S>>& differentials() const { return diff_; }

  bool has_weights() const { return weighted_; }
  std::vector<int> weights(int n) const {
    if (!weighted_) return std::vector<int>(static_cast<std::size_t>(rank(n)), 0);
    auto it = weights_.find(n);
    return it == weights_.end() ? std::vector<int>{} : it->second;
  }
  std::optional<WeightMap> weight_map() const {
    if (!weighted_) return std::nullopt;
    return weights_;
  }
  std::set<int> weight_values() const {
    std::set<int> out;
    for (const auto& [n, w] : weights_) out.insert(w.begin(), w.end());
    if (!weighted_ && !ranks_.empty()) out.insert(0);
    return out;
  }

 private:
  static Ring default_ring() {
    if constexpr (std::is_same_v<S, Integer>) return Ring::integers();
    else return Ring::rationals();
  }
  void check_ring() const {
    if (!ScalarTraits<S>::compatible(ring_))
      throw std::invalid_argument("scalar type does not match ring " + ring_.name());
  }
  void validate() const {
    for (const auto& [n, m] : diff_) {
      auto next = diff_.find(n + 1);
      if (next == diff_.end()) continue;
      if (!is_zero_matrix(multiply(next->second, m)))
        throw InvariantError("d o d != 0 at degree " + std::to_string(n));
    }
    if (!weighted_) return;
    for (const auto& [n, m] : diff_) {
      const auto& ws = weights_.at(n);
      const auto& wt = weights_.at(n + 1);
      for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
          if (!is_zero(m(i, j)) && ws[static_cast<std::size_t>(j)] != wt[static_cast<std::size_t>(i)])
            throw InvariantError("differential does not preserve weights at degree " + std::to_string(n));
    }
  }

  Ring ring_;
  std::map<int, Index> ranks_;
  std::map<int, Matrix<S>> diff_;
  bool weighted_ = false;
  WeightMap weights_;
};

/// K concentrated in one degree (optionally with a weight).
template <class S>
FreeComplex<S> unit_complex(const Ring& ring, int degree = 0, std::optional<int> weight = std::nullopt) {
  std::optional<typename FreeComplex<S>::WeightMap> w;
  if (weight) w = typename FreeComplex<S>::WeightMap{{degree, {*weight}}};
  return FreeComplex<S>(ring, {{degree, 1}}, {}, w);
}

/// Scalar constant in the complex's ring.
template <class S>
S ring_scalar(const Ring& ring, long v) {
  return ScalarTraits<S>::from_integer(Integer(v), ring);
}

template <class S>
FreeComplex<S> convert_complex(const FreeComplex<Integer>& c, const Ring& ring) {
  std::map<int, Matrix<S>> diff;
  for (const auto& [n, m] : c.differentials()) diff[n] = convert<S>(m, ring);
  return FreeComplex<S>(ring, c.ranks(), std::move(diff), c.weight_map());
}

// --- graded maps ------------------------------------------------------------

/// A family of matrices f^n : C^n -> D^{n+shift}. No compatibility with the
/// differentials is implied.
template <class S>
struct GradedMap {
  FreeComplex<S> source, target;
  int shift = 0;
  std::map<int, Matrix<S>> components;  // keyed by source degree

  Matrix<S> at(int n) const {
    auto it = components.find(n);
    if (it != components.end()) return it->second;
    return zero_matrix<S>(target.rank(n + shift), source.rank(n));
  }
  /// First degree n where d_T f^n != (-1)^shift f^{n+1} d_S, if any.
  std::optional<int> commutation_failure() const {
    std::set<int> ns;
    for (int n : source.degrees()) ns.insert(n);
    for (int n : target.degrees()) ns.insert(n - shift);
    for (int n : ns) {
      const Matrix<S> lhs = multiply(target.d(n + shift), at(n));
      Matrix<S> rhs = multiply(at(n + 1), source.d(n));
      if (shift % 2 != 0) rhs = -rhs;
      if (lhs != rhs) return n;
    }
    return std::nullopt;
  }
  bool is_chain_map() const { return !commutation_failure().has_value(); }
  bool is_zero() const {
    for (const auto& [n, m] : components)
      if (!is_zero_matrix(m)) return false;
    return true;
  }
};

/// A GradedMap that has passed the (Koszul-signed) commutation check.
template <class S>
class ChainMap {
 public:
  explicit ChainMap(GradedMap<S> map) : map_(std::move(map)) {
    check_shapes();
    if (auto n = map_.commutation_failure())
      throw InvariantError("not a chain map: commutation fails at source degree " + std::to_string(*n));
  }
  const GradedMap<S>& map() const { return map_; }
  const FreeComplex<S>& source() const { return map_.source; }
  const FreeComplex<S>& target() const { return map_.target; }
  int shift() const { return map_.shift; }
  Matrix<S> at(int n) const { return map_.at(n); }

 private:
  void check_shapes() const {
    for (const auto& [n, m] : map_.components)
      if (m.rows() != map_.target.rank(n + map_.shift) || m.cols() != map_.source.rank(n))
        throw std::invalid_argument("chain map component of wrong shape at degree " + std::to_string(n));
  }
  GradedMap<S> map_;
};

template <class S>
GradedMap<S> identity_map(const FreeComplex<S>& c) {
  GradedMap<S> f{c, c, 0, {}};
  for (const auto& [n, r] : c.ranks()) f.components[n] = identity_matrix<S>(r);
  return f;
}

template <class S>
GradedMap<S> zero_map(const FreeComplex<S>& c, const FreeComplex<S>& d, int shift = 0) {
  return GradedMap<S>{c, d, shift, {}};
}

/// g o f.
template <class S>
GradedMap<S> compose(const GradedMap<S>& g, const GradedMap<S>& f) {
  GradedMap<S> out{f.source, g.target, f.shift + g.shift, {}};
  for (const auto& [n, m] : f.components) {
    Matrix<S> c = multiply(g.at(n + f.shift), m);
    if (!is_zero_matrix(c)) out.components[n] = std::move(c);
  }
  return out;
}

template <class S>
GradedMap<S> add(const GradedMap<S>& f, const GradedMap<S>& g) {
  if (f.shift != g.shift) throw std::invalid_argument("adding maps of different degree");
  GradedMap<S> out{f.source, f.target, f.shift, f.components};
  for (const auto& [n, m] : g.components) {
    auto it = out.components.find(n);
    if (it == out.components.end()) out.components[n] = m;
    else it->second += m;
  }
  return out;
}

template <class S>
GradedMap<S> scale(const GradedMap<S>& f, const S& c) {
  GradedMap<S> out = f;
  for (auto& [n, m] : out.components) m *= c;
  return out;
}

/// Graded maps are equal when all components agree (missing = zero).
template <class S>
bool same_map(const GradedMap<S>& f, const GradedMap<S>& g) {
  if (f.shift != g.shift) return false;
  std::set<int> ns;
  for (const auto& [n, m] : f.components) ns.insert(n);
  for (const auto& [n, m] : g.components) ns.insert(n);
  for (int n : ns) {
    const Matrix<S> a = f.at(n), b = g.at(n);
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

// --- homology ---------------------------------------------------------------

namespace detail {

inline std::vector<Index> indices_with_weight(const std::vector<int>& ws, int w) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (ws[i] == w) out.push_back(static_cast<Index>(i));
  return out;
}

template <class S>
Matrix<S> submatrix(const Matrix<S>& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix<S> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i)
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

template <class S>
std::vector<Integer> torsion_of(const Matrix<S>& m) {
  std::vector<Integer> out;
  if constexpr (std::is_same_v<S, Integer>) {
    if (m.size() == 0) return out;
    for (const Integer& f : invariant_factors(m))
      if (f > 1) out.push_back(f);
  }
  return out;
}

}  // namespace detail

/// H^n = ker d^n / im d^{n-1}. With weights, computed blockwise per weight.
template <class S>
GradedModule homology(const FreeComplex<S>& c) {
  GradedModule out;
  out.weighted = c.has_weights();
  for (int n : c.degrees()) {
    GradedModule::Piece piece;
    const Matrix<S> dn = c.d(n), dp = c.d(n - 1);
    if (!c.has_weights()) {
      piece.rank = c.rank(n) - rank(dn) - rank(dp);
      piece.torsion = detail::torsion_of(dp);
    } else {
      const auto wn = c.weights(n), wp = c.weights(n - 1), wx = c.weights(n + 1);
      std::vector<Integer> orders;
      for (int w : std::set<int>(wn.begin(), wn.end())) {
        const auto cols = detail::indices_with_weight(wn, w);
        const auto next = detail::indices_with_weight(wx, w);
        const auto prev = detail::indices_with_weight(wp, w);
        const Matrix<S> bn = detail::submatrix(dn, next, cols);
        const Matrix<S> bp = detail::submatrix(dp, cols, prev);
        const Index r = static_cast<Index>(cols.size()) - rank(bn) - rank(bp);
        piece.rank += r;
        piece.weights.insert(piece.weights.end(), static_cast<std::size_t>(r), w);
        for (auto& t : detail::torsion_of(bp)) orders.push_back(t);
      }
      piece.torsion = normalize_torsion(orders);
    }
    if (piece.rank > 0 || !piece.torsion.empty()) out.degrees[n] = std::move(piece);
  }
  return out;
}

/// Chosen basis of the free part of H^n, with a coordinate map for cycles.
/// Over Z the representatives come from the Smith form of the image inside
/// the saturated kernel; over a field from reduced echelon kernels.
template <class S>
struct CohomologyBasis {
  int degree = 0;
  Matrix<S> cycles;            // basis of ker d^n (columns)
  Matrix<S> representatives;   // cycles representing the free generators
  std::vector<Integer> torsion;

  Index rank() const { return representatives.cols(); }

  /// Coordinates of cycles (columns of z) on the free generators.
  Matrix<S> coordinates(const Matrix<S>& z) const {
    const Index r = rank();
    if (z.cols() == 0 || r == 0) return zero_matrix<S>(r, z.cols());
    if constexpr (std::is_same_v<S, Integer>) {
      const auto c = solve(cycles, z);
      if (!c) throw InvariantError("coordinates requested for a non-cycle");
      const Matrix<S> u = multiply(coords_, *c);
      return u.bottomRows(r);
    } else {
      const auto c = solve(hstack(boundaries_, representatives), z);
      if (!c) throw InvariantError("coordinates requested for a non-cycle");
      return c->bottomRows(r);
    }
  }

  // Over Z: the rows of U (from the Smith form of the image in cycle
  // coordinates) whose bottom block reads off free coordinates.
  Matrix<S> coords_;
  // Over a field: a basis of the boundaries.
  Matrix<S> boundaries_;
};

template <class S>
CohomologyBasis<S> cohomology_basis(const FreeComplex<S>& c, int n) {
  CohomologyBasis<S> out;
  out.degree = n;
  out.cycles = kernel_basis(c.d(n));
  const Matrix<S> image = c.d(n - 1);
  if constexpr (std::is_same_v<S, Integer>) {
    const Index k = out.cycles.cols();
    IntMatrix m = zero_matrix<Integer>(k, image.cols());
    if (k > 0 && image.cols() > 0) {
      auto sol = solve(out.cycles, image);
      if (!sol) throw InvariantError("image not contained in kernel");
      m = *sol;
    }
    const SmithForm s = smith_normal_form(m);
    for (Index i = 0; i < s.rank; ++i)
      if (s.D(i, i) > 1) out.torsion.push_back(s.D(i, i));
    out.representatives = multiply(out.cycles, IntMatrix(s.Uinv.rightCols(k - s.rank)));
    out.coords_ = s.U;
  } else {
    out.boundaries_ = column_basis(image);
    out.representatives = complement_columns(out.boundaries_, out.cycles);
  }
  return out;
}

/// Matrix of H(f) on the free parts, for a map f between cycle spaces given
/// as the matrix from C^{from.degree} to D^{to.degree}.
template <class S>
Matrix<S> induced_map(const CohomologyBasis<S>& from, const CohomologyBasis<S>& to, const Matrix<S>& f) {
  return to.coordinates(multiply(f, from.representatives));
}

// --- constructions ----------------------------------------------------------

/// C[k]^n = C^{n+k}, d_{C[k]} = (-1)^k d_C.
template <class S>
FreeComplex<S> shift(const FreeComplex<S>& c, int k) {
  std::map<int, Index> ranks;
  std::map<int, Matrix<S>> diff;
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (c.has_weights()) weights.emplace();
  for (const auto& [n, r] : c.ranks()) {
    ranks[n - k] = r;
    if (weights) (*weights)[n - k] = c.weights(n);
  }
  for (const auto& [n, m] : c.differentials()) diff[n - k] = (k % 2 == 0) ? Matrix<S>(m) : Matrix<S>(-m);
  return FreeComplex<S>(c.ring(), std::move(ranks), std::move(diff), std::move(weights));
}

/// Adds a constant to every weight (or introduces weights).
template <class S>
FreeComplex<S> twist(const FreeComplex<S>& c, int dw) {
  typename FreeComplex<S>::WeightMap w;
  for (const auto& [n, r] : c.ranks()) {
    auto ws = c.weights(n);
    for (int& x : ws) x += dw;
    w[n] = ws;
  }
  return FreeComplex<S>(c.ring(), c.ranks(), c.differentials(), w);
}

template <class S>
FreeComplex<S> direct_sum(const std::vector<FreeComplex<S>>& cs, const Ring& ring) {
  std::map<int, Index> ranks;
  bool weighted = false;
  for (const auto& c : cs) {
    if (c.ring() != ring) throw std::invalid_argument("direct_sum: ring mismatch");
    weighted = weighted || c.has_weights();
    for (const auto& [n, r] : c.ranks()) ranks[n] += r;
  }
  std::map<int, Matrix<S>> diff;
  typename FreeComplex<S>::WeightMap weights;
  std::map<int, Index> offset;
  for (const auto& c : cs) {
    for (const auto& [n, r] : c.ranks()) {
      auto& w = weights[n];
      const auto cw = c.weights(n);
      w.insert(w.end(), cw.begin(), cw.end());
    }
    for (const auto& [n, m] : c.differentials()) {
      auto it = diff.find(n);
      if (it == diff.end()) it = diff.emplace(n, zero_matrix<S>(ranks[n + 1], ranks[n])).first;
      it->second.block(offset[n + 1], offset[n], m.rows(), m.cols()) = m;
    }
    for (const auto& [n, r] : c.ranks()) offset[n] += r;
  }
  std::optional<typename FreeComplex<S>::WeightMap> w;
  if (weighted) w = std::move(weights);
  return FreeComplex<S>(ring, std::move(ranks), std::move(diff), std::move(w));
}

template <class S>
FreeComplex<S> direct_sum(const FreeComplex<S>& a, const FreeComplex<S>& b) {
  return direct_sum<S>({a, b}, a.ring());
}

/// Basis of (C (x) D)^n: for i ascending over degrees of C, the pairs (a, b)
/// with a in C^i, b in D^{n-i}, a-major. d(a (x) b) = da (x) b + (-1)^i a (x) db.
template <class S>
struct TensorLayout {
  // offset of the block C^i (x) D^{n-i} inside (C (x) D)^n
  std::map<int, std::map<int, Index>> offset;  // offset[n][i]
  std::map<int, Index> ranks;
};

template <class S>
TensorLayout<S> tensor_layout(const FreeComplex<S>& c, const FreeComplex<S>& d) {
  TensorLayout<S> lay;
  for (const auto& [i, ri] : c.ranks())
    for (const auto& [j, rj] : d.ranks()) {
      const int n = i + j;
      lay.offset[n][i] = 0;
    }
  for (auto& [n, blocks] : lay.offset) {
    Index off = 0;
    for (auto& [i, o] : blocks) {
      o = off;
      off += c.rank(i) * d.rank(n - i);
    }
    lay.ranks[n] = off;
  }
  return lay;
}

template <class S>
FreeComplex<S> tensor(const FreeComplex<S>& c, const FreeComplex<S>& d) {
  if (c.ring() != d.ring()) throw std::invalid_argument("tensor: ring mismatch");
  const auto lay = tensor_layout(c, d);
  std::map<int, Matrix<S>> diff;
  for (const auto& [n, blocks] : lay.offset) {
    const Index rows = lay.ranks.count(n + 1) ? lay.ranks.at(n + 1) : 0;
    if (rows == 0) continue;
    Matrix<S> m = zero_matrix<S>(rows, lay.ranks.at(n));
    for (const auto& [i, off] : blocks) {
      const int j = n - i;
      const Index ri = c.rank(i), rj = d.rank(j);
      // da (x) b  lands in block i+1
      if (c.rank(i + 1) > 0 && lay.offset.at(n + 1).count(i + 1)) {
        const Matrix<S> k = kron(c.d(i), identity_matrix<S>(rj));
        m.block(lay.offset.at(n + 1).at(i + 1), off, k.rows(), k.cols()) += k;
      }
      // (-1)^i a (x) db  lands in block i
      if (d.rank(j + 1) > 0 && lay.offset.at(n + 1).count(i)) {
        Matrix<S> k = kron(identity_matrix<S>(ri), d.d(j));
        if (i % 2 != 0) k = -k;
        m.block(lay.offset.at(n + 1).at(i), off, k.rows(), k.cols()) += k;
      }
    }
    diff[n] = std::move(m);
  }
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (c.has_weights() || d.has_weights()) {
    weights.emplace();
    for (const auto& [n, blocks] : lay.offset) {
      auto& w = (*weights)[n];
      for (const auto& [i, off] : blocks) {
        const auto wa = c.weights(i), wb = d.weights(n - i);
        for (int x : wa)
          for (int y : wb) w.push_back(x + y);
      }
    }
  }
  return FreeComplex<S>(c.ring(), lay.ranks, std::move(diff), std::move(weights));
}

/// cone(f)^n = D^n (+) C^{n+1}, d(y, x) = (d y + f x, -d x). Target first.
template <class S>
FreeComplex<S> cone(const GradedMap<S>& f) {
  if (f.shift != 0) throw std::invalid_argument("cone needs a degree-0 map");
  if (!f.is_chain_map()) throw InvariantError("cone: not a chain map");
  const auto& c = f.source;
  const auto& dd = f.target;
  std::map<int, Index> ranks;
  for (const auto& [n, r] : dd.ranks()) ranks[n] += r;
  for (const auto& [n, r] : c.ranks()) ranks[n - 1] += r;
  std::map<int, Matrix<S>> diff;
  for (const auto& [n, r] : ranks) {
    const Index rows = ranks.count(n + 1) ? ranks.at(n + 1) : 0;
    if (rows == 0) continue;
    Matrix<S> m = zero_matrix<S>(rows, r);
    const Index ty = dd.rank(n), tx = c.rank(n + 1);
    const Index ty1 = dd.rank(n + 1), tx1 = c.rank(n + 2);
    if (ty1 > 0 && ty > 0) m.block(0, 0, ty1, ty) = dd.d(n);
    if (ty1 > 0 && tx > 0) m.block(0, ty, ty1, tx) = f.at(n + 1);
    if (tx1 > 0 && tx > 0) m.block(ty1, ty, tx1, tx) = -c.d(n + 1);
    diff[n] = std::move(m);
  }
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (c.has_weights() || dd.has_weights()) {
    weights.emplace();
    for (const auto& [n, r] : ranks) {
      auto w = dd.weights(n);
      const auto wc = c.weights(n + 1);
      w.insert(w.end(), wc.begin(), wc.end());
      (*weights)[n] = w;
    }
  }
  return FreeComplex<S>(dd.ring(), std::move(ranks), std::move(diff), std::move(weights));
}

/// Linear dual: (C^v)^n = (C^{-n})^*, with d^v = transpose, weights negated.
template <class S>
FreeComplex<S> dual(const FreeComplex<S>& c) {
  std::map<int, Index> ranks;
  std::map<int, Matrix<S>> diff;
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (c.has_weights()) weights.emplace();
  for (const auto& [n, r] : c.ranks()) {
    ranks[-n] = r;
    if (weights) {
      auto w = c.weights(n);
      for (int& x : w) x = -x;
      (*weights)[-n] = w;
    }
  }
  // d^n : C^n -> C^{n+1} dualizes to (C^v)^{-n-1} -> (C^v)^{-n}
  for (const auto& [n, m] : c.differentials()) diff[-n - 1] = m.transpose();
  return FreeComplex<S>(c.ring(), std::move(ranks), std::move(diff), std::move(weights));
}

/// Transpose of a graded map f : C -> D of degree k, as a map D^v -> C^v of degree k.
template <class S>
GradedMap<S> dual(const GradedMap<S>& f) {
  GradedMap<S> out{dual(f.target), dual(f.source), f.shift, {}};
  // f^n : C^n -> D^{n+k}; its transpose maps (D^v)^{-n-k} -> (C^v)^{-n}
  for (const auto& [n, m] : f.components) out.components[-n - f.shift] = m.transpose();
  return out;
}

/// Solves f = d_D h + (-1)^k h d_C for h of degree k-1, where k = f.shift.
template <class S>
std::optional<GradedMap<S>> null_homotopy(const GradedMap<S>& f) {
  const auto& c = f.source;
  const auto& d = f.target;
  const int k = f.shift;
  // unknown blocks h^n : C^n -> D^{n+k-1}, vectorized column-major
  std::vector<int> hs;
  std::map<int, Index> hoff;
  Index unknowns = 0;
  for (int n : c.degrees()) {
    const Index sz = d.rank(n + k - 1) * c.rank(n);
    if (sz == 0) continue;
    hs.push_back(n);
    hoff[n] = unknowns;
    unknowns += sz;
  }
  // equations indexed by entries of f^n : C^n -> D^{n+k}
  std::map<int, Index> eoff;
  Index equations = 0;
  for (int n : c.degrees()) {
    const Index sz = d.rank(n + k) * c.rank(n);
    if (sz == 0) continue;
    eoff[n] = equations;
    equations += sz;
  }
  Matrix<S> a = zero_matrix<S>(equations, unknowns);
  Matrix<S> b = zero_matrix<S>(equations, 1);
  const S sign = ring_scalar<S>(c.ring(), k % 2 == 0 ? 1 : -1);
  for (const auto& [n, e] : eoff) {
    const Index rc = c.rank(n), rd = d.rank(n + k);
    const Matrix<S> fn = f.at(n);
    for (Index j = 0; j < rc; ++j)
      for (Index i = 0; i < rd; ++i) b(e + j * rd + i, 0) = fn(i, j);
    // d_D h^n : vec = (I (x) d_D) vec h^n
    if (hoff.count(n)) {
      const Matrix<S> blk = kron(identity_matrix<S>(rc), d.d(n + k - 1));
      a.block(e, hoff.at(n), blk.rows(), blk.cols()) += blk;
    }
    // h^{n+1} d_C^n : vec = (d_C^T (x) I) vec h^{n+1}
    if (hoff.count(n + 1)) {
      Matrix<S> blk = kron(Matrix<S>(c.d(n).transpose()), identity_matrix<S>(rd));
      a.block(e, hoff.at(n + 1), blk.rows(), blk.cols()) += sign * blk;
    }
  }
  if (equations == 0) return GradedMap<S>{c, d, k - 1, {}};
  const auto x = solve(a, b);
  if (!x) return std::nullopt;
  GradedMap<S> h{c, d, k - 1, {}};
  for (int n : hs) {
    const Index rows = d.rank(n + k - 1), cols = c.rank(n);
    Matrix<S> m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = (*x)(hoff.at(n) + j * rows + i, 0);
    h.components[n] = std::move(m);
  }
  return h;
}

/// d_D h + (-1)^k h d_C for a map h of degree k - 1 (the map h is a
/// null-homotopy of).
template <class S>
GradedMap<S> boundary_of_homotopy(const GradedMap<S>& h) {
  const int k = h.shift + 1;
  GradedMap<S> out{h.source, h.target, k, {}};
  for (int n : h.source.degrees()) {
    Matrix<S> m = multiply(h.target.d(n + k - 1), h.at(n));
    Matrix<S> t = multiply(h.at(n + 1), h.source.d(n));
    if (k % 2 == 0) m += t;
    else m -= t;
    if (!is_zero_matrix(m)) out.components[n] = std::move(m);
  }
  return out;
}

}  // namespace stratify

#endif  // STRATIFY_COMPLEX_HPP
