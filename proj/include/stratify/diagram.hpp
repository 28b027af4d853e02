// Diagrams of complexes over a poset and the chain-indexed total complex
//   (+)_x A(x) (x) C^.(x),  D = d_A + (-1)^i d_C + (-1)^i sum_{x<y} rho_x^y (x) b_x^y,
// shared by the homotopy-limit model and the stratified engine.
#ifndef STRATIFY_DIAGRAM_HPP
#define STRATIFY_DIAGRAM_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratify/complex.hpp"
#include "stratify/poset_cohomology.hpp"

namespace stratify {

using Edge = std::pair<int, int>;

/// Values on the elements of P, optionally with a value on an adjoined
/// bottom (index kHat), and degree-0 transition maps on covers.
template <class S>
struct PosetDiagram {
  Poset poset;
  Ring ring = Ring::rationals();
  std::vector<FreeComplex<S>> values;
  std::optional<FreeComplex<S>> bottom;
  std::map<Edge, GradedMap<S>> transitions;  // covers; (kHat, m) for minimal m when bottom is set

  const FreeComplex<S>& value(int x) const {
    return x == kHat ? *bottom : values[static_cast<std::size_t>(x)];
  }
  bool has_bottom() const { return bottom.has_value(); }
  bool less(int x, int y) const {
    if (y == kHat) return false;
    if (x == kHat) return true;
    return poset.less(x, y);
  }
  /// Covers of P (plus bottom covers when a bottom value is present).
  std::vector<Edge> covers() const {
    std::vector<Edge> out;
    if (has_bottom())
      for (int m : poset.minimal()) out.emplace_back(kHat, m);
    for (auto e : poset.cover_pairs()) out.push_back(e);
    return out;
  }
};

/// A transition that fails functoriality: two cover paths from x to y disagree
/// after passing through `via`.
class FunctorialityError : public InvariantError {
 public:
  FunctorialityError(const std::string& what, Edge pair) : InvariantError(what), pair_(pair) {}
  Edge pair() const { return pair_; }

 private:
  Edge pair_;
};

namespace detail {
inline std::string diagram_id(const Poset& p, int x, const std::string& bottom_id) {
  return x == kHat ? bottom_id : p.id(x);
}
}  // namespace detail

/// Checks every cover transition (shape, degree 0, chain map, weights) and
/// composes them to all pairs x < y, verifying that all cover paths agree.
template <class S>
std::map<Edge, GradedMap<S>> compose_transitions(const PosetDiagram<S>& d, const std::string& bottom_id = kDefaultBottom) {
  const Poset& p = d.poset;
  auto name = [&](int x) { return detail::diagram_id(p, x, bottom_id); };
  std::map<Edge, GradedMap<S>> out;
  for (const Edge& e : d.covers()) {
    auto it = d.transitions.find(e);
    GradedMap<S> f = (it == d.transitions.end()) ? GradedMap<S>{d.value(e.first), d.value(e.second), 0, {}} : it->second;
    if (f.shift != 0) throw InvariantError("transition " + name(e.first) + "->" + name(e.second) + " is not of degree 0");
    for (const auto& [n, m] : f.components)
      if (m.rows() != d.value(e.second).rank(n) || m.cols() != d.value(e.first).rank(n))
        throw std::invalid_argument("transition " + name(e.first) + "->" + name(e.second) + " has wrong shape in degree " + std::to_string(n));
    f.source = d.value(e.first);
    f.target = d.value(e.second);
    if (!f.is_chain_map())
      throw InvariantError("transition " + name(e.first) + "->" + name(e.second) + " is not a chain map");
    if (f.source.has_weights() || f.target.has_weights())
      for (const auto& [n, m] : f.components) {
        const auto ws = f.source.weights(n), wt = f.target.weights(n);
        for (Index j = 0; j < m.cols(); ++j)
          for (Index i = 0; i < m.rows(); ++i)
            if (!is_zero(m(i, j)) && ws[static_cast<std::size_t>(j)] != wt[static_cast<std::size_t>(i)])
              throw InvariantError("transition " + name(e.first) + "->" + name(e.second) + " does not preserve weights");
      }
    out[e] = std::move(f);
  }
  // extra supplied pairs must agree with the composite
  std::vector<int> order;
  if (d.has_bottom()) order.push_back(kHat);
  for (int x : p.linear_extension()) order.push_back(x);
  // x -> z for all x < z, processed by increasing z, composing through covers y of z
  for (int z : p.linear_extension()) {
    for (int x : order) {
      if (x == z || !d.less(x, z)) continue;
      if (out.count({x, z}) && (x == kHat ? p.lower_covers(z).empty() : p.covers(x, z))) continue;
      std::optional<GradedMap<S>> comp;
      int via = kHat;
      for (int y : p.lower_covers(z)) {
        if (!(x == y || d.less(x, y))) continue;
        if (x == y) continue;
        GradedMap<S> c = compose(out.at({y, z}), out.at({x, y}));
        if (!comp) {
          comp = std::move(c);
          via = y;
        } else if (!same_map(*comp, c)) {
          throw FunctorialityError("restriction system is not functorial: paths " + name(x) + "->" + name(via) + "->" + name(z) +
                                       " and " + name(x) + "->" + name(y) + "->" + name(z) + " disagree",
                                   {x, z});
        }
      }
      if (!comp) {
        // z minimal, x the bottom: cover handled above
        continue;
      }
      comp->source = d.value(x);
      comp->target = d.value(z);
      out[{x, z}] = std::move(*comp);
    }
  }
  for (const auto& [e, f] : d.transitions) {
    if (!out.count(e)) throw InvariantError("transition given on a non-comparable pair");
    if (!same_map(out.at(e), f))
      throw FunctorialityError("supplied map " + name(e.first) + "->" + name(e.second) + " disagrees with the composite", e);
  }
  return out;
}

/// One basis element of the total complex: a_index-th basis vector of
/// A(element)^internal tensored with the chain at chain_index (of the given length).
struct TotalCell {
  int element = kHat;
  int internal = 0;
  Index a_index = 0;
  int length = 0;
  Index chain_index = 0;
};

template <class S>
struct ChainTotal {
  FreeComplex<S> complex;
  std::map<int, std::vector<TotalCell>> cells;  // basis of each total degree
  std::map<int, ChainBasis> chains;             // chain basis of each element (kHat included)
  std::vector<int> elements;                    // summand order
  // offset of the block (element, internal, length) in its total degree
  std::map<std::tuple<int, int, int>, Index> block_offset;
};

/// Builds the total complex. Summands are ordered bottom first, then by
/// identifier; inside a summand by internal degree, then A-index, then chain.
template <class S>
ChainTotal<S> chain_total_complex(const PosetDiagram<S>& d, const std::map<Edge, GradedMap<S>>& maps) {
  const Poset& p = d.poset;
  const Ring& ring = d.ring;
  ChainTotal<S> t;
  if (d.has_bottom()) t.elements.push_back(kHat);
  for (int x = 0; x < p.size(); ++x) t.elements.push_back(x);

  bool weighted = false;
  std::map<int, Index> ranks;
  for (int x : t.elements) {
    t.chains.emplace(x, chain_basis(p, x));
    const FreeComplex<S>& a = d.value(x);
    weighted = weighted || a.has_weights();
    const ChainBasis& cb = t.chains.at(x);
    for (int i : a.degrees())
      for (const auto& [len, cs] : cb.by_length) {
        const int n = i + len;
        t.block_offset[{x, i, len}] = ranks[n];
        for (Index ai = 0; ai < a.rank(i); ++ai)
          for (Index ci = 0; ci < static_cast<Index>(cs.size()); ++ci) t.cells[n].push_back(TotalCell{x, i, ai, len, ci});
        ranks[n] += a.rank(i) * static_cast<Index>(cs.size());
      }
  }

  std::map<int, Matrix<S>> diff;
  auto block = [&](int n) -> Matrix<S>& {
    auto it = diff.find(n);
    if (it == diff.end()) it = diff.emplace(n, zero_matrix<S>(ranks[n + 1], ranks[n])).first;
    return it->second;
  };
  const S one = ring_scalar<S>(ring, 1);
  for (int x : t.elements) {
    const FreeComplex<S>& a = d.value(x);
    const ChainBasis& cb = t.chains.at(x);
    for (int i : a.degrees()) {
      const Index ra = a.rank(i);
      for (const auto& [len, cs] : cb.by_length) {
        const int n = i + len;
        const Index nc = static_cast<Index>(cs.size());
        const Index col = t.block_offset.at({x, i, len});
        // d_A (x) 1
        if (a.rank(i + 1) > 0) {
          const Matrix<S> k = kron(a.d(i), identity_matrix<S>(nc));
          if (!is_zero_matrix(k)) block(n).block(t.block_offset.at({x, i + 1, len}), col, k.rows(), k.cols()) += k;
        }
        // (-1)^i 1 (x) d_C
        if (cb.count(len + 1) > 0) {
          Matrix<S> k = kron(identity_matrix<S>(ra), convert<S>(coboundary_matrix(p, cb, len), ring));
          if (i % 2 != 0) k = -k;
          if (!is_zero_matrix(k)) block(n).block(t.block_offset.at({x, i, len + 1}), col, k.rows(), k.cols()) += k;
        }
        // (-1)^i rho_x^y (x) b_x^y, with b[c] = (-1)^len [c < y]
        const S sign = ((i + len) % 2 == 0) ? one : S(-one);
        for (int y = 0; y < p.size(); ++y) {
          if (!d.less(x, y)) continue;
          const ChainBasis& cy = t.chains.at(y);
          const Matrix<S> rho = maps.at({x, y}).at(i);
          if (rho.size() == 0 || is_zero_matrix(rho)) continue;
          Matrix<S>& m = block(n);
          const Index row0 = t.block_offset.at({y, i, len + 1});
          const Index ncy = cy.count(len + 1);
          for (Index ci = 0; ci < nc; ++ci) {
            Chain up = cs[static_cast<std::size_t>(ci)];
            up.push_back(y);
            const Index cj = cy.index_of(up);
            for (Index aj = 0; aj < ra; ++aj)
              for (Index ak = 0; ak < rho.rows(); ++ak) {
                if (is_zero(rho(ak, aj))) continue;
                m(row0 + ak * ncy + cj, col + aj * nc + ci) += sign * rho(ak, aj);
              }
          }
        }
      }
    }
  }
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (weighted) {
    weights.emplace();
    for (const auto& [n, cells] : t.cells) {
      auto& w = (*weights)[n];
      for (const TotalCell& c : cells)
        w.push_back(d.value(c.element).weights(c.internal)[static_cast<std::size_t>(c.a_index)]);
    }
  }
  t.complex = FreeComplex<S>(ring, ranks, std::move(diff), std::move(weights));
  return t;
}

}  // namespace stratify

#endif  // STRATIFY_DIAGRAM_HPP
