// Chain complexes C_.(x), C^.(x) of a finite poset, the connecting maps b,
// and the constructions built from them.
#ifndef STRATIFY_POSET_COHOMOLOGY_HPP
#define STRATIFY_POSET_COHOMOLOGY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratify/complex.hpp"
#include "stratify/poset.hpp"

namespace stratify {

/// Stands for the adjoined least element 0 in functions indexed by P.
inline constexpr int kHat = -1;

/// Basis chains [x_1 < ... < x_n = x], lexicographic within each length.
/// For x = kHat the single empty chain in length 0.
struct ChainBasis {
  int top = kHat;
  std::map<int, std::vector<Chain>> by_length;
  std::map<Chain, Index> position;

  Index count(int n) const {
    auto it = by_length.find(n);
    return it == by_length.end() ? 0 : static_cast<Index>(it->second.size());
  }
  const std::vector<Chain>& chains(int n) const {
    static const std::vector<Chain> none;
    auto it = by_length.find(n);
    return it == by_length.end() ? none : it->second;
  }
  Index index_of(const Chain& c) const { return position.at(c); }
};

ChainBasis chain_basis(const Poset& p, int x);

// Integer matrices of the basic maps; all entries are 0 or +-1.
IntMatrix coboundary_matrix(const Poset& p, const ChainBasis& b, int n);   // d : C^n -> C^{n+1}
IntMatrix boundary_matrix(const Poset& p, const ChainBasis& b, int n);     // del : C_n -> C_{n-1}
IntMatrix b_cohomological_matrix(const ChainBasis& bx, const ChainBasis& by, int y, int n);  // C^n(x) -> C^{n+1}(y)
IntMatrix b_homological_matrix(const ChainBasis& bx, const ChainBasis& by, int x, int n);    // C_{n+1}(y) -> C_n(x)
IntMatrix contraction_matrix(const ChainBasis& b, int least, int n);      // c : C_n -> C_{n+1}
/// Relabelling C^n_{Q}(alpha x) -> C^n_P(x) for an isomorphism alpha : P -> Q.
IntMatrix transport_matrix(const ChainBasis& bp, const ChainBasis& bq, const std::vector<int>& alpha, int n);

std::string chain_to_string(const Poset& p, const Chain& c);

inline void require_element(const Poset& p, int x) {
  if (x != kHat && (x < 0 || x >= p.size())) throw PosetError("unknown element index " + std::to_string(x));
}

/// C^.(x): chains of length n in degree n, d inserts elements.
template <class S>
FreeComplex<S> cochain_complex(const Poset& p, int x, const Ring& ring) {
  require_element(p, x);
  const ChainBasis b = chain_basis(p, x);
  std::map<int, Index> ranks;
  std::map<int, Matrix<S>> diff;
  for (const auto& [n, cs] : b.by_length) {
    ranks[n] = static_cast<Index>(cs.size());
    if (b.count(n + 1) > 0) diff[n] = convert<S>(coboundary_matrix(p, b, n), ring);
  }
  return FreeComplex<S>(ring, std::move(ranks), std::move(diff));
}

/// C_.(x), stored with C_n in (cohomological) degree -n.
template <class S>
FreeComplex<S> chain_complex(const Poset& p, int x, const Ring& ring) {
  require_element(p, x);
  const ChainBasis b = chain_basis(p, x);
  std::map<int, Index> ranks;
  std::map<int, Matrix<S>> diff;
  for (const auto& [n, cs] : b.by_length) {
    ranks[-n] = static_cast<Index>(cs.size());
    if (b.count(n - 1) > 0 && n >= 1) diff[-n] = convert<S>(boundary_matrix(p, b, n), ring);
  }
  return FreeComplex<S>(ring, std::move(ranks), std::move(diff));
}

template <class S>
GradedModule poset_cohomology(const Poset& p, int x, const Ring& ring) {
  return homology(cochain_complex<S>(p, x, ring));
}

/// h_n(x) reported in degree n.
template <class S>
GradedModule poset_homology(const Poset& p, int x, const Ring& ring) {
  return homology(chain_complex<S>(p, x, ring)).negated();
}

enum class Variant { Homological, Cohomological };

/// b_x^y as a graded map. `validated` is set only when it passed the chain
/// map check, which the construction attempts for covers only.
template <class S>
struct ConnectingMap {
  GradedMap<S> map;
  bool is_cover = false;
  bool validated = false;
};

template <class S>
ConnectingMap<S> connecting_b(const Poset& p, int x, int y, Variant variant, const Ring& ring) {
  require_element(p, x);
  require_element(p, y);
  if (y == kHat || !(x == kHat || p.less(x, y)))
    throw PreconditionError("connecting_b needs x < y");
  const ChainBasis bx = chain_basis(p, x), by = chain_basis(p, y);
  ConnectingMap<S> out;
  out.is_cover = (x == kHat) ? p.lower_covers(y).empty() : p.covers(x, y);
  if (variant == Variant::Cohomological) {
    out.map = GradedMap<S>{cochain_complex<S>(p, x, ring), cochain_complex<S>(p, y, ring), 1, {}};
    for (const auto& [n, cs] : bx.by_length)
      out.map.components[n] = convert<S>(b_cohomological_matrix(bx, by, y, n), ring);
  } else {
    out.map = GradedMap<S>{chain_complex<S>(p, y, ring), chain_complex<S>(p, x, ring), 1, {}};
    for (const auto& [n, cs] : bx.by_length)
      out.map.components[-(n + 1)] = convert<S>(b_homological_matrix(bx, by, x, n), ring);
  }
  if (out.is_cover) {
    if (!out.map.is_chain_map()) throw InvariantError("b on a cover is not a chain map");
    out.validated = true;
  }
  return out;
}

/// The contracting homotopy of C_.(x) for P with least element a < x, as a
/// degree -1 map; its defining identity is checked before returning.
template <class S>
GradedMap<S> contracting_homotopy(const Poset& p, int x, const Ring& ring) {
  const auto a = p.least();
  if (!a) throw PreconditionError("poset has no least element");
  if (x == *a) throw PreconditionError("x must lie strictly above the least element");
  require_element(p, x);
  const ChainBasis b = chain_basis(p, x);
  const FreeComplex<S> c = chain_complex<S>(p, x, ring);
  GradedMap<S> h{c, c, -1, {}};
  for (const auto& [n, cs] : b.by_length) h.components[-n] = convert<S>(contraction_matrix(b, *a, n), ring);
  if (!same_map(boundary_of_homotopy(h), identity_map(c)))
    throw InvariantError("contracting homotopy identity fails");
  return h;
}

struct CommutatorReport {
  bool projection_holds = true;   // del b + b del = projection (x in second-to-last slot)
  bool generalized_holds = true;  // del b + b del + sum b b = 0, both variants
  bool witness_holds = true;      // null_homotopy accepts -b_x^z when all middles are covers
  bool double_cover = false;
  std::vector<std::string> failures;
  bool ok() const { return projection_holds && generalized_holds && witness_holds; }
};

/// Checks the commutator identity and its generalization for x < z (x may be kHat).
template <class S>
CommutatorReport commutator_identity(const Poset& p, int x, int z, const Ring& ring) {
  if (z == kHat || !(x == kHat || p.less(x, z))) throw PreconditionError("commutator_identity needs x < z");
  CommutatorReport rep;
  const ChainBasis bx = chain_basis(p, x), bz = chain_basis(p, z);
  const auto bxz = connecting_b<S>(p, x, z, Variant::Homological, ring).map;
  const FreeComplex<S>& cz = bxz.source;
  const FreeComplex<S>& cx = bxz.target;
  std::vector<int> middle = (x == kHat) ? p.below(z) : p.between(x, z);

  // projection: chains [.. < x_{n-1} = x < x_n < z] -> [.. x_{n-1}=x]
  for (const auto& [len, chains] : bz.by_length) {
    const int deg = -len;  // homological degree len
    Matrix<S> lhs = multiply(cx.d(deg + 1), bxz.at(deg)) + multiply(bxz.at(deg + 1), cz.d(deg));
    Matrix<S> expect = zero_matrix<S>(lhs.rows(), lhs.cols());
    for (const Chain& c : chains) {
      if (c.size() < 2) continue;
      const std::size_t m = c.size();
      const bool hit = (x == kHat) ? (m == 2) : (m >= 3 && c[m - 3] == x);
      if (!hit) continue;
      const Chain target(c.begin(), c.end() - 2);
      if (bx.count(static_cast<int>(target.size())) == 0) continue;
      expect(bx.index_of(target), bz.index_of(c)) = ring_scalar<S>(ring, 1);
    }
    if (lhs.size() > 0 && lhs != expect) {
      rep.projection_holds = false;
      rep.failures.push_back("projection formula fails in length " + std::to_string(len));
    }
  }

  // generalized identity, homological and cohomological
  GradedMap<S> hom_sum = boundary_of_homotopy(bxz);  // del b + b del (degree 2 pattern)
  const auto cxz = connecting_b<S>(p, x, z, Variant::Cohomological, ring).map;
  GradedMap<S> coh_sum = boundary_of_homotopy(cxz);
  GradedMap<S> bb_hom{cz, cx, 2, {}}, bb_coh{cxz.source, cxz.target, 2, {}};
  rep.double_cover = true;
  for (int y : middle) {
    const auto bxy = connecting_b<S>(p, x, y, Variant::Homological, ring).map;
    const auto byz = connecting_b<S>(p, y, z, Variant::Homological, ring).map;
    bb_hom = add(bb_hom, compose(bxy, byz));
    const auto cxy = connecting_b<S>(p, x, y, Variant::Cohomological, ring).map;
    const auto cyz = connecting_b<S>(p, y, z, Variant::Cohomological, ring).map;
    bb_coh = add(bb_coh, compose(cyz, cxy));
    const bool lower = (x == kHat) ? p.lower_covers(y).empty() : p.covers(x, y);
    if (!lower || !p.covers(y, z)) rep.double_cover = false;
  }
  if (middle.empty()) rep.double_cover = false;
  if (!add(hom_sum, bb_hom).is_zero()) {
    rep.generalized_holds = false;
    rep.failures.push_back("generalized identity fails (homological)");
  }
  if (!add(coh_sum, bb_coh).is_zero()) {
    rep.generalized_holds = false;
    rep.failures.push_back("generalized identity fails (cohomological)");
  }

  if (rep.double_cover) {
    // sum_y b_x^y b_y^z is null-homotopic with witness -b_x^z
    const GradedMap<S> witness = scale(bxz, ring_scalar<S>(ring, -1));
    if (!same_map(boundary_of_homotopy(witness), bb_hom)) {
      rep.witness_holds = false;
      rep.failures.push_back("-b_x^z is not a null-homotopy of sum b b");
    }
    if (!null_homotopy(bb_hom)) {
      rep.witness_holds = false;
      rep.failures.push_back("null_homotopy finds no witness");
    }
  }
  return rep;
}

/// C^.(alpha) : C^._Q(alpha x) -> C^._P(x) for an order isomorphism alpha.
template <class S>
GradedMap<S> transport(const Poset& p, const Poset& q, const std::vector<int>& alpha, int x, const Ring& ring) {
  if (!is_isomorphism(p, q, alpha)) throw PreconditionError("transport needs an order isomorphism");
  require_element(p, x);
  const int ax = (x == kHat) ? kHat : alpha[static_cast<std::size_t>(x)];
  const ChainBasis bp = chain_basis(p, x), bq = chain_basis(q, ax);
  GradedMap<S> f{cochain_complex<S>(q, ax, ring), cochain_complex<S>(p, x, ring), 0, {}};
  for (const auto& [n, cs] : bp.by_length) f.components[n] = convert<S>(transport_matrix(bp, bq, alpha, n), ring);
  if (!f.is_chain_map()) throw InvariantError("transport is not a chain map");
  return f;
}

// --- graded posets: concentration, Whitney complex --------------------------

/// h_n(x) in degree n for x in the hat poset (the bottom gives K in degree 0).
template <class S>
GradedModule hat_homology(const HatPoset& ph, const Poset& strata, int full_index, const Ring& ring) {
  if (full_index == ph.bottom) {
    GradedModule m;
    m.degrees[0].rank = 1;
    return m;
  }
  const int x = strata.index(ph.full.id(full_index));
  return homology(chain_complex<S>(strata, x, ring)).negated();
}

/// Concentration h_n(x) = 0 for n != rk(x), for every x (torsion counts).
template <class S>
bool is_concentrated(const HatPoset& ph, const Ring& ring) {
  const auto rk = rank_function(ph);
  if (!rk) throw PreconditionError("poset is not graded");
  const Poset strata = ph.strata();
  for (int x = 0; x < ph.full.size(); ++x) {
    const GradedModule h = hat_homology<S>(ph, strata, x, ring);
    for (const auto& [deg, piece] : h.degrees)
      if (deg != (*rk)[static_cast<std::size_t>(x)]) return false;
  }
  return true;
}

/// The complex (h, b): h(x) for rk(x) = n in homological degree n (stored
/// in degree -n), differential induced by the b maps on covers.
template <class S>
struct WhitneyComplex {
  FreeComplex<S> complex;
  std::vector<int> rank;                   // rk of each element of the hat poset
  std::map<int, std::vector<int>> order;   // elements of each rank, in basis order
  std::map<int, Index> offset;             // offset of h(x) inside h_{rk x}
  std::map<int, Index> dim;                // rank of h(x)
};

template <class S>
WhitneyComplex<S> whitney_complex(const HatPoset& ph, const Ring& ring) {
  const auto rk = rank_function(ph);
  if (!rk) throw PreconditionError("poset is not graded");
  if (!is_concentrated<S>(ph, ring)) throw PreconditionError("poset homology is not concentrated in rank degree");
  const Poset strata = ph.strata();
  WhitneyComplex<S> w;
  w.rank = *rk;
  // bases of h(x) from cohomology_basis of C_.(x) in degree -rk(x)
  std::map<int, CohomologyBasis<S>> basis;
  std::map<int, FreeComplex<S>> cplx;
  auto strata_index = [&](int v) { return v == ph.bottom ? kHat : strata.index(ph.full.id(v)); };
  std::map<int, Index> ranks;
  // elements of each rank: bottom first, then identifier order
  std::vector<int> elems;
  elems.push_back(ph.bottom);
  for (int v = 0; v < ph.full.size(); ++v)
    if (v != ph.bottom) elems.push_back(v);
  for (int v : elems) {
    const int r = (*rk)[static_cast<std::size_t>(v)];
    const int sx = strata_index(v);
    cplx.emplace(v, chain_complex<S>(strata, sx, ring));
    basis.emplace(v, cohomology_basis(cplx.at(v), -r));
    if (!basis.at(v).torsion.empty()) throw PreconditionError("torsion in h(" + ph.full.id(v) + ")");
    w.order[r].push_back(v);
    w.offset[v] = ranks[-r];
    w.dim[v] = basis.at(v).rank();
    ranks[-r] += basis.at(v).rank();
  }
  std::map<int, Matrix<S>> diff;
  for (const auto& [x, y] : ph.full.cover_pairs()) {
    const int r = (*rk)[static_cast<std::size_t>(y)];
    const auto b = connecting_b<S>(strata, strata_index(x), strata_index(y), Variant::Homological, ring);
    const Matrix<S> m = induced_map(basis.at(y), basis.at(x), b.map.at(-r));
    auto it = diff.find(-r);
    if (it == diff.end()) it = diff.emplace(-r, zero_matrix<S>(ranks[-r + 1], ranks[-r])).first;
    if (m.size() > 0) it->second.block(w.offset[x], w.offset[y], m.rows(), m.cols()) = m;
  }
  w.complex = FreeComplex<S>(ring, ranks, diff);
  return w;
}

/// 0 -> h(x) -> (+)_{y<x, rk y = rk x - 1} h(y) -> ... -> h(0) -> 0, as the
/// subcomplex of (h, b) on elements <= x, with its homology.
template <class S>
struct AcyclicityReport {
  FreeComplex<S> complex;
  GradedModule homology;
  bool exact = false;
};

template <class S>
AcyclicityReport<S> acyclicity_complex(const HatPoset& ph, int x, const Ring& ring) {
  const WhitneyComplex<S> w = whitney_complex<S>(ph, ring);
  std::map<int, std::vector<Index>> keep;  // per degree, kept basis indices
  for (const auto& [r, els] : w.order)
    for (int v : els)
      if (ph.full.leq(v, x))
        for (Index i = 0; i < w.dim.at(v); ++i) keep[-r].push_back(w.offset.at(v) + i);
  std::map<int, Index> ranks;
  std::map<int, Matrix<S>> diff;
  for (const auto& [deg, idx] : keep) ranks[deg] = static_cast<Index>(idx.size());
  for (const auto& [deg, idx] : keep) {
    auto nx = keep.find(deg + 1);
    if (nx == keep.end()) continue;
    diff[deg] = detail::submatrix(w.complex.d(deg), nx->second, idx);
  }
  AcyclicityReport<S> rep{FreeComplex<S>(ring, ranks, diff), {}, false};
  rep.homology = homology(rep.complex);
  rep.exact = rep.homology.is_zero();
  return rep;
}

}  // namespace stratify

#endif  // STRATIFY_POSET_COHOMOLOGY_HPP
