// Stratified data, the filtered total complex (+)_S A(S) (x) C^.(S) with the
// filtration by sigma, its spectral sequence, the dual pipeline, and maps
// induced by stratified isomorphisms.
#ifndef STRATIFY_ENGINE_HPP
#define STRATIFY_ENGINE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratify/diagram.hpp"

namespace stratify {

enum class Mode { Primal, Dual };

inline std::string mode_name(Mode m) { return m == Mode::Primal ? "primal" : "dual"; }

/// Elements are indexed as in `poset.full`. In primal mode `maps` holds the
/// restrictions rho_S^T : A(S) -> A(T) on covers S < T; in dual mode it holds
/// the Gysin maps gamma_S^T : A(T) -> A(S), keyed by (S, T).
template <class S>
struct StratifiedData {
  Ring ring = Ring::rationals();
  HatPoset poset;
  std::vector<int> sigma;
  std::vector<FreeComplex<S>> A;
  std::map<Edge, GradedMap<S>> maps;
  Mode mode = Mode::Primal;
};

/// Index translation between the full poset and the strata poset P.
struct StrataIndex {
  Poset strata;
  std::vector<int> to_strata;  // full -> strata (kHat for the bottom)
  std::vector<int> to_full;    // strata -> full

  explicit StrataIndex(const HatPoset& ph) : strata(ph.strata()) {
    to_strata.assign(static_cast<std::size_t>(ph.full.size()), kHat);
    for (int s = 0; s < strata.size(); ++s) {
      const int f = ph.full.index(strata.id(s));
      to_full.push_back(f);
      to_strata[static_cast<std::size_t>(f)] = s;
    }
  }
  int full(int s, const HatPoset& ph) const { return s == kHat ? ph.bottom : to_full[static_cast<std::size_t>(s)]; }
};

template <class S>
void validate_data(const StratifiedData<S>& data) {
  const Poset& full = data.poset.full;
  if (static_cast<int>(data.A.size()) != full.size()) throw std::invalid_argument("one complex per element of P-hat required");
  if (static_cast<int>(data.sigma.size()) != full.size()) throw std::invalid_argument("sigma must be defined on every element");
  if (data.sigma[static_cast<std::size_t>(data.poset.bottom)] != 0) throw PreconditionError("sigma of the bottom must be 0");
  if (!is_strictly_increasing(full, data.sigma)) throw PreconditionError("sigma is not strictly increasing");
  for (const auto& a : data.A)
    if (a.ring() != data.ring) throw std::invalid_argument("stratum complex over the wrong ring");
  for (const auto& [e, f] : data.maps)
    if (e.first < 0 || e.second < 0 || e.first >= full.size() || e.second >= full.size() || !full.less(e.first, e.second))
      throw std::invalid_argument("map given on a non-comparable pair");
}

/// Diagram on P with bottom value A(0); in dual mode the transposed Gysin maps.
template <class S>
PosetDiagram<S> data_diagram(const StratifiedData<S>& data, const StrataIndex& ix) {
  PosetDiagram<S> d;
  d.poset = ix.strata;
  d.ring = data.ring;
  d.bottom = data.A[static_cast<std::size_t>(data.poset.bottom)];
  for (int f : ix.to_full) d.values.push_back(data.A[static_cast<std::size_t>(f)]);
  for (const auto& [e, f] : data.maps) {
    const Edge k{ix.to_strata[static_cast<std::size_t>(e.first)], ix.to_strata[static_cast<std::size_t>(e.second)]};
    d.transitions[k] = f;
  }
  return d;
}

/// Linear dual of the data: A -> A^v, and maps transposed (Gysin <-> restriction).
template <class S>
StratifiedData<S> dualize(const StratifiedData<S>& data) {
  StratifiedData<S> out = data;
  out.mode = data.mode == Mode::Primal ? Mode::Dual : Mode::Primal;
  out.A.clear();
  for (const auto& a : data.A) out.A.push_back(dual(a));
  out.maps.clear();
  for (const auto& [e, f] : data.maps) {
    GradedMap<S> g = dual(f);
    out.maps[e] = std::move(g);
  }
  return out;
}

/// Checks rho (or gamma) is a degree-0 weight-preserving functorial system;
/// returns the composites keyed by full indices.
template <class S>
std::map<Edge, GradedMap<S>> restriction_system(const StratifiedData<S>& data) {
  validate_data(data);
  const StrataIndex ix(data.poset);
  const StratifiedData<S> primal = data.mode == Mode::Primal ? data : dualize(data);
  const auto comp = compose_transitions(data_diagram(primal, ix), data.poset.bottom_id());
  std::map<Edge, GradedMap<S>> out;
  for (const auto& [e, f] : comp) out[{ix.full(e.first, data.poset), ix.full(e.second, data.poset)}] = f;
  return out;
}

// --- filtered complexes -----------------------------------------------------

/// A cell of the total complex with its element in full-poset numbering.
struct FilteredCell {
  int element = 0;
  int internal = 0;
  Index a_index = 0;
  Chain chain;  // strata indices; empty for the bottom
};

template <class S>
struct FilteredComplex {
  FreeComplex<S> total;
  std::map<int, std::vector<int>> level;           // per degree, per basis element
  std::map<int, std::vector<FilteredCell>> cells;  // per degree, per basis element
  bool second_quadrant = false;                    // dual pipeline: level = -sigma

  int min_level() const {
    int m = 0;
    bool first = true;
    for (const auto& [n, l] : level)
      for (int v : l) m = first ? (first = false, v) : std::min(m, v);
    return m;
  }
  int max_level() const {
    int m = 0;
    bool first = true;
    for (const auto& [n, l] : level)
      for (int v : l) m = first ? (first = false, v) : std::max(m, v);
    return m;
  }
  std::vector<int> levels(int n) const {
    auto it = level.find(n);
    return it == level.end() ? std::vector<int>{} : it->second;
  }
};

/// First (degree, row, col) where D lowers the level.
template <class S>
std::optional<std::string> filtration_violation(const FilteredComplex<S>& fc) {
  for (const auto& [n, m] : fc.total.differentials()) {
    const auto ls = fc.levels(n), lt = fc.levels(n + 1);
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i)
        if (!is_zero(m(i, j)) && lt[static_cast<std::size_t>(i)] < ls[static_cast<std::size_t>(j)])
          return "differential lowers the filtration level in degree " + std::to_string(n);
  }
  return std::nullopt;
}

/// gr^k: the submatrix of the differential on cells of level k.
template <class S>
FreeComplex<S> graded_piece(const FilteredComplex<S>& fc, int k) {
  std::map<int, std::vector<Index>> idx;
  for (const auto& [n, l] : fc.level)
    for (std::size_t i = 0; i < l.size(); ++i)
      if (l[i] == k) idx[n].push_back(static_cast<Index>(i));
  std::map<int, Index> ranks;
  std::map<int, Matrix<S>> diff;
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (fc.total.has_weights()) weights.emplace();
  for (const auto& [n, ii] : idx) {
    ranks[n] = static_cast<Index>(ii.size());
    if (weights) {
      const auto w = fc.total.weights(n);
      for (Index i : ii) (*weights)[n].push_back(w[static_cast<std::size_t>(i)]);
    }
    auto next = idx.find(n + 1);
    if (next != idx.end()) diff[n] = detail::submatrix(fc.total.d(n), next->second, ii);
  }
  return FreeComplex<S>(fc.total.ring(), std::move(ranks), std::move(diff), std::move(weights));
}

template <class S>
bool same_complex(const FreeComplex<S>& a, const FreeComplex<S>& b) {
  if (a.ranks() != b.ranks()) return false;
  for (int n : a.degrees())
    if (a.d(n) != b.d(n)) return false;
  if (a.has_weights() || b.has_weights())
    for (int n : a.degrees())
      if (a.weights(n) != b.weights(n)) return false;
  return true;
}

namespace detail {

/// Primal construction on data whose maps are restrictions.
template <class S>
FilteredComplex<S> primal_total(const StratifiedData<S>& data) {
  const StrataIndex ix(data.poset);
  const PosetDiagram<S> d = data_diagram(data, ix);
  const auto maps = compose_transitions(d, data.poset.bottom_id());
  const ChainTotal<S> t = chain_total_complex(d, maps);
  FilteredComplex<S> fc;
  fc.total = t.complex;
  for (const auto& [n, cells] : t.cells)
    for (const TotalCell& c : cells) {
      const int f = ix.full(c.element, data.poset);
      fc.level[n].push_back(data.sigma[static_cast<std::size_t>(f)]);
      fc.cells[n].push_back(FilteredCell{f, c.internal, c.a_index, t.chains.at(c.element).chains(c.length)[static_cast<std::size_t>(c.chain_index)]});
    }
  if (auto v = filtration_violation(fc)) throw InvariantError(*v);
  // gr^k must be (+)_{sigma(S)=k} A(S) (x) C^.(S), cell for cell
  std::set<int> ks(data.sigma.begin(), data.sigma.end());
  for (int k : ks) {
    std::vector<FreeComplex<S>> parts;
    for (int e : t.elements) {
      const int f = ix.full(e, data.poset);
      if (data.sigma[static_cast<std::size_t>(f)] != k) continue;
      parts.push_back(tensor(data.A[static_cast<std::size_t>(f)], cochain_complex<S>(ix.strata, e, data.ring)));
    }
    if (!same_complex(graded_piece(fc, k), direct_sum(parts, data.ring)))
      throw InvariantError("graded piece " + std::to_string(k) + " differs from (+) A(S) (x) C(S)");
  }
  return fc;
}

}  // namespace detail

/// Primal data: the filtered total complex. Dual data: the linear dual of the
/// primal complex built on the dualized data, with levels -sigma.
template <class S>
FilteredComplex<S> total_complex(const StratifiedData<S>& data) {
  validate_data(data);
  if (data.mode == Mode::Primal) return detail::primal_total(data);
  const FilteredComplex<S> pc = detail::primal_total(dualize(data));
  FilteredComplex<S> fc;
  fc.total = dual(pc.total);
  fc.second_quadrant = true;
  for (const auto& [n, l] : pc.level) {
    auto& out = fc.level[-n];
    for (int v : l) out.push_back(-v);
    fc.cells[-n] = pc.cells.at(n);
  }
  if (auto v = filtration_violation(fc)) throw InvariantError(*v);
  return fc;
}

template <class S>
GradedModule abutment(const StratifiedData<S>& data) {
  return homology(total_complex(data).total);
}

// --- spectral sequence ------------------------------------------------------

using Bidegree = std::pair<int, int>;  // (p, q)

struct PageEntry {
  Index rank = 0;
  std::vector<int> weights;
  bool operator==(const PageEntry&) const = default;
};

/// Chosen basis of E_r^{p,n}: representatives in total-complex coordinates,
/// with a basis of the denominator Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1}.
template <class S>
struct PageBasis {
  Matrix<S> den;
  Matrix<S> reps;
  std::vector<int> weights;
};

template <class S>
struct Page {
  int r = 1;
  std::map<Bidegree, PageEntry> entries;  // non-zero entries only
  std::map<Bidegree, Matrix<S>> d;        // source bidegree -> matrix into (p+r, q-r+1); non-zero only
  std::map<std::pair<int, int>, PageBasis<S>> basis;  // (p, n)

  Index rank(int p, int q) const {
    auto it = entries.find({p, q});
    return it == entries.end() ? 0 : it->second.rank;
  }
  bool trivial_differential() const { return d.empty(); }
  std::map<int, Index> totals() const {
    std::map<int, Index> t;
    for (const auto& [b, e] : entries) t[b.first + b.second] += e.rank;
    return t;
  }
};

template <class S>
struct Pages {
  Ring ring = Ring::rationals();
  bool second_quadrant = false;
  int min_level = 0, max_level = 0;
  std::vector<Page<S>> pages;  // r = 1, 2, ... ; the last one is E_infinity
  GradedModule abutment;
  int degeneration = 1;        // smallest r with d_s = 0 for all s >= r
  bool weighted = false;

  const Page<S>& page(int r) const { return pages.at(static_cast<std::size_t>(std::min<int>(r, static_cast<int>(pages.size())) - 1)); }
  const Page<S>& infinity() const { return pages.back(); }
};

namespace detail {

template <class S>
Matrix<S> selector(Index n, const std::vector<Index>& idx) {
  Matrix<S> m = zero_matrix<S>(n, static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) m(idx[i], static_cast<Index>(i)) = S(1);
  return m;
}

/// Exact page computation on one weight block, in block coordinates.
template <class S>
class PageEngine {
 public:
  PageEngine(const FreeComplex<S>& c, std::map<int, std::vector<int>> level) : c_(c), level_(std::move(level)) {}

  // F^p in degree n as coordinate indices
  std::vector<Index> filtered(int n, int p) const {
    std::vector<Index> out;
    auto it = level_.find(n);
    if (it == level_.end()) return out;
    for (std::size_t i = 0; i < it->second.size(); ++i)
      if (it->second[i] >= p) out.push_back(static_cast<Index>(i));
    return out;
  }

  // Z_r^{p} in degree n: x in F^p with D x in F^{p+r}; r = 0 gives F^p
  const Matrix<S>& Z(int r, int p, int n) {
    const auto key = std::make_tuple(r, p, n);
    auto it = z_.find(key);
    if (it != z_.end()) return it->second;
    const Index dim = c_.rank(n);
    const auto cols = filtered(n, p);
    Matrix<S> out;
    if (r == 0 || cols.empty()) {
      out = selector<S>(dim, cols);
    } else {
      std::vector<Index> rows;
      const auto lt = level_.count(n + 1) ? level_.at(n + 1) : std::vector<int>{};
      for (std::size_t i = 0; i < lt.size(); ++i)
        if (lt[i] < p + r) rows.push_back(static_cast<Index>(i));
      const Matrix<S> m = submatrix(c_.d(n), rows, cols);
      out = multiply(selector<S>(dim, cols), kernel_basis(m));
    }
    return z_.emplace(key, std::move(out)).first->second;
  }

  Matrix<S> denominator(int r, int p, int n) {
    Matrix<S> a = Z(r - 1, p + 1, n);
    const Matrix<S> z = Z(r - 1, p - r + 1, n - 1);
    Matrix<S> b = multiply(c_.d(n - 1), z);
    if (b.rows() != a.rows()) b = zero_matrix<S>(a.rows(), 0);
    return column_basis(hstack(a, b));
  }

  std::pair<Matrix<S>, Matrix<S>> basis(int r, int p, int n) {
    const Matrix<S> den = denominator(r, p, n);
    const Matrix<S>& z = Z(r, p, n);
    return {den, complement_columns(den, z)};
  }

  const FreeComplex<S>& complex() const { return c_; }

 private:
  FreeComplex<S> c_;
  std::map<int, std::vector<int>> level_;
  std::map<std::tuple<int, int, int>, Matrix<S>> z_;
};

/// Coordinates of the columns of v (cycles in Z_r) on the chosen representatives.
template <class S>
Matrix<S> page_coordinates(const PageBasis<S>& b, const Matrix<S>& v) {
  const Index k = b.reps.cols();
  if (v.cols() == 0 || k == 0) return zero_matrix<S>(k, v.cols());
  const auto sol = solve(hstack(b.den, b.reps), v);
  if (!sol) throw InvariantError("vector does not lie in the page's cycle space");
  return sol->bottomRows(k);
}

}  // namespace detail

/// Spectral sequence of the filtered complex, per weight block, up to
/// r = span + 1 where it has converged. Fields only.
template <class S>
Pages<S> spectral_pages(const FilteredComplex<S>& fc) {
  const Ring ring = fc.total.ring();
  if constexpr (!is_field_v<S>) {
    throw PreconditionError("pages require a field");
  } else {
    Pages<S> out;
    out.ring = ring;
    out.second_quadrant = fc.second_quadrant;
    out.min_level = fc.min_level();
    out.max_level = fc.max_level();
    out.weighted = fc.total.has_weights();
    out.abutment = homology(fc.total);
    const int span = out.max_level - out.min_level;
    const int rmax = span + 1;
    const auto& t = fc.total;

    // weight blocks
    std::set<int> ws = t.weight_values();
    struct Block {
      int w;
      std::map<int, std::vector<Index>> idx;  // per degree, indices into the total basis
      detail::PageEngine<S> engine;
    };
    std::vector<Block> blocks;
    for (int w : ws) {
      std::map<int, std::vector<Index>> idx;
      std::map<int, Index> ranks;
      std::map<int, std::vector<int>> lev;
      for (int n : t.degrees()) {
        const auto wn = t.weights(n);
        auto ii = detail::indices_with_weight(wn, w);
        if (ii.empty()) continue;
        ranks[n] = static_cast<Index>(ii.size());
        for (Index i : ii) lev[n].push_back(fc.levels(n)[static_cast<std::size_t>(i)]);
        idx[n] = std::move(ii);
      }
      std::map<int, Matrix<S>> diff;
      for (const auto& [n, ii] : idx) {
        auto next = idx.find(n + 1);
        if (next != idx.end()) diff[n] = detail::submatrix(t.d(n), next->second, ii);
      }
      blocks.push_back(Block{w, idx, detail::PageEngine<S>(FreeComplex<S>(ring, ranks, std::move(diff)), std::move(lev))});
    }

    std::vector<int> degrees = t.degrees();
    for (int r = 1; r <= rmax; ++r) {
      Page<S> page;
      page.r = r;
      for (int n : degrees)
        for (int p = out.min_level; p <= out.max_level; ++p) {
          PageBasis<S> pb;
          const Index dim = t.rank(n);
          pb.den = zero_matrix<S>(dim, 0);
          pb.reps = zero_matrix<S>(dim, 0);
          for (auto& b : blocks) {
            if (!b.idx.count(n)) continue;
            auto [den, reps] = b.engine.basis(r, p, n);
            const Matrix<S> emb = detail::selector<S>(dim, b.idx.at(n));
            pb.den = hstack(pb.den, multiply(emb, den));
            pb.reps = hstack(pb.reps, multiply(emb, reps));
            pb.weights.insert(pb.weights.end(), static_cast<std::size_t>(reps.cols()), b.w);
          }
          if (pb.reps.cols() > 0) page.entries[{p, n - p}] = PageEntry{pb.reps.cols(), out.weighted ? pb.weights : std::vector<int>{}};
          page.basis[{p, n}] = std::move(pb);
        }
      // d_r
      for (const auto& [key, pb] : page.basis) {
        const auto [p, n] = key;
        if (pb.reps.cols() == 0) continue;
        auto tgt = page.basis.find({p + r, n + 1});
        if (tgt == page.basis.end() || tgt->second.reps.cols() == 0) continue;
        const Matrix<S> dz = multiply(t.d(n), pb.reps);
        const Matrix<S> m = detail::page_coordinates(tgt->second, dz);
        if (!is_zero_matrix(m)) page.d[{p, n - p}] = m;
      }
      out.pages.push_back(std::move(page));
    }

    // coherence: H(E_r, d_r) = E_{r+1}, d_r o d_r = 0
    for (std::size_t k = 0; k + 1 < out.pages.size(); ++k) {
      const Page<S>& e = out.pages[k];
      const int r = e.r;
      for (int n : degrees)
        for (int p = out.min_level; p <= out.max_level; ++p) {
          const Index dim = e.rank(p, n - p);
          auto out_d = e.d.find({p, n - p});
          auto in_d = e.d.find({p - r, n - 1 - (p - r)});
          const Index rout = out_d == e.d.end() ? 0 : rank(out_d->second);
          const Index rin = in_d == e.d.end() ? 0 : rank(in_d->second);
          if (out_d != e.d.end() && in_d != e.d.end() && !is_zero_matrix(multiply(out_d->second, in_d->second)))
            throw InvariantError("d_r o d_r != 0 on page " + std::to_string(r));
          if (dim - rout - rin != out.pages[k + 1].rank(p, n - p))
            throw InvariantError("H(E_" + std::to_string(r) + ") != E_" + std::to_string(r + 1) + " at (" + std::to_string(p) + "," +
                                 std::to_string(n - p) + ")");
        }
    }
    // E_infinity against the abutment
    const auto tot = out.infinity().totals();
    for (int n : degrees) {
      const Index e = tot.count(n) ? tot.at(n) : 0;
      if (e != out.abutment.rank(n)) throw InvariantError("E_infinity does not sum to the abutment in degree " + std::to_string(n));
    }
    if (!out.infinity().d.empty()) throw InvariantError("non-zero differential past the filtration span");
    out.degeneration = 1;
    for (const auto& pg : out.pages)
      if (!pg.d.empty()) out.degeneration = pg.r + 1;
    return out;
  }
}

/// Weight-forced degeneration. A differential d_r maps (p, q, w) to
/// (p + r, q - r + 1, w), so it shifts w - q by r - 1; it vanishes once r - 1
/// exceeds every difference of offsets w - q present on E_1.
struct WeightDegeneration {
  bool forced = false;
  int from = 0;            // first page with all later d_r forced to vanish
  bool consistent = true;  // no computed d_r at r >= from is non-zero
  std::string text;
};

template <class S>
WeightDegeneration weight_degeneration(const Pages<S>& pages) {
  if (!pages.weighted) throw PreconditionError("weight degeneration needs weights");
  std::set<int> offsets;
  for (const auto& [b, e] : pages.pages.front().entries)
    for (int w : e.weights) offsets.insert(w - b.second);
  int spread = 0;
  if (!offsets.empty()) spread = *offsets.rbegin() - *offsets.begin();
  WeightDegeneration out;
  out.from = spread + 2;
  const int span = pages.max_level - pages.min_level;
  out.forced = out.from <= span + 1;
  for (const auto& pg : pages.pages)
    if (pg.r >= out.from && !pg.d.empty()) out.consistent = false;
  out.text = out.forced ? "forced at r=" + std::to_string(out.from) : "no forced degeneration";
  return out;
}

// --- E_1 by Kunneth ---------------------------------------------------------

template <class S>
struct E1Report {
  std::map<Bidegree, PageEntry> entries;
  std::map<Bidegree, Matrix<S>> d1;  // into (p+1, q); non-zero only
  std::vector<std::string> warnings;

  Index rank(int p, int q) const {
    auto it = entries.find({p, q});
    return it == entries.end() ? 0 : it->second.rank;
  }
  std::map<int, Index> totals() const {
    std::map<int, Index> t;
    for (const auto& [b, e] : entries) t[b.first + b.second] += e.rank;
    return t;
  }
};

namespace detail {

template <class S>
E1Report<S> primal_e1(const StratifiedData<S>& data) {
  const StrataIndex ix(data.poset);
  const PosetDiagram<S> d = data_diagram(data, ix);
  const auto maps = compose_transitions(d, data.poset.bottom_id());
  const Ring& ring = data.ring;
  E1Report<S> out;

  struct Part {
    int full, strat;
    int i, j;
    CohomologyBasis<S> ha, hc;
    std::vector<int> weights;
  };
  // summands of E_1^{p,q}, in summand order
  std::map<Bidegree, std::vector<Part>> parts;
  std::vector<int> order;
  order.push_back(kHat);
  for (int s = 0; s < ix.strata.size(); ++s) order.push_back(s);
  std::map<int, FreeComplex<S>> cs;
  for (int s : order) {
    const int f = ix.full(s, data.poset);
    const auto& a = data.A[static_cast<std::size_t>(f)];
    const FreeComplex<S> c = cochain_complex<S>(ix.strata, s, ring);
    cs.emplace(s, c);
    const GradedModule ha = homology(a), hc = homology(c);
    for (const auto& [j, piece] : hc.degrees)
      if (!piece.torsion.empty())
        out.warnings.push_back("h^" + std::to_string(j) + "(" + data.poset.full.id(f) + ") has torsion; E_1 shows free parts only");
    for (const auto& [i, piece] : ha.degrees)
      if (!piece.torsion.empty())
        out.warnings.push_back("H^" + std::to_string(i) + " of A(" + data.poset.full.id(f) + ") has torsion; Tor terms omitted");
    const int p = data.sigma[static_cast<std::size_t>(f)];
    for (const auto& [i, pa] : ha.degrees)
      for (const auto& [j, pc] : hc.degrees) {
        if (pa.rank == 0 || pc.rank == 0) continue;
        Part part{f, s, i, j, cohomology_basis(a, i), cohomology_basis(c, j), {}};
        const auto wa = a.has_weights() ? pa.weights : std::vector<int>(static_cast<std::size_t>(pa.rank), 0);
        for (int w : wa)
          for (Index k = 0; k < pc.rank; ++k) part.weights.push_back(w);
        parts[{p, i + j - p}].push_back(std::move(part));
      }
  }
  const bool weighted = std::any_of(data.A.begin(), data.A.end(), [](const auto& a) { return a.has_weights(); });
  for (const auto& [b, ps] : parts) {
    PageEntry e;
    for (const auto& part : ps) {
      e.rank += part.ha.rank() * part.hc.rank();
      if (weighted) e.weights.insert(e.weights.end(), part.weights.begin(), part.weights.end());
    }
    if (weighted) std::sort(e.weights.begin(), e.weights.end());
    if (e.rank > 0) out.entries[b] = e;
  }
  // d_1 = sum over covers of (-1)^i H(rho) (x) H(b)
  for (const auto& [b, ps] : parts) {
    auto tgt = parts.find({b.first + 1, b.second});
    if (tgt == parts.end()) continue;
    Matrix<S> m = zero_matrix<S>(out.rank(b.first + 1, b.second), out.rank(b.first, b.second));
    Index col = 0;
    for (const auto& src : ps) {
      const Index w = src.ha.rank() * src.hc.rank();
      Index row = 0;
      for (const auto& dst : tgt->second) {
        const Index h = dst.ha.rank() * dst.hc.rank();
        if (dst.i == src.i && d.less(src.strat, dst.strat)) {
          const Matrix<S> hr = induced_map(src.ha, dst.ha, maps.at({src.strat, dst.strat}).at(src.i));
          const ChainBasis bx = chain_basis(ix.strata, src.strat), by = chain_basis(ix.strata, dst.strat);
          const Matrix<S> bm = convert<S>(b_cohomological_matrix(bx, by, dst.strat, src.j), ring);
          const Matrix<S> hb = induced_map(src.hc, dst.hc, bm);
          Matrix<S> k = kron(hr, hb);
          if (src.i % 2 != 0) k = -k;
          m.block(row, col, h, w) += k;
        }
        row += h;
      }
      col += w;
    }
    if (!is_zero_matrix(m)) out.d1[b] = m;
  }
  return out;
}

}  // namespace detail

/// E_1 assembled from H(A(S)) (x) h(S) and d_1 from H(rho) (x) H(b). Dual data
/// is handled through the dualized primal data (E_1 transposes accordingly).
template <class S>
E1Report<S> e1_page(const StratifiedData<S>& data) {
  validate_data(data);
  if (data.mode == Mode::Primal) return detail::primal_e1(data);
  const E1Report<S> pr = detail::primal_e1(dualize(data));
  E1Report<S> out;
  out.warnings = pr.warnings;
  for (const auto& [b, e] : pr.entries) {
    PageEntry ne{e.rank, {}};
    for (int w : e.weights) ne.weights.push_back(-w);
    std::sort(ne.weights.begin(), ne.weights.end());
    out.entries[{-b.first, -b.second}] = ne;
  }
  // primal d_1 : (p, q) -> (p + 1, q) transposes to (-p - 1, -q) -> (-p, -q)
  for (const auto& [b, m] : pr.d1) out.d1[{-b.first - 1, -b.second}] = m.transpose();
  return out;
}

// --- purity -----------------------------------------------------------------

/// Closure data: A(S) = H(S-bar) placed in degree +2c_S with weights +2c_S;
/// Gysin maps are given in unshifted source degrees.
template <class S>
StratifiedData<S> purity_input(const HatPoset& ph, const std::vector<int>& sigma, const std::vector<FreeComplex<S>>& closures,
                               const std::vector<int>& codim, const std::map<Edge, GradedMap<S>>& gysin, const Ring& ring) {
  const Poset& full = ph.full;
  if (static_cast<int>(codim.size()) != full.size() || static_cast<int>(closures.size()) != full.size())
    throw std::invalid_argument("closure data must cover every element");
  if (codim[static_cast<std::size_t>(ph.bottom)] != 0) throw PreconditionError("inconsistent codimensions: bottom must have codimension 0");
  for (const auto& [s, t] : full.cover_pairs())
    if (codim[static_cast<std::size_t>(t)] <= codim[static_cast<std::size_t>(s)])
      throw PreconditionError("inconsistent codimensions: " + full.id(s) + " < " + full.id(t) + " but codim does not increase");
  StratifiedData<S> data;
  data.ring = ring;
  data.poset = ph;
  data.sigma = sigma;
  data.mode = Mode::Dual;
  for (int x = 0; x < full.size(); ++x) {
    const int c = codim[static_cast<std::size_t>(x)];
    const auto& h = closures[static_cast<std::size_t>(x)];
    FreeComplex<S> sh = shift(h, -2 * c);
    typename FreeComplex<S>::WeightMap w;
    for (int n : sh.degrees()) {
      auto ws = h.weights(n - 2 * c);
      for (int& v : ws) v += 2 * c;
      w[n] = ws;
    }
    data.A.push_back(FreeComplex<S>(ring, sh.ranks(), sh.differentials(), w));
  }
  for (const auto& [e, g] : gysin) {
    const int cs = codim[static_cast<std::size_t>(e.first)], ct = codim[static_cast<std::size_t>(e.second)];
    GradedMap<S> m{data.A[static_cast<std::size_t>(e.second)], data.A[static_cast<std::size_t>(e.first)], 0, {}};
    for (const auto& [j, mat] : g.components) {
      if (g.shift != 2 * (ct - cs)) throw PreconditionError("Gysin map " + full.id(e.second) + "->" + full.id(e.first) + " must raise degree by twice the relative codimension");
      m.components[j + 2 * ct] = mat;
    }
    data.maps[e] = std::move(m);
  }
  validate_data(data);
  return data;
}

// --- stratified isomorphisms --------------------------------------------------

/// (alpha, eta): alpha maps the elements of `source` bijectively onto those of
/// `target`; eta[S] : A'(alpha S) -> A(S).
template <class S>
struct StratifiedMorphism {
  std::vector<int> alpha;
  std::vector<GradedMap<S>> eta;
};

template <class S>
StratifiedMorphism<S> identity_morphism(const StratifiedData<S>& d) {
  StratifiedMorphism<S> m;
  for (int x = 0; x < d.poset.full.size(); ++x) {
    m.alpha.push_back(x);
    m.eta.push_back(identity_map(d.A[static_cast<std::size_t>(x)]));
  }
  return m;
}

/// beta o alpha for alpha : D -> D', beta : D' -> D''.
template <class S>
StratifiedMorphism<S> compose_morphisms(const StratifiedMorphism<S>& beta, const StratifiedMorphism<S>& alpha) {
  StratifiedMorphism<S> m;
  for (std::size_t x = 0; x < alpha.alpha.size(); ++x) {
    const int ax = alpha.alpha[x];
    m.alpha.push_back(beta.alpha[static_cast<std::size_t>(ax)]);
    m.eta.push_back(compose(alpha.eta[x], beta.eta[static_cast<std::size_t>(ax)]));
  }
  return m;
}

template <class S>
struct InducedMorphism {
  GradedMap<S> map;                                      // T' -> T
  std::vector<std::map<std::pair<int, int>, Matrix<S>>> pages;  // per page, (p, n) -> E'_r -> E_r
};

/// The filtered map T' -> T with components eta (x) transport(alpha).
template <class S>
GradedMap<S> total_map(const StratifiedMorphism<S>& m, const StratifiedData<S>& source, const StratifiedData<S>& target,
                       const FilteredComplex<S>& ts, const FilteredComplex<S>& tt) {
  if (source.mode != Mode::Primal || target.mode != Mode::Primal)
    throw PreconditionError("stratified morphisms are supported for primal data");
  const Poset& p = source.poset.full;
  const Poset& q = target.poset.full;
  if (static_cast<int>(m.alpha.size()) != p.size() || !is_isomorphism(p, q, m.alpha))
    throw PreconditionError("alpha is not an order isomorphism");
  if (m.alpha[static_cast<std::size_t>(source.poset.bottom)] != target.poset.bottom)
    throw PreconditionError("alpha must send the bottom to the bottom");
  for (int x = 0; x < p.size(); ++x)
    if (source.sigma[static_cast<std::size_t>(x)] != target.sigma[static_cast<std::size_t>(m.alpha[static_cast<std::size_t>(x)])])
      throw PreconditionError("alpha does not preserve sigma");
  if (static_cast<int>(m.eta.size()) != p.size()) throw std::invalid_argument("one eta per stratum required");
  for (int x = 0; x < p.size(); ++x) {
    const auto& e = m.eta[static_cast<std::size_t>(x)];
    if (e.shift != 0 || !e.is_chain_map()) throw InvariantError("eta at " + p.id(x) + " is not a degree-0 chain map");
  }
  const auto rs = restriction_system(source), rt = restriction_system(target);
  for (const auto& [s, t] : p.cover_pairs()) {
    const GradedMap<S> lhs = compose(m.eta[static_cast<std::size_t>(t)], rt.at({m.alpha[static_cast<std::size_t>(s)], m.alpha[static_cast<std::size_t>(t)]}));
    const GradedMap<S> rhs = compose(rs.at({s, t}), m.eta[static_cast<std::size_t>(s)]);
    if (!same_map(lhs, rhs)) throw InvariantError("eta does not commute with restriction " + p.id(s) + "->" + p.id(t));
  }
  // strata-level relabelling: target strata chain -> source strata chain
  const StrataIndex is(source.poset), it(target.poset);
  std::vector<int> inv(static_cast<std::size_t>(p.size()));
  for (int x = 0; x < p.size(); ++x) inv[static_cast<std::size_t>(m.alpha[static_cast<std::size_t>(x)])] = x;
  // index of source cells
  std::map<int, std::map<std::tuple<int, int, Index, Chain>, Index>> where;
  for (const auto& [n, cells] : ts.cells)
    for (std::size_t i = 0; i < cells.size(); ++i)
      where[n][{cells[i].element, cells[i].internal, cells[i].a_index, cells[i].chain}] = static_cast<Index>(i);
  GradedMap<S> f{tt.total, ts.total, 0, {}};
  for (const auto& [n, cells] : tt.cells) {
    Matrix<S> mat = zero_matrix<S>(ts.total.rank(n), tt.total.rank(n));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const FilteredCell& c = cells[j];
      const int sx = inv[static_cast<std::size_t>(c.element)];
      Chain ch;
      for (int v : c.chain) {
        const int fx = inv[static_cast<std::size_t>(it.to_full[static_cast<std::size_t>(v)])];
        ch.push_back(is.to_strata[static_cast<std::size_t>(fx)]);
      }
      const Matrix<S> e = m.eta[static_cast<std::size_t>(sx)].at(c.internal);
      for (Index a = 0; a < e.rows(); ++a) {
        if (is_zero(e(a, c.a_index))) continue;
        mat(where.at(n).at({sx, c.internal, a, ch}), static_cast<Index>(j)) = e(a, c.a_index);
      }
    }
    f.components[n] = std::move(mat);
  }
  if (!f.is_chain_map()) throw InvariantError("induced map on total complexes is not a chain map");
  for (const auto& [n, mat] : f.components) {
    const auto ls = tt.levels(n), lt = ts.levels(n);
    for (Index j = 0; j < mat.cols(); ++j)
      for (Index i = 0; i < mat.rows(); ++i)
        if (!is_zero(mat(i, j)) && lt[static_cast<std::size_t>(i)] < ls[static_cast<std::size_t>(j)])
          throw InvariantError("induced map lowers the filtration");
  }
  return f;
}

/// Maps on every page induced by a filtered map T' -> T, checked to commute with d_r.
template <class S>
std::vector<std::map<std::pair<int, int>, Matrix<S>>> page_maps(const GradedMap<S>& f, const Pages<S>& source, const Pages<S>& target) {
  std::vector<std::map<std::pair<int, int>, Matrix<S>>> out;
  const std::size_t np = std::min(source.pages.size(), target.pages.size());
  for (std::size_t k = 0; k < np; ++k) {
    const Page<S>& ps = source.pages[k];
    const Page<S>& pt = target.pages[k];
    std::map<std::pair<int, int>, Matrix<S>> maps;
    for (const auto& [key, b] : ps.basis) {
      auto tb = pt.basis.find(key);
      const Index cols = b.reps.cols();
      const Index rows = tb == pt.basis.end() ? 0 : tb->second.reps.cols();
      if (rows == 0 || cols == 0) continue;
      maps[key] = detail::page_coordinates(tb->second, multiply(f.at(key.second), b.reps));
    }
    // d_r commutes with the page map
    const int r = ps.r;
    for (const auto& [key, b] : ps.basis) {
      const auto [p, n] = key;
      const Index cols = b.reps.cols();
      if (cols == 0) continue;
      auto get = [](const std::map<std::pair<int, int>, Matrix<S>>& m, std::pair<int, int> k, Index rows, Index c) {
        auto it = m.find(k);
        return it == m.end() ? zero_matrix<S>(rows, c) : it->second;
      };
      auto d_of = [&](const Page<S>& pg, int pp, int nn) {
        const Index rows = pg.basis.count({pp + r, nn + 1}) ? pg.basis.at({pp + r, nn + 1}).reps.cols() : 0;
        const Index c = pg.basis.count({pp, nn}) ? pg.basis.at({pp, nn}).reps.cols() : 0;
        auto it = pg.d.find({pp, nn - pp});
        return it == pg.d.end() ? zero_matrix<S>(rows, c) : it->second;
      };
      const Index rt_src = pt.basis.count(key) ? pt.basis.at(key).reps.cols() : 0;
      const Index rt_dst = pt.basis.count({p + r, n + 1}) ? pt.basis.at({p + r, n + 1}).reps.cols() : 0;
      const Index rs_dst = ps.basis.count({p + r, n + 1}) ? ps.basis.at({p + r, n + 1}).reps.cols() : 0;
      const Matrix<S> lhs = multiply(d_of(pt, p, n), get(maps, key, rt_src, cols));
      const Matrix<S> rhs = multiply(get(maps, {p + r, n + 1}, rt_dst, rs_dst), d_of(ps, p, n));
      if (lhs != rhs) throw InvariantError("page map does not commute with d_" + std::to_string(r));
    }
    out.push_back(std::move(maps));
  }
  return out;
}

/// Induced filtered map and page maps for (alpha, eta) : source -> target.
template <class S>
InducedMorphism<S> apply_morphism(const StratifiedMorphism<S>& m, const StratifiedData<S>& source, const StratifiedData<S>& target) {
  const FilteredComplex<S> ts = total_complex(source), tt = total_complex(target);
  InducedMorphism<S> out;
  out.map = total_map(m, source, target, ts, tt);
  if (source.ring.is_field()) out.pages = page_maps(out.map, spectral_pages(tt), spectral_pages(ts));
  return out;
}

}  // namespace stratify

#endif  // STRATIFY_ENGINE_HPP
