// Seeded random stratified data for the invariant suites.
//
// Each A(S) is a sum of generators, each supported on a down-set of P-hat
// containing the bottom: a single K in some degree, or an acyclic pair
// K -c-> K (c = 2 over Z gives torsion). Restrictions are the projections,
// which are automatically functorial. A random weight-respecting unimodular
// change of basis per element then hides the block structure.
#ifndef STRATIFY_RANDOM_DATA_HPP
#define STRATIFY_RANDOM_DATA_HPP

#include <random>

#include "stratify/engine.hpp"

namespace stratify {

struct RandomDataOptions {
  int max_strata = 4;
  int max_generators = 4;
  int max_degree = 3;
  int max_weight = 2;
  bool torsion = true;
  bool weights = true;
  bool conjugate = true;
  double density = 0.35;
};

namespace detail {

struct Generator {
  int degree = 0;
  int weight = 0;
  bool pair = false;  // K in degree n -> K in degree n+1
  long coefficient = 1;
  std::vector<char> support;  // per full index
};

template <class S>
Matrix<S> random_unimodular(std::mt19937_64& rng, const std::vector<int>& weights, const Ring& ring) {
  const Index n = static_cast<Index>(weights.size());
  Matrix<S> u = identity_matrix<S>(n);
  if (n < 2) return u;
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int step = 0; step < 2 * n; ++step) {
    const Index i = pick(rng), j = pick(rng);
    if (i == j || weights[static_cast<std::size_t>(i)] != weights[static_cast<std::size_t>(j)]) continue;
    const S c = ring_scalar<S>(ring, coeff(rng));
    for (Index k = 0; k < n; ++k) u(i, k) = u(i, k) + c * u(j, k);
  }
  return u;
}

}  // namespace detail

/// Primal-mode random data on a random strata poset with at most
/// `max_strata` elements.
template <class S>
StratifiedData<S> random_data(std::mt19937_64& rng, const Ring& ring, const RandomDataOptions& opt = {}) {
  const HatPoset ph = adjoin_bottom(random_poset(rng, opt.max_strata, false, opt.density));
  const Poset& full = ph.full;
  const int size = full.size();

  std::uniform_int_distribution<int> ngen(1, std::max(1, opt.max_generators));
  std::uniform_int_distribution<int> deg(0, opt.max_degree);
  std::uniform_int_distribution<int> wt(0, opt.max_weight);
  std::bernoulli_distribution coin(0.5);
  std::vector<detail::Generator> gens(static_cast<std::size_t>(ngen(rng)));
  for (auto& g : gens) {
    g.degree = deg(rng);
    g.weight = opt.weights ? wt(rng) : 0;
    g.pair = coin(rng);
    g.coefficient = (g.pair && opt.torsion && coin(rng)) ? 2 : 1;
    // down-set generated by a random antichain of tops
    g.support.assign(static_cast<std::size_t>(size), 0);
    g.support[static_cast<std::size_t>(ph.bottom)] = 1;
    for (int x = 0; x < size; ++x) {
      if (!coin(rng)) continue;
      g.support[static_cast<std::size_t>(x)] = 1;
      for (int y : full.below(x)) g.support[static_cast<std::size_t>(y)] = 1;
    }
  }

  // basis of A(x): (generator, slot) ordered by degree, then generator
  struct Cell {
    std::size_t gen;
    int slot;
  };
  std::vector<std::map<int, std::vector<Cell>>> cells(static_cast<std::size_t>(size));
  for (int x = 0; x < size; ++x)
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const auto& g = gens[k];
      if (!g.support[static_cast<std::size_t>(x)]) continue;
      cells[static_cast<std::size_t>(x)][g.degree].push_back({k, 0});
      if (g.pair) cells[static_cast<std::size_t>(x)][g.degree + 1].push_back({k, 1});
    }
  auto position = [&](int x, int n, std::size_t gen, int slot) -> Index {
    const auto& v = cells[static_cast<std::size_t>(x)].at(n);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i].gen == gen && v[i].slot == slot) return static_cast<Index>(i);
    return -1;
  };

  StratifiedData<S> data;
  data.ring = ring;
  data.poset = ph;
  data.mode = Mode::Primal;

  // sigma: strictly increasing with random gaps
  data.sigma.assign(static_cast<std::size_t>(size), 0);
  for (int x : full.linear_extension()) {
    if (x == ph.bottom) continue;
    int s = 1;
    for (int y : full.lower_covers(x)) s = std::max(s, data.sigma[static_cast<std::size_t>(y)] + 1);
    data.sigma[static_cast<std::size_t>(x)] = s + (coin(rng) && coin(rng) ? 1 : 0);
  }

  std::vector<std::map<int, Matrix<S>>> basis_change(static_cast<std::size_t>(size)), inverse_change(static_cast<std::size_t>(size));
  for (int x = 0; x < size; ++x) {
    std::map<int, Index> ranks;
    std::map<int, Matrix<S>> diff;
    typename FreeComplex<S>::WeightMap weights;
    for (const auto& [n, v] : cells[static_cast<std::size_t>(x)]) {
      ranks[n] = static_cast<Index>(v.size());
      for (const auto& c : v) weights[n].push_back(gens[c.gen].weight);
    }
    for (const auto& [n, v] : cells[static_cast<std::size_t>(x)]) {
      if (!ranks.count(n + 1)) continue;
      Matrix<S> m = zero_matrix<S>(ranks[n + 1], ranks[n]);
      for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j].slot == 0 && gens[v[j].gen].pair)
          m(position(x, n + 1, v[j].gen, 1), static_cast<Index>(j)) = ring_scalar<S>(ring, gens[v[j].gen].coefficient);
      diff[n] = m;
    }
    // conjugate: A' = U A U^{-1} with U unimodular and weight-block diagonal
    for (const auto& [n, r] : ranks) {
      Matrix<S> u = opt.conjugate ? detail::random_unimodular<S>(rng, weights[n], ring) : identity_matrix<S>(r);
      const auto inv = solve(u, identity_matrix<S>(r));
      if (!inv) throw InvariantError("random change of basis is not invertible");
      basis_change[static_cast<std::size_t>(x)][n] = u;
      inverse_change[static_cast<std::size_t>(x)][n] = *inv;
    }
    std::map<int, Matrix<S>> conj;
    for (auto& [n, m] : diff)
      conj[n] = multiply(multiply(basis_change[static_cast<std::size_t>(x)].at(n + 1), m), inverse_change[static_cast<std::size_t>(x)].at(n));
    std::optional<typename FreeComplex<S>::WeightMap> w;
    if (opt.weights) w = weights;
    data.A.push_back(FreeComplex<S>(ring, ranks, conj, w));
  }

  for (const auto& [x, y] : full.cover_pairs()) {
    GradedMap<S> rho{data.A[static_cast<std::size_t>(x)], data.A[static_cast<std::size_t>(y)], 0, {}};
    for (const auto& [n, v] : cells[static_cast<std::size_t>(y)]) {
      if (!cells[static_cast<std::size_t>(x)].count(n)) continue;
      const auto& src = cells[static_cast<std::size_t>(x)].at(n);
      Matrix<S> p = zero_matrix<S>(static_cast<Index>(v.size()), static_cast<Index>(src.size()));
      for (std::size_t j = 0; j < src.size(); ++j) {
        const Index i = position(y, n, src[j].gen, src[j].slot);
        if (i >= 0) p(i, static_cast<Index>(j)) = ring_scalar<S>(ring, 1);
      }
      p = multiply(multiply(basis_change[static_cast<std::size_t>(y)].at(n), p), inverse_change[static_cast<std::size_t>(x)].at(n));
      if (!is_zero_matrix(p)) rho.components[n] = p;
    }
    data.maps[{x, y}] = rho;
  }
  restriction_system(data);
  return data;
}

/// Dual-mode random data: the linear dual of random primal data.
template <class S>
StratifiedData<S> random_dual_data(std::mt19937_64& rng, const Ring& ring, const RandomDataOptions& opt = {}) {
  return dualize(random_data<S>(rng, ring, opt));
}

}  // namespace stratify

#endif  // STRATIFY_RANDOM_DATA_HPP
