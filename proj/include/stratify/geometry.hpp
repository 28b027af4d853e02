// Generators of stratified data: central hyperplane arrangements, partition
// and boolean lattices, and small spaces with classical cohomology.
#ifndef STRATIFY_GEOMETRY_HPP
#define STRATIFY_GEOMETRY_HPP

#include <string>
#include <vector>

#include "stratify/engine.hpp"

namespace stratify {

/// Hyperplanes {f = 0} in C^n given by rational linear forms. A form of
/// length n + 1 carries a constant term in its last entry.
struct ArrangementSpec {
  int dim = 0;
  std::vector<std::vector<Rational>> forms;
};

/// Intersection poset of a central arrangement. Flats are the closed sets of
/// hyperplanes containing an intersection; the ambient space is the bottom.
struct Arrangement {
  ArrangementSpec spec;
  HatPoset poset;
  std::vector<std::vector<int>> flats;  // per full index, sorted hyperplane indices
  std::vector<int> codim;               // per full index
  int ambient_dim = 0;                  // dimension after optional essentialization
};

Arrangement intersection_poset(const ArrangementSpec& spec, bool essentialize = false);

/// x - y, y - z, x - z in C^3.
ArrangementSpec braid_spec();
/// Coordinate hyperplanes of C^n.
ArrangementSpec boolean_spec(int n);

/// Permutation of the hyperplanes induced by x -> g x (g invertible n x n);
/// throws when g does not preserve the arrangement.
std::vector<int> hyperplane_permutation(const ArrangementSpec& spec, const std::vector<std::vector<Rational>>& g);
/// Induced map on the intersection poset (full indices).
std::vector<int> flat_permutation(const Arrangement& arr, const std::vector<int>& hyperplanes);

/// Set partitions of {1..n} ordered by refinement; the discrete partition is
/// the bottom. Identifiers like "12|3".
HatPoset partition_lattice(int n);

/// A(S) = K in degree 2 dim S with weight 2 dim S (H_c of C^d), rho = 0,
/// sigma = codimension.
template <class S>
StratifiedData<S> arrangement_data(const Arrangement& arr, const Ring& ring) {
  StratifiedData<S> data;
  data.ring = ring;
  data.poset = arr.poset;
  data.sigma = arr.codim;
  for (int x = 0; x < arr.poset.full.size(); ++x) {
    const int d = arr.ambient_dim - arr.codim[static_cast<std::size_t>(x)];
    data.A.push_back(unit_complex<S>(ring, 2 * d, 2 * d));
  }
  validate_data(data);
  return data;
}

/// The automorphism of arrangement data induced by a hyperplane permutation:
/// complex-linear maps act trivially on H_c of each flat.
template <class S>
StratifiedMorphism<S> arrangement_morphism(const Arrangement& arr, const StratifiedData<S>& data, const std::vector<int>& hyperplanes) {
  StratifiedMorphism<S> m;
  m.alpha = flat_permutation(arr, hyperplanes);
  for (int x = 0; x < arr.poset.full.size(); ++x) m.eta.push_back(identity_map(data.A[static_cast<std::size_t>(x)]));
  return m;
}

/// P^1 minus k points: A(X) = H_c(P^1) = K in degrees 0, 2 (weights 0, 2),
/// A(p_i) = K in degree 0, restriction the identity in degree 0.
template <class S>
StratifiedData<S> p1_minus_points(int k, const Ring& ring) {
  if (k < 1) throw PreconditionError("p1_minus_points needs k >= 1");
  std::vector<std::string> ids;
  for (int i = 1; i <= k; ++i) ids.push_back("p" + std::to_string(i));
  StratifiedData<S> data;
  data.ring = ring;
  data.poset = adjoin_bottom(build_poset(ids, {}));
  const Poset& full = data.poset.full;
  data.sigma.assign(static_cast<std::size_t>(full.size()), 1);
  data.sigma[static_cast<std::size_t>(data.poset.bottom)] = 0;
  const FreeComplex<S> p1(ring, {{0, 1}, {2, 1}}, {}, typename FreeComplex<S>::WeightMap{{0, {0}}, {2, {2}}});
  const FreeComplex<S> pt = unit_complex<S>(ring, 0, 0);
  for (int x = 0; x < full.size(); ++x) data.A.push_back(x == data.poset.bottom ? p1 : pt);
  for (int x = 0; x < full.size(); ++x) {
    if (x == data.poset.bottom) continue;
    GradedMap<S> r{p1, pt, 0, {}};
    r.components[0] = identity_matrix<S>(1);
    r.components[0](0, 0) = ring_scalar<S>(ring, 1);
    data.maps[{data.poset.bottom, x}] = r;
  }
  validate_data(data);
  return data;
}

/// Dual-mode P^1 minus k points through purity: closures P^1 (codim 0) and
/// points (codim 1), Gysin H^0(pt) -> H^2(P^1) the identity.
template <class S>
StratifiedData<S> p1_minus_points_dual(int k, const Ring& ring) {
  const StratifiedData<S> primal = p1_minus_points<S>(k, ring);
  const HatPoset& ph = primal.poset;
  std::vector<FreeComplex<S>> closures;
  std::vector<int> codim;
  for (int x = 0; x < ph.full.size(); ++x) {
    closures.push_back(primal.A[static_cast<std::size_t>(x)]);
    codim.push_back(x == ph.bottom ? 0 : 1);
  }
  std::map<Edge, GradedMap<S>> gysin;
  for (int x = 0; x < ph.full.size(); ++x) {
    if (x == ph.bottom) continue;
    GradedMap<S> g{closures[static_cast<std::size_t>(x)], closures[static_cast<std::size_t>(ph.bottom)], 2, {}};
    Matrix<S> one(1, 1);
    one(0, 0) = ring_scalar<S>(ring, 1);
    g.components[0] = one;
    gysin[{ph.bottom, x}] = g;
  }
  return purity_input<S>(ph, primal.sigma, closures, codim, gysin, ring);
}

/// Normal crossing divisor with boolean strata poset B_n: closures C^{n-|S|}
/// (cohomology K in degree 0), codimension |S|. Yields the complement (C^*)^n.
template <class S>
StratifiedData<S> ncd_boolean(int n, const Ring& ring) {
  if (n < 1 || n > 6) throw PreconditionError("ncd_boolean needs 1 <= n <= 6");
  const HatPoset ph = as_hat(boolean_lattice(n, true), "{}");
  const auto rk = rank_function(ph);
  std::vector<FreeComplex<S>> closures(static_cast<std::size_t>(ph.full.size()), unit_complex<S>(ring, 0, 0));
  const StrataIndex ix(ph);
  for (int s = 0; s < ix.strata.size(); ++s) {
    const GradedModule h = poset_cohomology<S>(ix.strata, s, ring);
    if (h.total_rank() != 1) throw InvariantError("h(S) is not of rank one for a normal crossing stratum");
  }
  return purity_input<S>(ph, *rk, closures, *rk, {}, ring);
}

}  // namespace stratify

#endif  // STRATIFY_GEOMETRY_HPP
