#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "stratify/geometry.hpp"
#include "stratify/poset_cohomology.hpp"

using namespace stratify;

namespace {

const Ring kZ = Ring::integers();
const Ring kQ = Ring::rationals();

Poset v_poset() { return build_poset({"x", "y", "z"}, {{"x", "z"}, {"y", "z"}}); }
Poset diamond() { return build_poset({"0", "t", "u", "x"}, {{"0", "x"}, {"x", "t"}, {"0", "u"}, {"u", "t"}}); }

Index at(const ChainBasis& b, const Poset& p, std::initializer_list<const char*> ids) {
  Chain c;
  for (const char* s : ids) c.push_back(p.index(s));
  return b.index_of(c);
}

}  // namespace

TEST_CASE("cochains of a minimal element") {
  const Poset p = v_poset();
  const auto c = cochain_complex<Integer>(p, p.index("x"), kZ);
  CHECK(c.total_rank() == 1);
  CHECK(c.rank(1) == 1);
  const GradedModule h = poset_cohomology<Integer>(p, p.index("x"), kZ);
  CHECK(h.rank(1) == 1);
  CHECK(h.degrees.size() == 1);
}

TEST_CASE("V poset: cochains below the top") {
  const Poset p = v_poset();
  const int z = p.index("z");
  const auto c = cochain_complex<Integer>(p, z, kZ);
  CHECK(c.rank(1) == 1);
  CHECK(c.rank(2) == 2);
  const ChainBasis b = chain_basis(p, z);
  const IntMatrix d = c.d(1);
  CHECK(d(at(b, p, {"x", "z"}), 0) == 1);
  CHECK(d(at(b, p, {"y", "z"}), 0) == 1);
  const GradedModule h = homology(c);
  CHECK(h.rank(1) == 0);
  CHECK(h.rank(2) == 1);
}

TEST_CASE("two-element chain: d[z] = [x<z]") {
  const Poset p = chain_poset(2);
  const ChainBasis b = chain_basis(p, p.index("b"));
  const IntMatrix d = coboundary_matrix(p, b, 1);
  REQUIRE(d.rows() == 1);
  CHECK(d(0, 0) == 1);
  CHECK(poset_cohomology<Integer>(p, p.index("b"), kZ).is_zero());
}

TEST_CASE("chain a<b<c: C(c) is acyclic") {
  const Poset p = chain_poset(3);
  CHECK(poset_cohomology<Integer>(p, p.index("c"), kZ).is_zero());
  CHECK(poset_homology<Integer>(p, p.index("c"), kZ).is_zero());
}

TEST_CASE("coboundary is the transpose of the boundary") {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const Poset p = random_poset(rng, 6);
    for (int x = 0; x < p.size(); ++x) {
      const ChainBasis b = chain_basis(p, x);
      for (const auto& [n, cs] : b.by_length)
        if (b.count(n + 1) > 0) CHECK(coboundary_matrix(p, b, n) == boundary_matrix(p, b, n + 1).transpose());
    }
  }
}

TEST_CASE("partition lattice top") {
  const HatPoset pi3 = partition_lattice(3);
  const Poset s = pi3.strata();
  const GradedModule h = poset_cohomology<Integer>(s, s.index("123"), kZ);
  CHECK(h.rank(2) == 2);
  CHECK(h.total_rank() == 2);
}

TEST_CASE("poset cohomology against the order complex") {
  for (int seed = 0; seed < 60; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + seed));
    const Poset p = random_poset(rng, 7, false, 0.5);
    for (int x = 0; x < p.size(); ++x) {
      const GradedModule h = poset_cohomology<Integer>(p, x, kZ);
      CHECK(oracle::same(oracle::poset_cohomology(p, x), h));
    }
  }
}

TEST_CASE("contracting homotopies") {
  for (const Poset& p : {chain_poset(4), diamond()}) {
    const int a = *p.least();
    for (int x = 0; x < p.size(); ++x) {
      if (x == a) {
        CHECK_THROWS_AS(contracting_homotopy<Integer>(p, x, kZ), PreconditionError);
        continue;
      }
      const auto h = contracting_homotopy<Integer>(p, x, kZ);
      CHECK(same_map(boundary_of_homotopy(h), identity_map(h.source)));
    }
  }
  CHECK_THROWS_AS(contracting_homotopy<Integer>(v_poset(), 2, kZ), PreconditionError);
}

TEST_CASE("connecting maps b") {
  const Poset p = chain_poset(2);
  const int x = p.index("a"), z = p.index("b");
  const ChainBasis bx = chain_basis(p, x), bz = chain_basis(p, z);
  // b_x^z [x < z] = -[x]
  const IntMatrix m = b_homological_matrix(bx, bz, x, 1);
  CHECK(m(at(bx, p, {"a"}), at(bz, p, {"a", "b"})) == -1);

  // 0 covered by a minimal y: an isomorphism C_1(y) -> C_0(0)
  const auto b0 = connecting_b<Integer>(p, kHat, x, Variant::Homological, kZ);
  CHECK(b0.is_cover);
  CHECK(b0.validated);
  const IntMatrix iso = b0.map.at(-1);
  REQUIRE(iso.rows() == 1);
  CHECK(abs(iso(0, 0)) == 1);
  CHECK(b0.map.is_chain_map());

  CHECK_THROWS_AS(connecting_b<Integer>(p, z, x, Variant::Homological, kZ), PreconditionError);
  const Poset v = v_poset();
  CHECK_THROWS_AS(connecting_b<Integer>(v, v.index("x"), v.index("y"), Variant::Cohomological, kZ), PreconditionError);
}

TEST_CASE("b on covers is validated as a chain map") {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const Poset p = random_poset(rng, 6);
    for (const auto& [x, y] : p.cover_pairs())
      for (Variant v : {Variant::Homological, Variant::Cohomological}) {
        const auto b = connecting_b<Integer>(p, x, y, v, kZ);
        CHECK(b.validated);
        CHECK(b.map.is_chain_map());
      }
  }
}

TEST_CASE("commutator identity") {
  const Poset d = diamond();
  const auto rep = commutator_identity<Integer>(d, d.index("0"), d.index("t"), kZ);
  CHECK(rep.double_cover);
  CHECK(rep.projection_holds);
  CHECK(rep.generalized_holds);
  CHECK(rep.witness_holds);

  const Poset c = chain_poset(4);
  const auto rc = commutator_identity<Integer>(c, c.index("a"), c.index("d"), kZ);
  CHECK(rc.generalized_holds);
  CHECK(rc.projection_holds);
  CHECK(rc.failures.empty());

  const auto rh = commutator_identity<Rational>(d, kHat, d.index("t"), kQ);
  CHECK(rh.generalized_holds);
}

TEST_CASE("Whitney complexes") {
  const HatPoset pi3 = partition_lattice(3);
  const auto w = whitney_complex<Integer>(pi3, kZ);
  CHECK(w.complex.rank(0) == 1);
  CHECK(w.complex.rank(-1) == 3);
  CHECK(w.complex.rank(-2) == 2);

  const HatPoset b2 = as_hat(boolean_lattice(2, true), "{}");
  const auto wb = whitney_complex<Integer>(b2, kZ);
  CHECK(wb.complex.rank(0) == 1);
  CHECK(wb.complex.rank(-1) == 2);
  CHECK(wb.complex.rank(-2) == 1);

  for (const HatPoset& ph : {partition_lattice(4), as_hat(boolean_lattice(3, true), "{}")}) {
    const auto wp = whitney_complex<Integer>(ph, kZ);
    const auto mu = oracle::mobius(ph.full, ph.bottom);
    for (int v = 0; v < ph.full.size(); ++v) CHECK(wp.dim.at(v) == std::abs(mu[static_cast<std::size_t>(v)]));
    for (const auto& [r, total] : oracle::whitney_ranks(ph.full, ph.bottom)) CHECK(wp.complex.rank(-r) == total);
  }
}

TEST_CASE("acyclicity below every element") {
  for (const HatPoset& ph : {partition_lattice(3), partition_lattice(4), as_hat(boolean_lattice(3, true), "{}")})
    for (int x = 0; x < ph.full.size(); ++x) {
      if (x == ph.bottom) continue;
      CHECK(acyclicity_complex<Integer>(ph, x, kZ).exact);
    }
}

TEST_CASE("concentration of poset homology") {
  CHECK(is_concentrated<Integer>(partition_lattice(4), kZ));
  CHECK(is_concentrated<Integer>(as_hat(boolean_lattice(3, true), "{}"), kZ));
  // hexagon: two chains of length three from 0 to e
  const Poset hex = build_poset({"0", "a", "b", "c", "d", "e"},
                                {{"0", "a"}, {"0", "b"}, {"a", "c"}, {"b", "d"}, {"c", "e"}, {"d", "e"}});
  const HatPoset ph = as_hat(hex, "0");
  REQUIRE(rank_function(ph).has_value());
  CHECK_FALSE(is_concentrated<Integer>(ph, kZ));
  CHECK_THROWS_AS(whitney_complex<Integer>(ph, kZ), PreconditionError);
}

TEST_CASE("transport along isomorphisms") {
  const Poset v = v_poset();
  const std::vector<int> id{0, 1, 2}, swap{1, 0, 2};
  const int z = v.index("z");
  CHECK(same_map(transport<Integer>(v, v, id, z, kZ), identity_map(cochain_complex<Integer>(v, z, kZ))));
  const auto s = transport<Integer>(v, v, swap, z, kZ);
  CHECK(same_map(compose(s, s), identity_map(cochain_complex<Integer>(v, z, kZ))));
  CHECK_THROWS_AS(transport<Integer>(v, v, {2, 0, 1}, z, kZ), PreconditionError);

  // 3-cycle on the atoms of the partition lattice
  const Poset s3 = partition_lattice(3).strata();
  std::vector<int> cyc(static_cast<std::size_t>(s3.size()));
  for (int i = 0; i < s3.size(); ++i) cyc[static_cast<std::size_t>(i)] = i;
  const int a = s3.index("12|3"), b = s3.index("13|2"), c = s3.index("1|23");
  cyc[static_cast<std::size_t>(a)] = b;
  cyc[static_cast<std::size_t>(b)] = c;
  cyc[static_cast<std::size_t>(c)] = a;
  std::vector<int> cyc2(cyc.size());
  for (std::size_t i = 0; i < cyc.size(); ++i) cyc2[i] = cyc[static_cast<std::size_t>(cyc[i])];
  const int top = s3.index("123");
  const auto t1 = transport<Integer>(s3, s3, cyc, top, kZ);
  const auto t2 = transport<Integer>(s3, s3, cyc2, top, kZ);
  // C(cyc o cyc) = C(cyc) o C(cyc) (contravariant, both fix the top)
  CHECK(same_map(compose(t1, t1), t2));
  CHECK(same_map(compose(t1, t2), identity_map(cochain_complex<Integer>(s3, top, kZ))));
}

TEST_CASE("torsion: face poset of a six-vertex projective plane under a cone point") {
  const std::vector<std::vector<int>> tri{{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
                                          {2, 3, 5}, {2, 4, 5}, {2, 4, 6}, {3, 4, 6}, {3, 5, 6}};
  auto name = [](const std::vector<int>& f) {
    std::string s = "f";
    for (int v : f) s += std::to_string(v);
    return s;
  };
  std::set<std::vector<int>> faces;
  for (const auto& t : tri)
    for (std::size_t mask = 1; mask < 8; ++mask) {
      std::vector<int> f;
      for (std::size_t i = 0; i < 3; ++i)
        if (mask & (std::size_t{1} << i)) f.push_back(t[i]);
      faces.insert(f);
    }
  std::vector<std::string> ids{"top"};
  std::vector<std::pair<std::string, std::string>> rel;
  for (const auto& f : faces) {
    ids.push_back(name(f));
    rel.emplace_back(name(f), "top");
    for (const auto& g : faces)
      if (g.size() > f.size() && std::includes(g.begin(), g.end(), f.begin(), f.end())) rel.emplace_back(name(f), name(g));
  }
  const Poset p = poset_from_relation(ids, rel);
  const int top = p.index("top");
  const GradedModule h = poset_cohomology<Integer>(p, top, kZ);
  CHECK(h.torsion(4) == std::vector<Integer>{2});
  CHECK(h.total_rank() == 0);
  CHECK(oracle::same(oracle::poset_cohomology(p, top), h));
  // over F_2 the class splits into h^3 and h^4
  const GradedModule h2 = poset_cohomology<Modular>(p, top, Ring::prime_field(2));
  CHECK(h2.rank(3) == 1);
  CHECK(h2.rank(4) == 1);
  CHECK(poset_cohomology<Rational>(p, top, kQ).is_zero());
}
