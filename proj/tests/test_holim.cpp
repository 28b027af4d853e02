#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stratify/geometry.hpp"
#include "stratify/holim.hpp"
#include "stratify/smith.hpp"

using namespace stratify;

namespace {

const Ring kZ = Ring::integers();
const Ring kQ = Ring::rationals();

Poset v_poset() { return build_poset({"x", "y", "z"}, {{"x", "z"}, {"y", "z"}}); }
Poset diamond() { return build_poset({"0", "t", "u", "x"}, {{"0", "x"}, {"x", "t"}, {"0", "u"}, {"u", "t"}}); }

}  // namespace

TEST_CASE("limits of simple diagrams") {
  const Poset v = v_poset();
  const auto k = unit_complex<Integer>(kZ);
  const auto lc = lim_poset(constant_diagram(v, k));
  CHECK(homology(lc.complex).same_groups(homology(k)));

  CHECK(homology(lim_poset(skyscraper<Integer>(v, v.index("z"), kZ)).complex).is_zero());
  CHECK(homology(lim_poset(skyscraper<Integer>(v, v.index("x"), kZ)).complex).same_groups(homology(k)));

  // two components: lim of the constant diagram is K^2
  const Poset two = antichain_poset(2);
  CHECK(homology(lim_poset(constant_diagram(two, k)).complex).rank(0) == 2);
}

TEST_CASE("holim of a point is the value") {
  const Poset pt = chain_poset(1);
  const FreeComplex<Integer> a(kZ, {{0, 1}, {1, 1}, {2, 1}}, {{0, IntMatrix::Constant(1, 1, Integer(2))}});
  CHECK(homology(holim(constant_diagram(pt, a))).same_groups(homology(a)));
}

TEST_CASE("holim of constant K on a contractible poset") {
  const auto k = unit_complex<Integer>(kZ);
  for (const Poset& p : {v_poset(), diamond(), chain_poset(3)}) {
    const GradedModule h = homology(holim(constant_diagram(p, k)));
    CHECK(h.rank(0) == 1);
    CHECK(h.total_rank() == 1);
  }
}

TEST_CASE("holim of a skyscraper is the shifted cochain complex") {
  for (int seed = 0; seed < 25; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed + 300));
    const Poset p = random_poset(rng, 6);
    for (int x = 0; x < p.size(); ++x) {
      const GradedModule h = homology(holim(skyscraper<Integer>(p, x, kZ)));
      CHECK(h.same_groups(homology(shift(cochain_complex<Integer>(p, x, kZ), 1))));
      CHECK(oracle::same(oracle::poset_cohomology(p, x), h.shifted(-1)));
    }
  }
}

TEST_CASE("resolution of K_x and its limit") {
  const Poset s = partition_lattice(3).strata();
  const int top = s.index("123");
  const auto r = bousfield_kan_resolution<Integer>(s, top, kZ);
  CHECK(r.exact);
  const HolimReport rep = verify_prop_holim<Integer>(s, top, kZ);
  CHECK(rep.pass);
  CHECK(rep.resolution_exact);
  CHECK(rep.evaluation_chain_map);
  CHECK(rep.limit.rank(1) == 2);
  CHECK(rep.limit.total_rank() == 2);

  for (int seed = 0; seed < 15; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed + 700));
    const Poset p = random_poset(rng, 6);
    for (int x = 0; x < p.size(); ++x) {
      const HolimReport h = verify_prop_holim<Integer>(p, x, kZ);
      CHECK(h.pass);
      CHECK(oracle::same(oracle::poset_cohomology(p, x), h.limit.shifted(-1)));
    }
  }
}

TEST_CASE("connecting morphisms a") {
  const Poset c = chain_poset(3);
  for (const auto& [x, y] : c.cover_pairs()) {
    const ConnectingReport rep = connecting_a<Integer>(c, x, y, kZ);
    CHECK(rep.pass);
    CHECK(rep.square_zero);
    CHECK(rep.lift_ok);
    CHECK(rep.sign == -1);
  }
  const Poset d = diamond();
  for (const auto& [x, y] : d.cover_pairs()) {
    const ConnectingReport rep = connecting_a<Rational>(d, x, y, kQ);
    CHECK(rep.pass);
    CHECK(rep.sign == -1);
  }
  const Poset v = v_poset();
  CHECK_THROWS_AS(connecting_a<Integer>(v, v.index("x"), v.index("y"), kZ), PreconditionError);
  CHECK_THROWS_AS(connecting_a<Integer>(c, c.index("a"), c.index("c"), kZ), PreconditionError);
}

TEST_CASE("diagram constructors") {
  const Poset c = chain_poset(3);
  CHECK_NOTHROW(pair_diagram<Integer>(c, 0, 1, kZ));
  CHECK_THROWS_AS(pair_diagram<Integer>(c, 0, 2, kZ), PreconditionError);
  const auto d = down_set_diagram(c, c.index("b"), unit_complex<Integer>(kZ));
  CHECK(d.values[0].rank(0) == 1);
  CHECK(d.values[1].rank(0) == 1);
  CHECK(d.values[2].empty());
  CHECK(d.transitions.size() == 1);
}

TEST_CASE("non-functorial transitions are rejected") {
  const Poset d = diamond();
  auto diag = constant_diagram(d, unit_complex<Integer>(kZ));
  const Edge e{d.index("u"), d.index("t")};
  diag.transitions[e] = scale(diag.transitions.at(e), Integer(2));
  CHECK_THROWS_AS(compose_transitions(diag), FunctorialityError);
  CHECK_THROWS_AS(holim(diag), FunctorialityError);
}

TEST_CASE("lim of a down-set diagram is its value") {
  const FreeComplex<Integer> m(kZ, {{0, 1}, {1, 1}}, {{0, IntMatrix::Constant(1, 1, Integer(2))}});
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed + 40));
    const Poset p = random_poset(rng, 6);
    for (int x = 0; x < p.size(); ++x)
      CHECK(homology(lim_poset(down_set_diagram(p, x, m)).complex).same_groups(homology(m)));
  }
}

TEST_CASE("holim is invariant under adding acyclic summands") {
  const auto k = unit_complex<Integer>(kZ);
  const auto padded = direct_sum(k, cone(identity_map(FreeComplex<Integer>(kZ, {{1, 2}}, {}))));
  REQUIRE(homology(padded).same_groups(homology(k)));
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed + 80));
    const Poset p = random_poset(rng, 5);
    for (int x = 0; x < p.size(); ++x)
      CHECK(homology(holim(down_set_diagram(p, x, padded))).same_groups(homology(holim(down_set_diagram(p, x, k)))));
    CHECK(homology(holim(constant_diagram(p, padded))).same_groups(homology(holim(constant_diagram(p, k)))));
  }
}

TEST_CASE("holim along a relabelling isomorphism") {
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed + 120));
    const Poset p = random_poset(rng, 6);
    // rename so that identifier order is reversed
    auto rename = [&](const std::string& id) { return "r" + std::to_string(99 - p.index(id)); };
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> covers;
    for (const auto& id : p.elements()) ids.push_back(rename(id));
    for (const auto& [a, b] : p.cover_pairs()) covers.emplace_back(rename(p.id(a)), rename(p.id(b)));
    const Poset q = build_poset(ids, covers);
    std::vector<int> alpha;
    for (int x = 0; x < p.size(); ++x) alpha.push_back(q.index(rename(p.id(x))));
    REQUIRE(is_isomorphism(p, q, alpha));
    for (int x = 0; x < p.size(); ++x) {
      const int ax = alpha[static_cast<std::size_t>(x)];
      CHECK(homology(holim(skyscraper<Integer>(q, ax, kZ))).same_groups(homology(holim(skyscraper<Integer>(p, x, kZ)))));
      // transport is an isomorphism of the cochain complexes
      const auto t = transport<Integer>(p, q, alpha, x, kZ);
      for (const auto& [n, mtx] : t.components) {
        REQUIRE(mtx.rows() == mtx.cols());
        CHECK(invariant_factors(mtx) == std::vector<Integer>(static_cast<std::size_t>(mtx.rows()), Integer(1)));
      }
    }
  }
}
