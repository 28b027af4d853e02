#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stratify/geometry.hpp"

using namespace stratify;

namespace {

const Ring kQ = Ring::rationals();

std::vector<int> ranks_of(const HatPoset& ph) {
  auto rk = *rank_function(ph);
  std::sort(rk.begin(), rk.end());
  return rk;
}

}  // namespace

TEST_CASE("braid arrangement poset") {
  const Arrangement arr = intersection_poset(braid_spec());
  CHECK(arr.poset.full.size() == 5);
  CHECK(ranks_of(arr.poset) == std::vector<int>{0, 1, 1, 1, 2});
  CHECK(arr.ambient_dim == 3);
  int top = -1;
  for (int x = 0; x < arr.poset.full.size(); ++x)
    if (arr.flats[static_cast<std::size_t>(x)].size() == 3) top = x;
  REQUIRE(top >= 0);
  CHECK(arr.codim[static_cast<std::size_t>(top)] == 2);
  CHECK(intersection_poset(braid_spec(), true).ambient_dim == 2);
}

TEST_CASE("small arrangements") {
  const Arrangement one = intersection_poset({2, {{1, 0}}});
  CHECK(one.poset.full.size() == 2);
  const Arrangement b2 = intersection_poset(boolean_spec(2));
  CHECK(b2.poset.full.size() == 4);
  CHECK(ranks_of(b2.poset) == std::vector<int>{0, 1, 1, 2});
  CHECK(is_concentrated<Rational>(b2.poset, kQ));
}

TEST_CASE("arrangement input errors") {
  CHECK_THROWS_AS(intersection_poset({2, {{1, 0}, {2, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(intersection_poset({2, {{0, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(intersection_poset({2, {{1, 0, 1}}}), PreconditionError);
  CHECK_THROWS_AS(intersection_poset({2, {{1, 0, 0, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(intersection_poset({2, {}}), std::invalid_argument);
}

TEST_CASE("complement cohomology agrees with a brute-force count of flats") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-2, 2), count(1, 5);
  int tried = 0;
  while (tried < 15) {
    ArrangementSpec spec{3, {}};
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      std::vector<Rational> f{coef(rng), coef(rng), coef(rng)};
      spec.forms.push_back(f);
    }
    Arrangement arr;
    try {
      arr = intersection_poset(spec);
    } catch (const std::invalid_argument&) {
      continue;  // zero or repeated forms
    }
    ++tried;
    const GradedModule hc = abutment(arrangement_data<Rational>(arr, kQ));
    const auto betti = oracle::complement_betti(spec.forms);
    Index total = 0;
    for (const auto& [kk, b] : betti) {
      CHECK(hc.rank(2 * 3 - kk) == b);
      total += b;
    }
    CHECK(hc.total_rank() == total);
  }
}

TEST_CASE("partition lattices") {
  const HatPoset pi4 = partition_lattice(4);
  const auto rk = *rank_function(pi4);
  std::map<int, int> per;
  for (int r : rk) ++per[r];
  CHECK(per == std::map<int, int>{{0, 1}, {1, 6}, {2, 7}, {3, 1}});
  const auto mu = oracle::mobius(pi4.full, pi4.bottom);
  CHECK(mu[static_cast<std::size_t>(pi4.full.index("1234"))] == -6);
  CHECK_THROWS(partition_lattice(1));
}

TEST_CASE("hyperplane permutations") {
  const ArrangementSpec spec = braid_spec();
  const std::vector<std::vector<Rational>> swap{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
  const auto hp = hyperplane_permutation(spec, swap);
  REQUIRE(hp.size() == 3);
  int fixed = 0;
  for (int i = 0; i < 3; ++i) {
    CHECK(hp[static_cast<std::size_t>(hp[static_cast<std::size_t>(i)])] == i);
    if (hp[static_cast<std::size_t>(i)] == i) ++fixed;
  }
  CHECK(fixed == 1);
  const Arrangement arr = intersection_poset(spec);
  CHECK(is_isomorphism(arr.poset.full, arr.poset.full, flat_permutation(arr, hp)));
  const std::vector<std::vector<Rational>> scale{{1, 0, 0}, {0, 2, 0}, {0, 0, 1}};
  CHECK_THROWS(hyperplane_permutation(spec, scale));
}
