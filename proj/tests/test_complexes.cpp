#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stratify/complex.hpp"
#include "stratify/engine.hpp"
#include "stratify/linalg.hpp"
#include "stratify/smith.hpp"

using namespace stratify;

namespace {

const Ring kZ = Ring::integers();
const Ring kQ = Ring::rationals();

IntMatrix imat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (long v : r) m(i, j++) = Integer(v);
    ++i;
  }
  return m;
}

oracle::IMat to_imat(const IntMatrix& m) {
  oracle::IMat out = oracle::zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

IntMatrix random_imat(std::mt19937_64& rng, Index r, Index c, int lo, int hi) {
  std::uniform_int_distribution<int> v(lo, hi);
  IntMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = Integer(v(rng));
  return m;
}

/// Random complex: a direct sum of K in degree n and K --c--> K pieces,
/// conjugated by random unimodular changes of basis.
FreeComplex<Integer> random_complex(std::mt19937_64& rng, int lo, int hi, bool torsion) {
  std::uniform_int_distribution<int> deg(lo, hi), count(1, 4), kind(0, 2), coef(2, 3);
  std::map<int, Index> ranks;
  struct Piece {
    int n;
    bool pair;
    long c;
  };
  std::vector<Piece> pieces;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    const int n = deg(rng);
    const bool pair = kind(rng) != 0 && n < hi;
    const long c = pair && torsion && kind(rng) == 0 ? coef(rng) : 1;
    pieces.push_back({n, pair, c});
  }
  std::map<int, Index> pos;
  for (const auto& p : pieces) {
    ranks[p.n] += 1;
    if (p.pair) ranks[p.n + 1] += 1;
  }
  std::map<int, IntMatrix> diff;
  for (const auto& [n, r] : ranks)
    if (ranks.count(n + 1)) diff[n] = IntMatrix::Zero(ranks[n + 1], r);
  for (const auto& p : pieces) {
    const Index src = pos[p.n]++;
    if (p.pair) {
      const Index dst = pos[p.n + 1]++;
      diff[p.n](dst, src) = Integer(p.c);
    }
  }
  // conjugate: d'^n = U^{n+1} d^n (U^n)^{-1} with elementary unimodular U
  std::map<int, IntMatrix> u, uinv;
  std::uniform_int_distribution<int> small(-2, 2);
  for (const auto& [n, r] : ranks) {
    IntMatrix a = IntMatrix::Identity(r, r), ai = IntMatrix::Identity(r, r);
    for (int step = 0; step < 3 && r > 1; ++step) {
      std::uniform_int_distribution<Index> idx(0, r - 1);
      const Index i = idx(rng), j = idx(rng);
      if (i == j) continue;
      const Integer t(small(rng));
      // row op i += t * j on a, inverse op on ai
      a.row(i) += t * a.row(j);
      ai.col(j) -= t * ai.col(i);
    }
    u[n] = a;
    uinv[n] = ai;
  }
  for (auto& [n, m] : diff) m = (u[n + 1] * m * uinv[n]).eval();
  return FreeComplex<Integer>(kZ, ranks, diff);
}

oracle::Groups oracle_groups(const FreeComplex<Integer>& c) {
  std::map<int, std::size_t> dims;
  std::map<int, oracle::IMat> d;
  for (const auto& [n, r] : c.ranks()) dims[n] = static_cast<std::size_t>(r);
  for (const auto& [n, m] : c.differentials()) d[n] = to_imat(m);
  return oracle::cohomology(dims, d);
}

}  // namespace

TEST_CASE("Smith normal form examples") {
  CHECK(invariant_factors(imat({{2, 4}, {6, 8}})) == std::vector<Integer>{2, 4});
  CHECK(invariant_factors(IntMatrix::Identity(3, 3)) == std::vector<Integer>{1, 1, 1});
  CHECK(invariant_factors(IntMatrix::Zero(2, 3)).empty());
  CHECK(oracle::invariant_factors(to_imat(imat({{2, 4}, {6, 8}}))) == std::vector<Integer>{2, 4});
}

TEST_CASE("Smith normal form against determinantal divisors") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    std::uniform_int_distribution<int> dim(1, 4);
    const IntMatrix m = random_imat(rng, dim(rng), dim(rng), -6, 6);
    const SmithForm s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
    CHECK(s.U * s.Uinv == IntMatrix::Identity(m.rows(), m.rows()));
    CHECK(s.V * s.Vinv == IntMatrix::Identity(m.cols(), m.cols()));
    const auto brute = oracle::invariant_factors(to_imat(m));
    CHECK(invariant_factors(m) == brute);
    CHECK(oracle::elimination_factors(to_imat(m)) == brute);
    for (std::size_t i = 1; i < brute.size(); ++i) CHECK(brute[i] % brute[i - 1] == 0);
    CHECK(integer_rank(m) == static_cast<Index>(brute.size()));
  }
}

TEST_CASE("integer kernels and solutions") {
  const IntMatrix m = imat({{2, 4, 6}, {1, 2, 3}});
  const IntMatrix k = integer_kernel(m);
  CHECK(k.cols() == 2);
  CHECK(is_zero_matrix(m * k));
  const auto x = integer_solve(imat({{2, 0}, {0, 3}}), imat({{4}, {9}}));
  REQUIRE(x.has_value());
  CHECK((*x)(0, 0) == 2);
  CHECK((*x)(1, 0) == 3);
  CHECK_FALSE(integer_solve(imat({{2}}), imat({{3}})).has_value());
}

TEST_CASE("complexes reject bad data") {
  // d o d != 0
  std::map<int, IntMatrix> bad{{0, imat({{1}})}, {1, imat({{1}})}};
  CHECK_THROWS_AS(FreeComplex<Integer>(kZ, {{0, 1}, {1, 1}, {2, 1}}, bad), InvariantError);
  // weights must be preserved by d
  std::map<int, IntMatrix> one{{0, imat({{1}})}};
  CHECK_THROWS(FreeComplex<Integer>(kZ, {{0, 1}, {1, 1}}, one, FreeComplex<Integer>::WeightMap{{0, {0}}, {1, {2}}}));
  CHECK_NOTHROW(FreeComplex<Integer>(kZ, {{0, 1}, {1, 1}}, one, FreeComplex<Integer>::WeightMap{{0, {2}}, {1, {2}}}));
  CHECK_THROWS(Ring::prime_field(4));
  CHECK_THROWS(Ring::parse("R"));
  CHECK(Ring::parse("F_5") == Ring::prime_field(5));
  CHECK(Ring::parse("GF7") == Ring::prime_field(7));
  CHECK(Ring::parse("QQ") == kQ);
}

TEST_CASE("homology examples") {
  // 0 -> Z --2--> Z -> 0
  const FreeComplex<Integer> c(kZ, {{0, 1}, {1, 1}}, {{0, imat({{2}})}});
  const GradedModule h = homology(c);
  CHECK(h.rank(0) == 0);
  CHECK(h.rank(1) == 0);
  CHECK(h.torsion(1) == std::vector<Integer>{2});
  CHECK(h.torsion(0).empty());
  // zero differential: the complex itself
  const FreeComplex<Integer> z(kZ, {{-1, 2}, {3, 1}}, {});
  CHECK(homology(z).rank(-1) == 2);
  CHECK(homology(z).rank(3) == 1);
  // over F_2 the map x2 vanishes
  const auto f2 = convert_complex<Modular>(c, Ring::prime_field(2));
  CHECK(homology(f2).rank(0) == 1);
  CHECK(homology(f2).rank(1) == 1);
}

TEST_CASE("homology over Z against the elimination oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 80; ++t) {
    const auto c = random_complex(rng, -2, 2, true);
    CHECK(oracle::same(oracle_groups(c), homology(c)));
  }
}

TEST_CASE("shift, twist, direct sums") {
  const auto k0 = unit_complex<Integer>(kZ, 0);
  const auto s = shift(k0, 1);
  CHECK(s.rank(-1) == 1);
  CHECK(s.rank(0) == 0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto c = random_complex(rng, -1, 2, true);
    CHECK(same_complex(shift(shift(c, 1), -1), c));
    CHECK(same_complex(shift(shift(c, 2), -2), c));
    CHECK(homology(shift(c, 3)).same_groups(homology(c).shifted(3)));
  }
  CHECK(direct_sum<Integer>({}, kZ).empty());
  const auto w = twist(unit_complex<Integer>(kZ, 0, 1), 2);
  CHECK(w.weights(0) == std::vector<int>{3});
}

TEST_CASE("tensor products") {
  const auto k0 = unit_complex<Rational>(kQ, 0);
  std::mt19937_64 rng(9);
  const auto c = convert_complex<Rational>(random_complex(rng, 0, 2, false), kQ);
  CHECK(same_complex(tensor(k0, c), c));
  const auto t = tensor(unit_complex<Rational>(kQ, 2), unit_complex<Rational>(kQ, 1));
  CHECK(t.rank(3) == 1);
  CHECK(t.total_rank() == 1);
}

TEST_CASE("Kunneth over Q on random complexes") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto c = convert_complex<Rational>(random_complex(rng, -1, 2, true), kQ);
    const auto d = convert_complex<Rational>(random_complex(rng, 0, 2, true), kQ);
    const GradedModule hc = homology(c), hd = homology(d), ht = homology(tensor(c, d));
    std::map<int, Index> conv;
    for (const auto& [i, p] : hc.degrees)
      for (const auto& [j, q] : hd.degrees) conv[i + j] += p.rank * q.rank;
    for (int n = -3; n <= 6; ++n) CHECK(ht.rank(n) == (conv.count(n) ? conv[n] : 0));
  }
}

TEST_CASE("cones") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const auto c = random_complex(rng, -1, 2, true);
    CHECK(homology(cone(identity_map(c))).is_zero());
    // cone(0 : C -> D) = D (+) C[1]
    const auto d = random_complex(rng, 0, 1, true);
    CHECK(homology(cone(zero_map(c, d))).same_groups([&] {
      GradedModule m = homology(d);
      for (const auto& [n, p] : homology(shift(c, 1)).degrees) {
        m.degrees[n].rank += p.rank;
        auto& tt = m.degrees[n].torsion;
        tt.insert(tt.end(), p.torsion.begin(), p.torsion.end());
        tt = normalize_torsion(tt);
      }
      return m;
    }()));
  }
  // cone(x2 : Z -> Z) has Z/2 in degree 0
  const auto z = unit_complex<Integer>(kZ, 0);
  GradedMap<Integer> two{z, z, 0, {{0, imat({{2}})}}};
  const GradedModule h = homology(cone(two));
  CHECK(h.torsion(0) == std::vector<Integer>{2});
  CHECK(h.total_rank() == 0);
  CHECK(h.degrees.size() == 1);
  // not a chain map
  const FreeComplex<Integer> pair(kZ, {{0, 1}, {1, 1}}, {{0, imat({{1}})}});
  GradedMap<Integer> bad{pair, pair, 0, {{0, imat({{1}})}}};
  CHECK_THROWS_AS(cone(bad), InvariantError);
}

TEST_CASE("linear duals") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto c = convert_complex<Rational>(random_complex(rng, -1, 2, true), kQ);
    CHECK(same_complex(dual(dual(c)), c));
    CHECK(homology(dual(c)).same_groups(homology(c).negated()));
  }
}

TEST_CASE("null homotopies") {
  // identity on an acyclic complex over Q has a witness
  const FreeComplex<Rational> acyc(kQ, {{0, 1}, {1, 1}}, {{0, Matrix<Rational>::Identity(1, 1)}});
  const auto h = null_homotopy(identity_map(acyc));
  REQUIRE(h.has_value());
  CHECK(same_map(boundary_of_homotopy(*h), identity_map(acyc)));
  // identity on K in degree 0 has none
  CHECK_FALSE(null_homotopy(identity_map(unit_complex<Rational>(kQ, 0))).has_value());
  // x2 on Z -> Z/2-type complex: over Z the witness must be integral
  const FreeComplex<Integer> zc(kZ, {{0, 1}, {1, 1}}, {{0, imat({{2}})}});
  CHECK_FALSE(null_homotopy(identity_map(zc)).has_value());
  const FreeComplex<Integer> zu(kZ, {{0, 1}, {1, 1}}, {{0, imat({{1}})}});
  CHECK(null_homotopy(identity_map(zu)).has_value());
}

TEST_CASE("modular arithmetic") {
  const Modular a(3, 7), b(5, 7);
  CHECK((a * b).value() == 1);
  CHECK((a / b * b) == a);
  CHECK((a - b).value() == 5);
  CHECK(a.inverse().value() == 5);
  CHECK_THROWS(Modular(0, 7).inverse());
  const Matrix<Modular> m = convert<Modular>(imat({{1, 2}, {3, 4}}), Ring::prime_field(5));
  CHECK(rank(m) == 2);
  const Matrix<Modular> m2 = convert<Modular>(imat({{1, 2}, {2, 4}}), Ring::prime_field(5));
  CHECK(rank(m2) == 1);
}

TEST_CASE("cohomology bases and induced maps") {
  const FreeComplex<Rational> c(kQ, {{0, 2}, {1, 1}}, {{0, Matrix<Rational>{{1, 1}}}});
  const auto b = cohomology_basis(c, 0);
  CHECK(b.rank() == 1);
  const Matrix<Rational> m = induced_map(b, b, Matrix<Rational>(Matrix<Rational>::Identity(2, 2)));
  CHECK(m == Matrix<Rational>::Identity(1, 1));
}
