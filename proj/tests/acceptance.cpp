// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "stratify/geometry.hpp"
#include "stratify/holim.hpp"
#include "stratify/random_data.hpp"
#include "stratify/verify.hpp"

using namespace stratify;

namespace {

const Ring kZ = Ring::integers();
const Ring kQ = Ring::rationals();
constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = true;
  std::string note;
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& f) {
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s%s%s\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.note.empty() ? "" : " -- ", o.note.c_str());
  std::fflush(stdout);
}

std::size_t count_failed(const SuiteResult& s, const std::string& check, std::size_t* total = nullptr) {
  std::size_t bad = 0, all = 0;
  for (const auto& r : s.records)
    if (r.check == check) {
      ++all;
      if (!r.pass) ++bad;
    }
  if (total) *total = all;
  return bad;
}

std::string ranks_text(const GradedModule& m) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, p] : m.degrees) {
    os << (first ? "" : " ") << n << ":" << p.rank;
    first = false;
  }
  return os.str();
}

Outcome criterion1(const SuiteResult& s) {
  std::size_t posets = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    auto rng = case_rng(kSeed, "acceptance-contractible", i);
    const Poset p = random_poset(rng, 7, true);
    ++posets;
    const int a = *p.least();
    for (int x = 0; x < p.size(); ++x) {
      if (x == a) continue;
      const GradedModule h = poset_homology<Integer>(p, x, kZ);
      const auto o = oracle::poset_cohomology(p, x);
      bool ok = h.is_zero() && o.rank.empty() && o.torsion.empty();
      try {
        contracting_homotopy<Integer>(p, x, kZ);
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok) ++bad;
    }
  }
  std::size_t total = 0;
  const std::size_t suite_bad = count_failed(s, "contractibility", &total);
  return {bad == 0 && suite_bad == 0 && posets >= 200,
          std::to_string(posets) + " posets, " + std::to_string(total) + " suite checks"};
}

Outcome criterion2(const SuiteResult& lemmas) {
  std::size_t total = 0, bad = 0;
  for (const auto& r : lemmas.records)
    if (r.check == "commutator") {
      ++total;
      if (!r.pass || !r.details.value("projection", false) || !r.details.value("generalized", false)) ++bad;
    }
  return {bad == 0 && total > 0, std::to_string(total) + " pairs x<z"};
}

Outcome criterion3(const SuiteResult& lemmas) {
  std::size_t covers = 0, witnesses = 0;
  const std::size_t bad_b = count_failed(lemmas, "b-chain-map", &covers);
  std::size_t bad_w = 0;
  for (const auto& r : lemmas.records)
    if (r.check == "commutator" && r.details.value("double_cover", false)) {
      ++witnesses;
      if (!r.details.value("witness", false)) ++bad_w;
    }
  return {bad_b == 0 && bad_w == 0 && covers > 0 && witnesses > 0,
          std::to_string(covers) + " cover checks, " + std::to_string(witnesses) + " witnesses"};
}

Outcome criterion4(const SuiteResult& holim) {
  std::size_t total = 0;
  const std::size_t bad = count_failed(holim, "prop-holim", &total);
  // the expected side against the simplicial oracle: H(C^{.+1}(x)) = h^{.+1}(x)
  std::size_t oracle_bad = 0;
  for (int i = 0; i < 50; ++i) {
    auto rng = case_rng(kSeed, "holim", i);
    const Poset p = random_poset(rng, 6, false);
    for (int x = 0; x < p.size(); ++x) {
      const HolimReport rep = verify_prop_holim<Integer>(p, x, kZ);
      if (!oracle::same(oracle::poset_cohomology(p, x), rep.limit.shifted(-1))) ++oracle_bad;
    }
  }
  return {bad == 0 && oracle_bad == 0 && total > 0, std::to_string(total) + " elements"};
}

Outcome criterion5(const SuiteResult& holim) {
  std::size_t total = 0;
  const std::size_t bad = count_failed(holim, "connecting", &total);
  std::string signs;
  bool global = false;
  for (const auto& r : holim.records)
    if (r.check == "connecting-sign") {
      global = r.pass;
      signs = r.details["signs"].dump();
    }
  return {bad == 0 && global && total > 0, std::to_string(total) + " covers, sign " + signs};
}

Outcome criterion6() {
  std::ostringstream note;
  bool ok = true;
  auto check = [&](const std::string& name, const HatPoset& ph, Index top_rank, bool every_rank_one) {
    const Poset strata = ph.strata();
    const auto maxes = ph.full.maximal();
    for (int x = 0; x < ph.full.size(); ++x) {
      if (x == ph.bottom) continue;
      const GradedModule h = hat_homology<Integer>(ph, strata, x, kZ);
      if (every_rank_one && h.total_rank() != 1) ok = false;
      if (std::find(maxes.begin(), maxes.end(), x) != maxes.end() && h.total_rank() != top_rank) ok = false;
      // |mu(0, x)| agrees
      const auto mu = oracle::mobius(ph.full, ph.bottom);
      if (h.total_rank() != std::abs(mu[static_cast<std::size_t>(x)])) ok = false;
      if (!acyclicity_complex<Integer>(ph, x, kZ).exact) ok = false;
    }
    const auto top = hat_homology<Integer>(ph, strata, maxes.front(), kZ);
    note << name << " top " << top.total_rank() << "; ";
  };
  check("Pi3", partition_lattice(3), 2, false);
  check("Pi4", partition_lattice(4), 6, false);
  for (int n = 2; n <= 4; ++n) check("B" + std::to_string(n), as_hat(boolean_lattice(n, true), "{}"), 1, true);
  return {ok, note.str()};
}

Outcome criterion7() {
  const ArrangementSpec spec = braid_spec();
  const Arrangement arr = intersection_poset(spec, true);
  const auto data = arrangement_data<Rational>(arr, kQ);
  const FilteredComplex<Rational> fc = total_complex(data);
  const Pages<Rational> pages = spectral_pages(fc);
  const GradedModule ab = pages.abutment;
  bool ok = ab.rank(2) == 2 && ab.rank(3) == 3 && ab.rank(4) == 1 && ab.total_rank() == 6;
  const E1Report<Rational> e1 = e1_page(data);
  std::map<int, Index> ab_totals;
  for (const auto& [n, p] : ab.degrees) ab_totals[n] = p.rank;
  ok = ok && e1.totals() == ab_totals && pages.pages.front().totals() == ab_totals;
  const WeightDegeneration wd = weight_degeneration(pages);
  ok = ok && wd.forced && wd.consistent;
  // Orlik-Solomon: b_k(M) of the complement, H^k_c(M) = H_{2d-k}(M)
  const auto betti = oracle::complement_betti(spec.forms);
  const int d = arr.ambient_dim;
  std::map<int, Index> os;
  for (const auto& [k, b] : betti)
    if (b) os[2 * d - k] = b;
  ok = ok && os == ab_totals && betti.at(0) == 1 && betti.at(1) == 3 && betti.at(2) == 2;
  return {ok, "abutment " + ranks_text(ab) + ", " + wd.text};
}

Outcome criterion8() {
  const auto data = p1_minus_points<Rational>(3, kQ);
  const Pages<Rational> pages = spectral_pages(total_complex(data));
  Index d1_rank = 0;
  for (const auto& [b, m] : pages.pages.front().d) d1_rank += rank(m);
  const E1Report<Rational> e1 = e1_page(data);
  Index e1_rank = 0;
  for (const auto& [b, m] : e1.d1) e1_rank += rank(m);
  const GradedModule ab = pages.abutment;
  const bool ok = d1_rank == 1 && e1_rank == 1 && ab.ranks(0, 2) == std::vector<Index>{0, 2, 1} && ab.total_rank() == 3;
  return {ok, "d1 rank " + std::to_string(d1_rank) + ", abutment " + ranks_text(ab)};
}

template <class S>
bool dual_identity(const StratifiedData<S>& d) {
  const FilteredComplex<S> fc = total_complex(d);
  const auto o = oracle::dual_total(d);
  for (const auto& [n, r] : fc.total.ranks())
    if (!o.cells.count(n) || static_cast<Index>(o.cells.at(n).size()) != r) return false;
  for (const auto& [n, cs] : o.cells)
    if (fc.total.rank(n) != static_cast<Index>(cs.size())) return false;
  for (const auto& [n, m] : o.d)
    if (!(fc.total.d(n) == m)) return false;
  for (const auto& [n, m] : fc.total.differentials())
    if (!o.d.count(n) && !is_zero_matrix(m)) return false;
  return true;
}

Outcome criterion9() {
  const GradedModule t2 = abutment(ncd_boolean<Rational>(2, kQ));
  const GradedModule t3 = abutment(ncd_boolean<Rational>(3, kQ));
  const GradedModule p1 = abutment(p1_minus_points_dual<Rational>(3, kQ));
  bool ok = t2.ranks(0, 2) == std::vector<Index>{1, 2, 1} && t2.total_rank() == 4;
  ok = ok && t3.ranks(0, 3) == std::vector<Index>{1, 3, 3, 1} && t3.total_rank() == 8;
  ok = ok && p1.ranks(0, 1) == std::vector<Index>{1, 2} && p1.total_rank() == 3;
  ok = ok && dual_identity(ncd_boolean<Rational>(3, kQ)) && dual_identity(p1_minus_points_dual<Rational>(3, kQ));
  int good = 0;
  for (int i = 0; i < 50; ++i) {
    auto rng = case_rng(kSeed, "acceptance-dual", i);
    const auto d = random_dual_data<Rational>(rng, kQ);
    // linear dual of the primal data: cohomology negates degrees
    if (dual_identity(d) && abutment(d).same_groups(abutment(dualize(d)).negated())) ++good;
  }
  ok = ok && good == 50;
  return {ok, "(C*)^2 " + ranks_text(t2) + "; (C*)^3 " + ranks_text(t3) + "; P1-3 dual " + ranks_text(p1) + "; " +
                  std::to_string(good) + "/50 random exact"};
}

Outcome criterion10() {
  int good = 0, with_torsion = 0, n = 0;
  for (int i = 0; n < 50; ++i) {
    auto rng = case_rng(kSeed, "acceptance-two-strata", i);
    RandomDataOptions opt;
    opt.max_strata = 1;
    StratifiedData<Integer> d = random_data<Integer>(rng, kZ, opt);
    if (d.poset.full.size() != 2) continue;
    ++n;
    const int s = d.poset.bottom == 0 ? 1 : 0;
    const auto rho = restriction_system(d).at({d.poset.bottom, s});
    const GradedModule engine = abutment(d);
    const bool lib = two_strata_check(d).pass;
    const bool direct = oracle::same(oracle::fiber_cohomology(rho), engine);
    bool tors = false;
    for (const auto& [deg, p] : engine.degrees) tors = tors || !p.torsion.empty();
    if (tors) ++with_torsion;
    if (lib && direct) ++good;
  }
  // a fixed example with torsion in the answer
  const auto doc = load_document(STRATIFY_DATA_DIR "/two-strata-torsion.json");
  const auto fixed = build_data<Integer>(doc, kZ);
  const GradedModule fa = abutment(fixed);
  const auto rho = restriction_system(fixed).at({fixed.poset.bottom, fixed.poset.bottom == 0 ? 1 : 0});
  const bool fixed_ok = oracle::same(oracle::fiber_cohomology(rho), fa) && !fa.torsion(1).empty();
  return {good == n && with_torsion > 0 && fixed_ok,
          std::to_string(good) + "/" + std::to_string(n) + " random, " + std::to_string(with_torsion) + " with torsion; fixed " + fa.to_string()};
}

template <class S>
bool same_page_maps(const std::vector<std::map<std::pair<int, int>, Matrix<S>>>& a,
                    const std::vector<std::map<std::pair<int, int>, Matrix<S>>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    std::set<std::pair<int, int>> keys;
    for (const auto& [key, m] : a[k]) keys.insert(key);
    for (const auto& [key, m] : b[k]) keys.insert(key);
    for (const auto& key : keys) {
      auto ia = a[k].find(key), ib = b[k].find(key);
      const bool za = ia == a[k].end() || is_zero_matrix(ia->second);
      const bool zb = ib == b[k].end() || is_zero_matrix(ib->second);
      if (za && zb) continue;
      if (za != zb || ia->second != ib->second) return false;
    }
  }
  return true;
}

/// Page maps commute with every d_r (checked here, independently of the engine's own check).
template <class S>
bool commutes(const InducedMorphism<S>& im, const Pages<S>& src, const Pages<S>& tgt) {
  for (std::size_t k = 0; k < im.pages.size(); ++k) {
    const Page<S>& ps = src.pages[k];  // E'_r
    const Page<S>& pt = tgt.pages[k];  // E_r
    const int r = ps.r;
    auto dim = [](const Page<S>& pg, std::pair<int, int> key) {
      auto it = pg.basis.find(key);
      return it == pg.basis.end() ? Index{0} : it->second.reps.cols();
    };
    auto dmat = [&](const Page<S>& pg, int p, int n) {
      auto it = pg.d.find({p, n - p});
      return it == pg.d.end() ? zero_matrix<S>(dim(pg, {p + r, n + 1}), dim(pg, {p, n})) : it->second;
    };
    auto fmat = [&](std::pair<int, int> key) {
      auto it = im.pages[k].find(key);
      return it == im.pages[k].end() ? zero_matrix<S>(dim(pt, key), dim(ps, key)) : it->second;
    };
    std::set<std::pair<int, int>> keys;
    for (const auto& [key, b] : ps.basis) keys.insert(key);
    for (const auto& [key, b] : pt.basis) keys.insert(key);
    for (const auto& [p, n] : keys) {
      const Matrix<S> lhs = multiply(dmat(pt, p, n), fmat({p, n}));
      const Matrix<S> rhs = multiply(fmat({p + r, n + 1}), dmat(ps, p, n));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

template <class S>
bool page_maps_identity(const InducedMorphism<S>& im) {
  for (const auto& pg : im.pages)
    for (const auto& [key, m] : pg)
      if (m != identity_matrix<S>(m.rows())) return false;
  return true;
}

Outcome criterion11() {
  const ArrangementSpec spec = braid_spec();
  const Arrangement arr = intersection_poset(spec, true);
  const auto data = arrangement_data<Rational>(arr, kQ);
  const Pages<Rational> pages = spectral_pages(total_complex(data));
  std::vector<int> perm{0, 1, 2};
  std::vector<StratifiedMorphism<Rational>> group;
  std::vector<InducedMorphism<Rational>> induced;
  bool ok = true;
  do {
    std::vector<std::vector<Rational>> g(3, std::vector<Rational>(3, Rational(0)));
    for (int i = 0; i < 3; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = 1;
    const auto hp = hyperplane_permutation(spec, g);
    group.push_back(arrangement_morphism(arr, data, hp));
    induced.push_back(apply_morphism(group.back(), data, data));
    ok = ok && commutes(induced.back(), pages, pages);
  } while (std::next_permutation(perm.begin(), perm.end()));
  // identity law
  const auto id = apply_morphism(identity_morphism(data), data, data);
  ok = ok && same_map(id.map, identity_map(id.map.source)) && page_maps_identity(id);
  // composition law: the induced map of beta o alpha is Pi(alpha) o Pi(beta)
  int compositions = 0;
  for (std::size_t a = 0; a < group.size(); ++a)
    for (std::size_t b = 0; b < group.size(); ++b) {
      const auto ab = apply_morphism(compose_morphisms(group[b], group[a]), data, data);
      ok = ok && same_map(ab.map, compose(induced[a].map, induced[b].map));
      std::vector<std::map<std::pair<int, int>, Matrix<Rational>>> composed;
      for (std::size_t k = 0; k < ab.pages.size(); ++k) {
        std::map<std::pair<int, int>, Matrix<Rational>> m;
        for (const auto& [key, fb] : induced[b].pages[k]) {
          auto fa = induced[a].pages[k].find(key);
          if (fa != induced[a].pages[k].end()) m[key] = multiply(fa->second, fb);
        }
        composed.push_back(m);
      }
      ok = ok && same_page_maps(ab.pages, composed);
      ++compositions;
    }
  // the same laws where d_1 is non-zero: S_3 permuting the points of P^1 minus 3 points
  const auto p1 = p1_minus_points<Rational>(3, kQ);
  const Pages<Rational> p1pages = spectral_pages(total_complex(p1));
  std::vector<int> pts{1, 2, 3};
  int p1_maps = 0;
  do {
    StratifiedMorphism<Rational> m = identity_morphism(p1);
    for (int i = 0; i < 3; ++i) m.alpha[static_cast<std::size_t>(i + 1)] = pts[static_cast<std::size_t>(i)];
    const auto im = apply_morphism(m, p1, p1);
    ok = ok && commutes(im, p1pages, p1pages);
    ++p1_maps;
  } while (std::next_permutation(pts.begin(), pts.end()));
  return {ok, std::to_string(group.size()) + " braid automorphisms, " + std::to_string(compositions) + " compositions, " +
                  std::to_string(p1_maps) + " P1-3 automorphisms"};
}

Outcome criterion12(const SuiteResult& engine) {
  std::size_t total = 0;
  std::size_t bad = 0;
  for (const char* c : {"d-squared", "filtration", "graded-pieces", "page-coherence", "e-infinity"}) {
    std::size_t t = 0;
    bad += count_failed(engine, c, &t);
    total += t;
  }
  return {bad == 0 && total > 0 && engine.pass(), std::to_string(total) + " checks on " + std::to_string(2 * 200) + " datasets"};
}

}  // namespace

int main() {
  const SuiteResult lemmas = run_suite("lemmas", kSeed, 200, 0);
  const SuiteResult holim = run_suite("holim", kSeed, 200, 0);
  const SuiteResult engine = run_suite("engine", kSeed, 200, 0);
  report(1, "contractibility of C(x) over a least element", [&] { return criterion1(lemmas); });
  report(2, "commutator identity and its generalization", [&] { return criterion2(lemmas); });
  report(3, "b on covers is a chain map; null-homotopy witness -b", [&] { return criterion3(lemmas); });
  report(4, "holim of the resolution equals C^{.+1}(x) over Z", [&] { return criterion4(holim); });
  report(5, "connecting morphism a = eps b with one global sign", [&] { return criterion5(holim); });
  report(6, "partition and boolean lattices: h(top), acyclicity", criterion6);
  report(7, "braid arrangement: H_c ranks, E_1, weights, Orlik-Solomon", criterion7);
  report(8, "P^1 minus 3 points: d_1 rank 1, abutment (0,2,1)", criterion8);
  report(9, "dual pipeline: (C*)^n, P^1 minus 3 points, exact dual identity", criterion9);
  report(10, "one stratum: engine equals the cone over Z with torsion", criterion10);
  report(11, "functoriality: S_3 page maps, identity and composition", criterion11);
  report(12, "engine structural invariants over Q", [&] { return criterion12(engine); });
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
