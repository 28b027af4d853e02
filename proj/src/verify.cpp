#include "stratify/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <set>
#include <thread>

#include "stratify/holim.hpp"
#include "stratify/random_data.hpp"

namespace stratify {

Json CheckRecord::to_json() const {
  Json j;
  j["check"] = check;
  j["poset"] = poset;
  j["x"] = x;
  j["pass"] = pass;
  j["details"] = details;
  return j;
}

bool SuiteResult::pass() const { return failures() == 0; }

std::size_t SuiteResult::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; }));
}

Json SuiteResult::summary(std::uint64_t seed, int count) const {
  Json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["count"] = count;
  j["checks"] = records.size();
  j["failures"] = failures();
  j["pass"] = pass();
  if (counterexample) j["counterexample"] = *counterexample;
  return j;
}

std::mt19937_64 case_rng(std::uint64_t seed, const std::string& suite, int index) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                   static_cast<std::uint32_t>(index)};
  for (char c : suite) words.push_back(static_cast<std::uint32_t>(static_cast<unsigned char>(c)));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

namespace {

const Ring kZ = Ring::integers();
const Ring kQ = Ring::rationals();

std::string element_name(const Poset& p, int x) { return x == kHat ? std::string("0^") : p.id(x); }

CheckRecord failed(const std::string& check, const Poset& p, const std::string& x, const std::string& why) {
  CheckRecord r;
  r.check = check;
  r.poset = poset_json(p);
  r.x = x;
  r.pass = false;
  r.details["error"] = why;
  return r;
}

/// Runs f, turning library exceptions into a failing record.
template <class F>
CheckRecord guarded(const std::string& check, const Poset& p, const std::string& x, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return failed(check, p, x, e.what());
  }
}

std::vector<std::pair<int, int>> all_pairs(const Poset& p) {
  std::vector<std::pair<int, int>> out;
  for (int z = 0; z < p.size(); ++z) {
    out.emplace_back(kHat, z);
    for (int x : p.below(z)) out.emplace_back(x, z);
  }
  return out;
}

}  // namespace

std::vector<CheckRecord> lemma_checks(const Poset& p) {
  std::vector<CheckRecord> out;
  const Json pj = poset_json(p);
  if (const auto a = p.least()) {
    for (int x : p.above(*a)) {
      out.push_back(guarded("contractibility", p, p.id(x), [&] {
        CheckRecord r;
        r.check = "contractibility";
        r.poset = pj;
        r.x = p.id(x);
        const GradedModule h = homology(chain_complex<Integer>(p, x, kZ));
        contracting_homotopy<Integer>(p, x, kZ);  // throws unless del c + c del = id
        r.pass = h.is_zero();
        r.details["homology"] = module_json(h);
        return r;
      }));
    }
  }
  for (const auto& [x, z] : all_pairs(p)) {
    const std::string name = element_name(p, x) + "<" + p.id(z);
    out.push_back(guarded("commutator", p, name, [&] {
      const CommutatorReport rep = commutator_identity<Integer>(p, x, z, kZ);
      CheckRecord r;
      r.check = "commutator";
      r.poset = pj;
      r.x = name;
      r.pass = rep.ok();
      r.details["projection"] = rep.projection_holds;
      r.details["generalized"] = rep.generalized_holds;
      r.details["double_cover"] = rep.double_cover;
      r.details["witness"] = rep.witness_holds;
      if (!rep.failures.empty()) r.details["failures"] = rep.failures;
      return r;
    }));
    const bool cover = (x == kHat) ? p.lower_covers(z).empty() : p.covers(x, z);
    if (!cover) continue;
    out.push_back(guarded("b-chain-map", p, name, [&] {
      const auto hom = connecting_b<Integer>(p, x, z, Variant::Homological, kZ);
      const auto coh = connecting_b<Integer>(p, x, z, Variant::Cohomological, kZ);
      CheckRecord r;
      r.check = "b-chain-map";
      r.poset = pj;
      r.x = name;
      r.pass = hom.validated && coh.validated;
      return r;
    }));
  }
  return out;
}

std::vector<CheckRecord> holim_checks(const Poset& p) {
  std::vector<CheckRecord> out;
  const Json pj = poset_json(p);
  for (int x = 0; x < p.size(); ++x) {
    out.push_back(guarded("prop-holim", p, p.id(x), [&] {
      const HolimReport rep = verify_prop_holim<Integer>(p, x, kZ);
      CheckRecord r;
      r.check = "prop-holim";
      r.poset = pj;
      r.x = p.id(x);
      r.pass = rep.pass;
      r.details["lim"] = module_json(rep.limit);
      r.details["expected"] = module_json(rep.expected);
      r.details["resolution_exact"] = rep.resolution_exact;
      return r;
    }));
  }
  for (const auto& [x, y] : p.cover_pairs()) {
    const std::string name = p.id(x) + "<" + p.id(y);
    out.push_back(guarded("connecting", p, name, [&] {
      const ConnectingReport rep = connecting_a<Integer>(p, x, y, kZ);
      CheckRecord r;
      r.check = "connecting";
      r.poset = pj;
      r.x = name;
      r.pass = rep.pass;
      r.details["sign"] = rep.sign;
      r.details["square_zero"] = rep.square_zero;
      r.details["lift_ok"] = rep.lift_ok;
      r.details["cohomology_agrees"] = rep.cohomology_agrees;
      return r;
    }));
  }
  return out;
}

namespace {

CheckRecord engine_record(const std::string& check, const Json& pj, const std::string& x, bool pass) {
  CheckRecord r;
  r.check = check;
  r.poset = pj;
  r.x = x;
  r.pass = pass;
  return r;
}

template <class S>
bool square_zero(const FreeComplex<S>& c) {
  for (int n : c.degrees())
    if (!is_zero_matrix(multiply(c.d(n + 1), c.d(n)))) return false;
  return true;
}

/// H(E_r, d_r) = E_{r+1} recomputed from the stored pages.
template <class S>
bool pages_coherent(const Pages<S>& pg) {
  for (std::size_t k = 0; k + 1 < pg.pages.size(); ++k) {
    const Page<S>& e = pg.pages[k];
    std::set<Bidegree> spots;
    for (const auto& [b, v] : e.entries) spots.insert(b);
    for (const auto& [b, v] : pg.pages[k + 1].entries) spots.insert(b);
    for (const auto& [p, q] : spots) {
      auto out = e.d.find({p, q});
      auto in = e.d.find({p - e.r, q + e.r - 1});
      const Index rout = out == e.d.end() ? 0 : rank(out->second);
      const Index rin = in == e.d.end() ? 0 : rank(in->second);
      if (e.rank(p, q) - rout - rin != pg.pages[k + 1].rank(p, q)) return false;
    }
  }
  return true;
}

template <class S>
bool infinity_matches(const Pages<S>& pg) {
  const auto tot = pg.infinity().totals();
  std::set<int> ns;
  for (const auto& [n, r] : tot) ns.insert(n);
  for (const auto& [n, piece] : pg.abutment.degrees) ns.insert(n);
  for (int n : ns)
    if ((tot.count(n) ? tot.at(n) : 0) != pg.abutment.rank(n)) return false;
  return true;
}

template <class S>
bool graded_pieces_match(const StratifiedData<S>& data, const FilteredComplex<S>& fc) {
  const StrataIndex ix(data.poset);
  std::set<int> ks(data.sigma.begin(), data.sigma.end());
  for (int k : ks) {
    std::vector<FreeComplex<S>> parts;
    if (data.sigma[static_cast<std::size_t>(data.poset.bottom)] == k) parts.push_back(data.A[static_cast<std::size_t>(data.poset.bottom)]);
    for (int s = 0; s < ix.strata.size(); ++s) {
      const int f = ix.to_full[static_cast<std::size_t>(s)];
      if (data.sigma[static_cast<std::size_t>(f)] == k)
        parts.push_back(tensor(data.A[static_cast<std::size_t>(f)], cochain_complex<S>(ix.strata, s, data.ring)));
    }
    if (!same_complex(graded_piece(fc, k), direct_sum(parts, data.ring))) return false;
  }
  return true;
}

}  // namespace

std::vector<CheckRecord> engine_checks(const StratifiedData<Rational>& data) {
  std::vector<CheckRecord> out;
  const Poset& full = data.poset.full;
  const Json pj = poset_json(full);
  const std::string tag = mode_name(data.mode);
  try {
    const FilteredComplex<Rational> fc = total_complex(data);
    out.push_back(engine_record("d-squared", pj, tag, square_zero(fc.total)));
    out.push_back(engine_record("filtration", pj, tag, !filtration_violation(fc).has_value()));
    if (data.mode == Mode::Primal) out.push_back(engine_record("graded-pieces", pj, tag, graded_pieces_match(data, fc)));
    const Pages<Rational> pg = spectral_pages(fc);
    out.push_back(engine_record("page-coherence", pj, tag, pages_coherent(pg)));
    out.push_back(engine_record("e-infinity", pj, tag, infinity_matches(pg)));
    const WeightDegeneration wd = weight_degeneration(pg);
    CheckRecord w = engine_record("weight-degeneration", pj, tag, wd.consistent);
    w.details["text"] = wd.text;
    w.details["degeneration"] = pg.degeneration;
    out.push_back(w);
  } catch (const std::exception& e) {
    out.push_back(failed("engine", full, tag, e.what()));
    return out;
  }
  out.push_back(guarded("duality", full, tag, [&] {
    // the dual pipeline on the dual data has the degree-negated abutment
    const StratifiedData<Rational> other = dualize(data);
    const GradedModule a = abutment(data), b = abutment(other);
    CheckRecord r = engine_record("duality", pj, tag, a.negated().same_groups(b));
    r.details["abutment"] = module_json(a);
    r.details["dual_abutment"] = module_json(b);
    return r;
  }));
  if (data.mode == Mode::Primal && StrataIndex(data.poset).strata.size() == 1)
    out.push_back(guarded("two-strata", full, tag, [&] { return two_strata_check(data); }));
  return out;
}

Poset shrink_poset(const Poset& p, const std::function<bool(const Poset&)>& fails) {
  Poset cur = p;
  bool progress = true;
  while (progress && cur.size() > 1) {
    progress = false;
    for (int drop = 0; drop < cur.size(); ++drop) {
      std::vector<int> keep;
      for (int x = 0; x < cur.size(); ++x)
        if (x != drop) keep.push_back(x);
      const Poset smaller = cur.induced(keep);
      bool still = false;
      try {
        still = fails(smaller);
      } catch (const std::exception&) {
        still = false;
      }
      if (still) {
        cur = smaller;
        progress = true;
        break;
      }
    }
  }
  return cur;
}

int resolve_threads(std::optional<int> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("STRATIFY_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

namespace {

template <class F>
std::vector<std::vector<CheckRecord>> run_cases(int count, int threads, F&& one_case) {
  std::vector<std::vector<CheckRecord>> slots(static_cast<std::size_t>(std::max(count, 0)));
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::max(1, std::min(threads, count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) slots[static_cast<std::size_t>(i)] = one_case(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return slots;
}

Poset poset_of(const Json& j) {
  return build_poset(j.at("elements").get<std::vector<std::string>>(),
                     j.at("covers").get<std::vector<std::pair<std::string, std::string>>>());
}

}  // namespace

SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int count, int threads) {
  SuiteResult res;
  res.suite = suite;
  std::vector<std::vector<CheckRecord>> slots;
  if (suite == "lemmas") {
    slots = run_cases(count, threads, [&](int i) {
      auto rng = case_rng(seed, suite, i);
      std::vector<CheckRecord> rs = lemma_checks(random_poset(rng, 7, true));
      const auto more = lemma_checks(random_poset(rng, 6, false));
      rs.insert(rs.end(), more.begin(), more.end());
      return rs;
    });
  } else if (suite == "holim") {
    slots = run_cases(count, threads, [&](int i) {
      auto rng = case_rng(seed, suite, i);
      return holim_checks(random_poset(rng, 6, false));
    });
  } else if (suite == "engine") {
    slots = run_cases(count, threads, [&](int i) {
      auto rng = case_rng(seed, suite, i);
      RandomDataOptions opt;
      const auto primal = random_data<Rational>(rng, kQ, opt);
      std::vector<CheckRecord> rs = engine_checks(primal);
      const auto dual = engine_checks(dualize(primal));
      rs.insert(rs.end(), dual.begin(), dual.end());
      opt.max_strata = 1;
      const auto small = random_data<Integer>(rng, kZ, opt);
      rs.push_back(guarded("two-strata", small.poset.full, "Z", [&] { return two_strata_check(small); }));
      return rs;
    });
  } else {
    throw PreconditionError("unknown suite '" + suite + "' (expected lemmas, holim, engine or all)");
  }
  for (auto& s : slots) res.records.insert(res.records.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));

  if (suite == "holim") {
    // one global sign across every connecting check
    std::set<int> signs;
    for (const auto& r : res.records)
      if (r.check == "connecting" && r.details.contains("sign")) signs.insert(r.details["sign"].get<int>());
    CheckRecord g;
    g.check = "connecting-sign";
    g.poset = Json::object();
    g.x = "*";
    g.pass = signs.size() <= 1 && !signs.count(0);
    g.details["signs"] = std::vector<int>(signs.begin(), signs.end());
    res.records.push_back(g);
  }

  for (const auto& r : res.records) {
    if (r.pass) continue;
    if (suite == "engine" || r.poset.empty()) {
      Json c;
      c["check"] = r.check;
      c["poset"] = r.poset;
      res.counterexample = c;
      break;
    }
    const Poset p = poset_of(r.poset);
    const auto checks = suite == "lemmas" ? lemma_checks : holim_checks;
    const std::string check = r.check;
    const Poset small = shrink_poset(p, [&](const Poset& q) {
      for (const auto& s : checks(q))
        if (!s.pass && s.check == check) return true;
      return false;
    });
    Json c;
    c["check"] = check;
    c["poset"] = poset_json(small);
    res.counterexample = c;
    break;
  }
  return res;
}

}  // namespace stratify
