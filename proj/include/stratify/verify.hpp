// Randomized invariant suites behind `stratify verify`. Case i of a suite
// draws from its own generator seeded by (seed, suite, i), so results do not
// depend on the thread count.
#ifndef STRATIFY_VERIFY_HPP
#define STRATIFY_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stratify/io.hpp"

namespace stratify {

struct CheckRecord {
  std::string check;
  Json poset;
  std::string x;
  bool pass = true;
  Json details = Json::object();

  Json to_json() const;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckRecord> records;
  std::optional<Json> counterexample;  // minimal failing poset or dataset

  bool pass() const;
  std::size_t failures() const;
  Json summary(std::uint64_t seed, int count) const;
};

std::mt19937_64 case_rng(std::uint64_t seed, const std::string& suite, int index);

/// Chain-level checks on one poset: contractibility (when it has a least element),
/// the commutator identities for all x < z, and b on covers.
std::vector<CheckRecord> lemma_checks(const Poset& p);
/// holim of K_x against C^{.+1}(x) for every element and the connecting morphism for every cover.
std::vector<CheckRecord> holim_checks(const Poset& p);
/// Structural invariants of the engine on one primal dataset (over Q) and its
/// dual; a |P| = 1 dataset also gets the cone comparison.
std::vector<CheckRecord> engine_checks(const StratifiedData<Rational>& data);
/// Cone comparison for one stratum over any ring (torsion over Z).
template <class S>
CheckRecord two_strata_check(const StratifiedData<S>& data);

/// Greedily deletes elements while `fails` stays true.
Poset shrink_poset(const Poset& p, const std::function<bool(const Poset&)>& fails);

/// suite: lemmas | holim | engine. threads <= 0 means hardware concurrency.
SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int count, int threads);

/// Thread count from --threads, then STRATIFY_THREADS, then 1.
int resolve_threads(std::optional<int> flag);

template <class S>
CheckRecord two_strata_check(const StratifiedData<S>& data) {
  CheckRecord rec;
  rec.check = "two-strata";
  rec.poset = poset_json(data.poset.full);
  const StrataIndex ix(data.poset);
  if (ix.strata.size() != 1) throw PreconditionError("two-strata check needs exactly one stratum");
  const int s = ix.to_full[0];
  rec.x = data.poset.full.id(s);
  const auto rho = restriction_system(data).at({data.poset.bottom, s});
  const GradedModule engine = abutment(data);
  const GradedModule direct = homology(shift(cone(rho), -1));
  rec.pass = engine.same_groups(direct);
  rec.details["engine"] = module_json(engine);
  rec.details["cone"] = module_json(direct);
  return rec;
}

}  // namespace stratify

#endif  // STRATIFY_VERIFY_HPP
