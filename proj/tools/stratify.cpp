// stratify: command-line driver.
// Exit codes: 0 ok, 1 invariant failure, 2 schema or usage error, 3 precondition.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stratify/geometry.hpp"
#include "stratify/io.hpp"
#include "stratify/verify.hpp"

using namespace stratify;

namespace {

constexpr int kOk = 0, kInvariant = 1, kSchema = 2, kPrecondition = 3;

Ring ring_option(const std::string& flag, const std::optional<Ring>& doc, const Ring& fallback) {
  if (!flag.empty()) {
    try {
      return Ring::parse(flag);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what());
    }
  }
  return doc ? *doc : fallback;
}

// --- poset-cohom --------------------------------------------------------------

struct PosetCohomArgs {
  std::string file, element, ring, out = "table";
  bool all = false, homology = false, whitney = false;
};

template <class S>
int poset_cohom(const PosetCohomArgs& a, const Document& doc, const Ring& ring) {
  const HatPoset& ph = doc.hat;
  const Poset& strata = doc.strata;
  std::vector<int> elems;  // full indices
  if (a.all) {
    elems.push_back(ph.bottom);
    for (int s = 0; s < strata.size(); ++s) elems.push_back(ph.full.index(strata.id(s)));
  } else {
    const auto f = ph.full.find(a.element);
    if (!f) throw SchemaError("unknown element '" + a.element + "'");
    elems.push_back(*f);
  }
  Json results = Json::array();
  std::ostringstream table;
  const char* label = a.homology ? "h_" : "h^";
  for (int f : elems) {
    GradedModule h;
    if (f == ph.bottom) {
      h.degrees[0].rank = 1;
    } else {
      const int x = strata.index(ph.full.id(f));
      h = a.homology ? poset_homology<S>(strata, x, ring) : poset_cohomology<S>(strata, x, ring);
    }
    Json r;
    r["element"] = ph.full.id(f);
    r["h"] = module_json(h);
    results.push_back(r);
    table << label << "(" << ph.full.id(f) << ") = " << h.to_string() << "\n";
  }
  Json whitney;
  if (a.whitney) {
    const WhitneyComplex<S> w = whitney_complex<S>(ph, ring);
    Json ranks = Json::object();
    for (const auto& [n, r] : w.complex.ranks()) ranks[std::to_string(-n)] = r;
    whitney["ranks"] = ranks;
    whitney["concentrated"] = true;
    Json exact = Json::object();
    for (int f : elems)
      if (f != ph.bottom) exact[ph.full.id(f)] = acyclicity_complex<S>(ph, f, ring).exact;
    whitney["acyclic"] = exact;
    table << "whitney ranks:";
    for (const auto& [n, r] : ranks.items()) table << " " << n << ":" << r.template get<Index>();
    table << "\n";
    for (const auto& [x, e] : exact.items()) table << "acyclicity complex at " << x << ": " << (e.template get<bool>() ? "exact" : "NOT exact") << "\n";
  }
  if (a.out == "json") {
    Json j = a.all ? Json{{"results", results}} : results[0];
    j["ring"] = ring.name();
    if (a.whitney) j["whitney"] = whitney;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << table.str();
  }
  return kOk;
}

// --- specseq ------------------------------------------------------------------

struct SpecseqArgs {
  std::string file, ring, mode, out = "table";
  int pages = 0;
};

template <class S>
int specseq(const SpecseqArgs& a, const Document& doc, const Ring& ring) {
  if constexpr (!is_field_v<S>) {
    throw PreconditionError("pages require a field");
  } else {
    StratifiedData<S> data = build_data<S>(doc, ring);
    if (!a.mode.empty()) {
      const Mode want = a.mode == "dual" ? Mode::Dual : Mode::Primal;
      if (want != data.mode) data = dualize(data);
    }
    const Pages<S> pages = spectral_pages(total_complex(data));
    std::optional<WeightDegeneration> wd;
    if (pages.weighted) wd = weight_degeneration(pages);
    const PagesSummary s = summarize(pages, wd);
    const int r_max = a.pages > 0 ? a.pages : static_cast<int>(s.pages.size());
    if (a.out == "json") {
      std::cout << pages_json(s, r_max).dump(2) << "\n";
    } else {
      std::cout << pages_table(s, r_max);
      const E1Report<S> e1 = e1_page(data);
      for (const auto& w : e1.warnings) std::cout << "warning: " << w << "\n";
    }
    return kOk;
  }
}

// --- generate -------------------------------------------------------------------

struct GenerateArgs {
  std::string kind, file, ring = "Q", mode = "primal";
  int n = 3, k = 3;
  bool essentialize = false;
};

ArrangementSpec read_arrangement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer() || !j.contains("forms") || !j["forms"].is_array())
    throw SchemaError("arrangement file needs integer 'dim' and array 'forms'");
  ArrangementSpec spec;
  spec.dim = j["dim"].get<int>();
  for (const auto& f : j["forms"]) {
    if (!f.is_array()) throw SchemaError("each form must be an array of coefficients");
    std::vector<Rational> row;
    for (const auto& v : f) row.push_back(detail::parse_entry<Rational>(v, Ring::rationals(), "forms"));
    spec.forms.push_back(std::move(row));
  }
  return spec;
}

template <class S>
Json generate(const GenerateArgs& a, const Ring& ring) {
  if (a.kind == "braid") return data_json(arrangement_data<S>(intersection_poset(braid_spec(), true), ring));
  if (a.kind == "arrangement") {
    if (a.file.empty()) throw SchemaError("generate arrangement needs --file");
    return data_json(arrangement_data<S>(intersection_poset(read_arrangement(a.file), a.essentialize), ring));
  }
  if (a.kind == "p1") return data_json(a.mode == "dual" ? p1_minus_points_dual<S>(a.k, ring) : p1_minus_points<S>(a.k, ring));
  if (a.kind == "ncd") return data_json(ncd_boolean<S>(a.n, ring));
  if (a.kind == "partition") {
    const HatPoset ph = partition_lattice(a.n);
    Json j;
    j["bottom"] = ph.bottom_id();
    j["poset"] = poset_json(ph.strata());
    return j;
  }
  throw SchemaError("unknown generator '" + a.kind + "'");
}

// --- verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int count = 20;
  std::optional<int> threads;
  bool quiet = false;
};

int verify(const VerifyArgs& a) {
  std::vector<std::string> suites;
  if (a.suite == "all") suites = {"lemmas", "holim", "engine"};
  else suites = {a.suite};
  const int threads = resolve_threads(a.threads);
  bool ok = true;
  for (const auto& s : suites) {
    const SuiteResult r = run_suite(s, a.seed, a.count, threads);
    for (const auto& rec : r.records)
      if (!a.quiet || !rec.pass) std::cout << rec.to_json().dump() << "\n";
    std::cout << r.summary(a.seed, a.count).dump() << "\n";
    if (!r.pass()) {
      ok = false;
      if (r.counterexample) std::cerr << "minimal counterexample: " << r.counterexample->dump() << "\n";
    }
  }
  return ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poset cohomology, homotopy limits and spectral sequences of stratified data"};
  app.require_subcommand(1);

  PosetCohomArgs pc;
  auto* cmd_pc = app.add_subcommand("poset-cohom", "poset (co)homology h(x) of the strata poset");
  cmd_pc->add_option("file", pc.file, "input document")->required();
  auto* el = cmd_pc->add_option("--element", pc.element, "element identifier");
  auto* all = cmd_pc->add_flag("--all", pc.all, "every element, bottom included");
  el->excludes(all);
  cmd_pc->add_option("--ring", pc.ring, "Z, Q or Fp (default: document ring, else Z)");
  cmd_pc->add_flag("--homology", pc.homology, "report h_n instead of h^n");
  cmd_pc->add_flag("--whitney", pc.whitney, "Whitney complex and acyclicity checks (graded posets)");
  cmd_pc->add_option("--out", pc.out, "json or table")->check(CLI::IsMember({"json", "table"}));

  SpecseqArgs ss;
  auto* cmd_ss = app.add_subcommand("specseq", "filtered total complex, pages and abutment");
  cmd_ss->add_option("file", ss.file, "input document")->required();
  cmd_ss->add_option("--pages", ss.pages, "last page to print (default: all)")->check(CLI::NonNegativeNumber);
  cmd_ss->add_option("--ring", ss.ring, "Q or Fp (default: document ring, else Q)");
  cmd_ss->add_option("--mode", ss.mode, "primal or dual; a mode other than the document's dualizes the data")
      ->check(CLI::IsMember({"primal", "dual"}));
  cmd_ss->add_option("--out", ss.out, "json or table")->check(CLI::IsMember({"json", "table"}));

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "emit a stratified data document");
  cmd_gen->add_option("kind", gen.kind, "braid, partition, p1, ncd or arrangement")
      ->required()
      ->check(CLI::IsMember({"braid", "partition", "p1", "ncd", "arrangement"}));
  cmd_gen->add_option("--n", gen.n, "size for partition and ncd");
  cmd_gen->add_option("--k", gen.k, "number of points for p1");
  cmd_gen->add_option("--file", gen.file, "arrangement file {\"dim\": n, \"forms\": [[...], ...]}");
  cmd_gen->add_option("--ring", gen.ring, "coefficient ring");
  cmd_gen->add_option("--mode", gen.mode, "primal or dual (p1 only)")->check(CLI::IsMember({"primal", "dual"}));
  cmd_gen->add_flag("--essentialize", gen.essentialize, "use the rank of the arrangement as ambient dimension");

  VerifyArgs va;
  auto* cmd_v = app.add_subcommand("verify", "randomized invariant suites");
  cmd_v->add_option("--suite", va.suite, "lemmas, holim, engine or all")->check(CLI::IsMember({"lemmas", "holim", "engine", "all"}));
  cmd_v->add_option("--seed", va.seed, "seed");
  cmd_v->add_option("--count", va.count, "cases per suite")->check(CLI::NonNegativeNumber);
  cmd_v->add_option("--threads", va.threads, "worker threads (fallback: STRATIFY_THREADS)");
  cmd_v->add_flag("--quiet", va.quiet, "print failing records and summaries only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchema;
  }

  try {
    if (cmd_pc->parsed()) {
      if (!pc.all && pc.element.empty()) throw SchemaError("poset-cohom needs --element or --all");
      const Document doc = load_document(pc.file);
      const Ring ring = ring_option(pc.ring, doc.ring, Ring::integers());
      return dispatch_ring(ring, [&](auto tag) { return poset_cohom<typename decltype(tag)::type>(pc, doc, ring); });
    }
    if (cmd_ss->parsed()) {
      const Document doc = load_document(ss.file);
      const Ring ring = ring_option(ss.ring, doc.ring, Ring::rationals());
      if (!ring.is_field()) throw PreconditionError("pages require a field");
      return dispatch_ring(ring, [&](auto tag) { return specseq<typename decltype(tag)::type>(ss, doc, ring); });
    }
    if (cmd_gen->parsed()) {
      const Ring ring = ring_option(gen.ring, std::nullopt, Ring::rationals());
      const Json j = dispatch_ring(ring, [&](auto tag) { return generate<typename decltype(tag)::type>(gen, ring); });
      std::cout << j.dump(2) << "\n";
      return kOk;
    }
    if (cmd_v->parsed()) return verify(va);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const PosetError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const FunctorialityError& e) {
    // bad input rather than a bug: the supplied restrictions do not commute
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  }
  return kOk;
}
