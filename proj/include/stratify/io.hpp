// JSON input documents, data serialization, and page reports.
// Matrix entries and invariant factors are written as strings.
#ifndef STRATIFY_IO_HPP
#define STRATIFY_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stratify/engine.hpp"

namespace stratify {

using Json = nlohmann::json;

/// Malformed input: unknown keys or elements, wrong types, shape mismatches.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A validated document. Elements list the strata only; the bottom is adjoined.
struct Document {
  std::optional<Ring> ring;
  Mode mode = Mode::Primal;
  std::string bottom = kDefaultBottom;
  Poset strata;
  HatPoset hat;
  std::optional<std::map<std::string, int>> sigma;
  Json strata_complexes;  // object, possibly empty for poset-only documents
  Json maps;              // "restrictions" or "gysin"
  std::optional<std::map<std::string, int>> codim;

  bool has_data() const { return !strata_complexes.empty(); }
};

Document parse_document(const Json& j);
Document load_document(const std::string& path);

std::string scalar_text(const Integer& v);

template <class S>
Json matrix_json(const Matrix<S>& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(ScalarTraits<S>::to_string(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

inline int parse_degree(const std::string& key, const std::string& where) {
  try {
    std::size_t pos = 0;
    const int n = std::stoi(key, &pos);
    if (pos != key.size()) throw std::invalid_argument(key);
    return n;
  } catch (const std::exception&) {
    throw SchemaError(where + ": degree key '" + key + "' is not an integer");
  }
}

template <class S>
S parse_entry(const Json& v, const Ring& ring, const std::string& where) {
  try {
    if (v.is_string()) return parse_scalar<S>(v.get<std::string>(), ring);
    if (v.is_number_integer()) return parse_scalar<S>(std::to_string(v.get<long long>()), ring);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
  throw SchemaError(where + ": matrix entries must be integers or strings");
}

template <class S>
Matrix<S> parse_matrix(const Json& j, Index rows, Index cols, const Ring& ring, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": matrix must be an array of rows");
  if (static_cast<Index>(j.size()) != rows)
    throw SchemaError(where + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix<S> m = zero_matrix<S>(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw SchemaError(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (Index k = 0; k < cols; ++k) m(i, k) = parse_entry<S>(row[static_cast<std::size_t>(k)], ring, where);
  }
  return m;
}

}  // namespace detail

/// {"ranks": {"n": r}, "diff": {"n": [[...]]}, "weights": {"n": [w...]}}.
template <class S>
FreeComplex<S> complex_from_json(const Json& j, const Ring& ring, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": complex must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "ranks" && k != "diff" && k != "weights") throw SchemaError(where + ": unknown key '" + k + "'");
  if (!j.contains("ranks") || !j["ranks"].is_object()) throw SchemaError(where + ": 'ranks' object required");
  std::map<int, Index> ranks;
  for (const auto& [k, v] : j["ranks"].items()) {
    if (!v.is_number_integer() || v.template get<long long>() < 0) throw SchemaError(where + ": ranks must be non-negative integers");
    ranks[detail::parse_degree(k, where)] = v.template get<Index>();
  }
  auto rank = [&](int n) { return ranks.count(n) ? ranks.at(n) : Index{0}; };
  std::map<int, Matrix<S>> diff;
  if (j.contains("diff")) {
    if (!j["diff"].is_object()) throw SchemaError(where + ": 'diff' must be an object");
    for (const auto& [k, v] : j["diff"].items()) {
      const int n = detail::parse_degree(k, where);
      diff[n] = detail::parse_matrix<S>(v, rank(n + 1), rank(n), ring, where + ".diff." + k);
    }
  }
  std::optional<typename FreeComplex<S>::WeightMap> weights;
  if (j.contains("weights")) {
    if (!j["weights"].is_object()) throw SchemaError(where + ": 'weights' must be an object");
    weights.emplace();
    for (const auto& [k, v] : j["weights"].items()) {
      const int n = detail::parse_degree(k, where);
      if (!v.is_array()) throw SchemaError(where + ": weights must be arrays");
      std::vector<int> ws;
      for (const auto& w : v) {
        if (!w.is_number_integer()) throw SchemaError(where + ": weights must be integers");
        ws.push_back(w.template get<int>());
      }
      if (static_cast<Index>(ws.size()) != rank(n)) throw SchemaError(where + ": weights in degree " + k + " do not match the rank");
      (*weights)[n] = std::move(ws);
    }
    for (const auto& [n, r] : ranks)
      if (r > 0 && !weights->count(n)) throw SchemaError(where + ": weights missing in degree " + std::to_string(n));
  }
  try {
    return FreeComplex<S>(ring, ranks, std::move(diff), std::move(weights));
  } catch (const InvariantError& e) {
    throw PreconditionError(where + ": " + e.what());
  }
}

template <class S>
Json complex_json(const FreeComplex<S>& c) {
  Json j;
  j["ranks"] = Json::object();
  for (const auto& [n, r] : c.ranks()) j["ranks"][std::to_string(n)] = r;
  j["diff"] = Json::object();
  for (const auto& [n, m] : c.differentials()) j["diff"][std::to_string(n)] = matrix_json(m);
  if (c.has_weights()) {
    j["weights"] = Json::object();
    for (const auto& [n, r] : c.ranks()) j["weights"][std::to_string(n)] = c.weights(n);
  }
  return j;
}

/// Builds the stratified data of a document over the given ring. Input-level
/// mathematical failures (non-functorial maps, non-chain maps) surface as
/// PreconditionError; structural problems as SchemaError.
template <class S>
StratifiedData<S> build_data(const Document& doc, const Ring& ring) {
  if (!doc.has_data()) throw SchemaError("document has no 'strata' complexes");
  const HatPoset& ph = doc.hat;
  const Poset& full = ph.full;
  std::vector<FreeComplex<S>> complexes;
  for (int x = 0; x < full.size(); ++x) {
    const std::string& id = full.id(x);
    if (!doc.strata_complexes.contains(id)) throw SchemaError("strata: missing complex for '" + id + "'");
    complexes.push_back(complex_from_json<S>(doc.strata_complexes[id], ring, "strata." + id));
  }
  std::vector<int> sigma;
  if (doc.sigma) {
    for (int x = 0; x < full.size(); ++x) {
      const std::string& id = full.id(x);
      if (x == ph.bottom && !doc.sigma->count(id)) {
        sigma.push_back(0);
        continue;
      }
      if (!doc.sigma->count(id)) throw SchemaError("sigma: missing value for '" + id + "'");
      sigma.push_back(doc.sigma->at(id));
    }
  } else {
    sigma = default_sigma(ph);
  }
  // maps "S->T"
  std::map<Edge, std::pair<int, std::map<int, Matrix<S>>>> raw;  // shift, components
  for (const auto& [key, v] : doc.maps.items()) {
    const auto arrow = key.find("->");
    if (arrow == std::string::npos) throw SchemaError("map key '" + key + "' must look like 'S->T'");
    const auto s = full.find(key.substr(0, arrow)), t = full.find(key.substr(arrow + 2));
    if (!s || !t) throw SchemaError("map key '" + key + "' names an unknown element");
    if (!full.less(*s, *t)) throw PreconditionError("map key '" + key + "': the first element must lie below the second");
    if (!v.is_object()) throw SchemaError("map '" + key + "' must be an object keyed by degree");
    const bool dual = doc.mode == Mode::Dual;
    const int src = dual ? *t : *s, dst = dual ? *s : *t;
    int shift = 0;
    if (dual && doc.codim) shift = 2 * (doc.codim->at(full.id(*t)) - doc.codim->at(full.id(*s)));
    std::map<int, Matrix<S>> comps;
    for (const auto& [k, m] : v.items()) {
      const int n = detail::parse_degree(k, key);
      comps[n] = detail::parse_matrix<S>(m, complexes[static_cast<std::size_t>(dst)].rank(n + shift),
                                         complexes[static_cast<std::size_t>(src)].rank(n), ring, "map " + key + "." + k);
    }
    raw[{*s, *t}] = {shift, std::move(comps)};
  }
  try {
    if (doc.codim) {
      if (doc.mode != Mode::Dual) throw SchemaError("'codim' is only meaningful in dual mode");
      std::vector<int> codim;
      for (int x = 0; x < full.size(); ++x) {
        const std::string& id = full.id(x);
        if (x == ph.bottom && !doc.codim->count(id)) {
          codim.push_back(0);
          continue;
        }
        if (!doc.codim->count(id)) throw SchemaError("codim: missing value for '" + id + "'");
        codim.push_back(doc.codim->at(id));
      }
      std::map<Edge, GradedMap<S>> gysin;
      for (auto& [e, sc] : raw)
        gysin[e] = GradedMap<S>{complexes[static_cast<std::size_t>(e.second)], complexes[static_cast<std::size_t>(e.first)], sc.first, std::move(sc.second)};
      StratifiedData<S> data = purity_input<S>(ph, sigma, complexes, codim, gysin, ring);
      restriction_system(data);
      return data;
    }
    StratifiedData<S> data;
    data.ring = ring;
    data.poset = ph;
    data.sigma = sigma;
    data.A = std::move(complexes);
    data.mode = doc.mode;
    for (auto& [e, sc] : raw) {
      const int src = doc.mode == Mode::Dual ? e.second : e.first;
      const int dst = doc.mode == Mode::Dual ? e.first : e.second;
      data.maps[e] = GradedMap<S>{data.A[static_cast<std::size_t>(src)], data.A[static_cast<std::size_t>(dst)], 0, std::move(sc.second)};
    }
    restriction_system(data);
    return data;
  } catch (const InvariantError& e) {
    throw PreconditionError(e.what());
  }
}

/// Serializes data (purity already applied) so that build_data reproduces it.
template <class S>
Json data_json(const StratifiedData<S>& data) {
  const Poset& full = data.poset.full;
  const StrataIndex ix(data.poset);
  Json j;
  j["ring"] = data.ring.name();
  j["mode"] = mode_name(data.mode);
  j["bottom"] = data.poset.bottom_id();
  j["poset"]["elements"] = ix.strata.elements();
  j["poset"]["covers"] = Json::array();
  for (const auto& [a, b] : ix.strata.cover_pairs()) j["poset"]["covers"].push_back({ix.strata.id(a), ix.strata.id(b)});
  for (int x = 0; x < full.size(); ++x) {
    j["sigma"][full.id(x)] = data.sigma[static_cast<std::size_t>(x)];
    j["strata"][full.id(x)] = complex_json(data.A[static_cast<std::size_t>(x)]);
  }
  const char* key = data.mode == Mode::Primal ? "restrictions" : "gysin";
  j[key] = Json::object();
  for (const auto& [e, f] : data.maps) {
    Json m = Json::object();
    for (const auto& [n, mat] : f.components) m[std::to_string(n)] = matrix_json(mat);
    j[key][full.id(e.first) + "->" + full.id(e.second)] = m;
  }
  return j;
}

Json poset_json(const Poset& p);

// --- reports ----------------------------------------------------------------

Json module_json(const GradedModule& m);

/// Plain data mirror of a Pages object, so emitted JSON can be read back.
struct PagesSummary {
  struct Entry {
    Index rank = 0;
    std::vector<int> weights;
  };
  struct PageData {
    int r = 1;
    std::map<Bidegree, Entry> entries;
    std::map<Bidegree, std::vector<std::vector<std::string>>> d;
  };
  std::string ring;
  bool second_quadrant = false;
  std::vector<PageData> pages;
  GradedModule abutment;
  int degeneration = 1;
  std::optional<WeightDegeneration> weights;
};

template <class S>
PagesSummary summarize(const Pages<S>& pages, std::optional<WeightDegeneration> wd) {
  PagesSummary s;
  s.ring = pages.ring.name();
  s.second_quadrant = pages.second_quadrant;
  s.abutment = pages.abutment;
  s.degeneration = pages.degeneration;
  s.weights = std::move(wd);
  for (const auto& pg : pages.pages) {
    PagesSummary::PageData pd;
    pd.r = pg.r;
    for (const auto& [b, e] : pg.entries) pd.entries[b] = {e.rank, e.weights};
    for (const auto& [b, m] : pg.d) {
      std::vector<std::vector<std::string>> rows;
      for (Index i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row;
        for (Index k = 0; k < m.cols(); ++k) row.push_back(ScalarTraits<S>::to_string(m(i, k)));
        rows.push_back(row);
      }
      pd.d[b] = rows;
    }
    s.pages.push_back(std::move(pd));
  }
  return s;
}

std::string degeneration_text(const PagesSummary& s);
Json pages_json(const PagesSummary& s, int r_max);
PagesSummary pages_from_json(const Json& j);
std::string pages_table(const PagesSummary& s, int r_max);

}  // namespace stratify

#endif  // STRATIFY_IO_HPP
