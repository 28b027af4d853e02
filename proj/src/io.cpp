#include "stratify/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace stratify {

namespace {

std::map<std::string, int> int_map(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + " must be an object");
  std::map<std::string, int> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer()) throw SchemaError(where + "." + k + " must be an integer");
    out[k] = v.get<int>();
  }
  return out;
}

Bidegree parse_bidegree(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw SchemaError("bidegree key '" + key + "' must look like 'p,q'");
  return {detail::parse_degree(key.substr(0, comma), "bidegree"), detail::parse_degree(key.substr(comma + 1), "bidegree")};
}

std::string bidegree_key(const Bidegree& b) { return std::to_string(b.first) + "," + std::to_string(b.second); }

}  // namespace

std::string scalar_text(const Integer& v) { return v.str(); }

Document parse_document(const Json& j) {
  if (!j.is_object()) throw SchemaError("document must be a JSON object");
  static const std::set<std::string> known{"ring", "mode", "bottom", "poset", "sigma", "strata", "restrictions", "gysin", "codim", "description"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw SchemaError("unknown key '" + k + "'");
  Document doc;
  if (j.contains("ring")) {
    if (!j["ring"].is_string()) throw SchemaError("'ring' must be a string");
    try {
      doc.ring = Ring::parse(j["ring"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("ring: ") + e.what());
    }
  }
  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (m == "primal") doc.mode = Mode::Primal;
    else if (m == "dual") doc.mode = Mode::Dual;
    else throw SchemaError("'mode' must be \"primal\" or \"dual\"");
  }
  if (j.contains("bottom")) {
    if (!j["bottom"].is_string() || j["bottom"].get<std::string>().empty()) throw SchemaError("'bottom' must be a non-empty string");
    doc.bottom = j["bottom"].get<std::string>();
  }
  if (!j.contains("poset") || !j["poset"].is_object()) throw SchemaError("'poset' object required");
  const Json& p = j["poset"];
  for (const auto& [k, v] : p.items())
    if (k != "elements" && k != "covers") throw SchemaError("poset: unknown key '" + k + "'");
  if (!p.contains("elements") || !p["elements"].is_array()) throw SchemaError("poset.elements must be an array");
  std::vector<std::string> elements;
  for (const auto& e : p["elements"]) {
    if (!e.is_string() || e.get<std::string>().empty()) throw SchemaError("poset.elements must be non-empty strings");
    elements.push_back(e.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> covers;
  if (p.contains("covers")) {
    if (!p["covers"].is_array()) throw SchemaError("poset.covers must be an array");
    for (const auto& c : p["covers"]) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string())
        throw SchemaError("each cover must be a pair of element names");
      covers.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
    }
  }
  if (std::find(elements.begin(), elements.end(), doc.bottom) != elements.end())
    throw SchemaError("the bottom '" + doc.bottom + "' is adjoined automatically and must not be listed");
  try {
    doc.strata = build_poset(elements, covers);
    doc.hat = adjoin_bottom(doc.strata, doc.bottom);
  } catch (const PosetError& e) {
    throw SchemaError(std::string("poset: ") + e.what());
  }
  const Poset& full = doc.hat.full;
  auto check_elements = [&](const Json& obj, const std::string& where) {
    for (const auto& [k, v] : obj.items())
      if (!full.find(k)) throw SchemaError(where + ": unknown element '" + k + "'");
  };
  if (j.contains("sigma")) {
    doc.sigma = int_map(j["sigma"], "sigma");
    check_elements(j["sigma"], "sigma");
  }
  if (j.contains("codim")) {
    doc.codim = int_map(j["codim"], "codim");
    check_elements(j["codim"], "codim");
  }
  doc.strata_complexes = Json::object();
  if (j.contains("strata")) {
    if (!j["strata"].is_object()) throw SchemaError("'strata' must be an object");
    check_elements(j["strata"], "strata");
    doc.strata_complexes = j["strata"];
  }
  const char* key = doc.mode == Mode::Primal ? "restrictions" : "gysin";
  const char* other = doc.mode == Mode::Primal ? "gysin" : "restrictions";
  if (j.contains(other)) throw SchemaError(std::string("'") + other + "' is not allowed in " + mode_name(doc.mode) + " mode");
  doc.maps = Json::object();
  if (j.contains(key)) {
    if (!j[key].is_object()) throw SchemaError(std::string("'") + key + "' must be an object");
    doc.maps = j[key];
  }
  if (doc.codim && doc.mode != Mode::Dual) throw SchemaError("'codim' is only allowed in dual mode");
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_document(j);
}

Json poset_json(const Poset& p) {
  Json j;
  j["elements"] = p.elements();
  j["covers"] = Json::array();
  for (const auto& [a, b] : p.cover_pairs()) j["covers"].push_back({p.id(a), p.id(b)});
  return j;
}

Json module_json(const GradedModule& m) {
  Json j = Json::object();
  for (const auto& [n, piece] : m.degrees) {
    Json e;
    e["rank"] = piece.rank;
    e["torsion"] = Json::array();
    for (const auto& t : piece.torsion) e["torsion"].push_back(scalar_text(t));
    if (m.weighted) e["weights"] = piece.weights;
    j[std::to_string(n)] = e;
  }
  return j;
}

namespace {

GradedModule module_from_json(const Json& j) {
  GradedModule m;
  for (const auto& [k, v] : j.items()) {
    GradedModule::Piece piece;
    piece.rank = v.at("rank").get<Index>();
    for (const auto& t : v.at("torsion")) piece.torsion.push_back(Integer(t.get<std::string>()));
    if (v.contains("weights")) {
      m.weighted = true;
      piece.weights = v["weights"].get<std::vector<int>>();
    }
    m.degrees[detail::parse_degree(k, "abutment")] = piece;
  }
  return m;
}

}  // namespace

std::string degeneration_text(const PagesSummary& s) {
  if (s.degeneration <= 1) return "degenerates at r=1 (no nonzero d1)";
  return "degenerates at r=" + std::to_string(s.degeneration);
}

Json pages_json(const PagesSummary& s, int r_max) {
  Json j;
  j["ring"] = s.ring;
  j["quadrant"] = s.second_quadrant ? "second" : "first";
  j["pages"] = Json::array();
  for (const auto& pg : s.pages) {
    if (pg.r > r_max) break;
    Json p;
    p["r"] = pg.r;
    p["entries"] = Json::object();
    for (const auto& [b, e] : pg.entries) {
      Json x;
      x["rank"] = e.rank;
      x["weights"] = e.weights;
      p["entries"][bidegree_key(b)] = x;
    }
    p["d"] = Json::object();
    for (const auto& [b, m] : pg.d) p["d"][bidegree_key(b)] = m;
    j["pages"].push_back(p);
  }
  j["abutment"] = module_json(s.abutment);
  j["degeneration"]["page"] = s.degeneration;
  j["degeneration"]["text"] = degeneration_text(s);
  if (s.weights) {
    Json w;
    w["forced"] = s.weights->forced;
    w["from"] = s.weights->from;
    w["consistent"] = s.weights->consistent;
    w["text"] = s.weights->text;
    j["degeneration"]["weights"] = w;
  }
  return j;
}

PagesSummary pages_from_json(const Json& j) {
  PagesSummary s;
  try {
    s.ring = j.at("ring").get<std::string>();
    s.second_quadrant = j.at("quadrant") == "second";
    for (const auto& p : j.at("pages")) {
      PagesSummary::PageData pd;
      pd.r = p.at("r").get<int>();
      for (const auto& [k, v] : p.at("entries").items())
        pd.entries[parse_bidegree(k)] = {v.at("rank").get<Index>(), v.at("weights").get<std::vector<int>>()};
      for (const auto& [k, v] : p.at("d").items()) pd.d[parse_bidegree(k)] = v.get<std::vector<std::vector<std::string>>>();
      s.pages.push_back(std::move(pd));
    }
    s.abutment = module_from_json(j.at("abutment"));
    s.degeneration = j.at("degeneration").at("page").get<int>();
    if (j.at("degeneration").contains("weights")) {
      const Json& w = j["degeneration"]["weights"];
      s.weights = WeightDegeneration{w.at("forced").get<bool>(), w.at("from").get<int>(), w.at("consistent").get<bool>(),
                                     w.at("text").get<std::string>()};
    }
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("pages document: ") + e.what());
  }
  return s;
}

std::string pages_table(const PagesSummary& s, int r_max) {
  std::ostringstream os;
  for (const auto& pg : s.pages) {
    if (pg.r > r_max) break;
    int pmin = 0, pmax = 0, qmin = 0, qmax = 0;
    bool first = true;
    for (const auto& [b, e] : pg.entries) {
      if (first) {
        pmin = pmax = b.first;
        qmin = qmax = b.second;
        first = false;
      }
      pmin = std::min(pmin, b.first);
      pmax = std::max(pmax, b.first);
      qmin = std::min(qmin, b.second);
      qmax = std::max(qmax, b.second);
    }
    os << "E_" << pg.r << (s.second_quadrant ? " (second quadrant)" : "") << "\n";
    if (first) {
      os << "  (zero)\n";
      continue;
    }
    const int w = 6;
    os << std::setw(w) << "q\\p";
    for (int p = pmin; p <= pmax; ++p) os << std::setw(w) << p;
    os << "\n";
    for (int q = qmax; q >= qmin; --q) {
      os << std::setw(w) << q;
      for (int p = pmin; p <= pmax; ++p) {
        auto it = pg.entries.find({p, q});
        os << std::setw(w) << (it == pg.entries.end() ? std::string(".") : std::to_string(it->second.rank));
      }
      os << "\n";
    }
    for (const auto& [b, m] : pg.d) {
      os << "  d_" << pg.r << " (" << b.first << "," << b.second << ") -> (" << b.first + pg.r << "," << b.second - pg.r + 1 << "): [";
      for (std::size_t i = 0; i < m.size(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t k = 0; k < m[i].size(); ++k) os << (k ? " " : "") << m[i][k];
      }
      os << "]\n";
    }
  }
  os << "abutment: " << s.abutment.to_string() << "\n";
  os << degeneration_text(s) << "\n";
  if (s.weights) os << "weights: " << s.weights->text << (s.weights->consistent ? "" : " (contradicted by a computed d_r)") << "\n";
  return os.str();
}

}  // namespace stratify
