#include "stratify/geometry.hpp"

#include <algorithm>
#include <set>

namespace stratify {

namespace {

using QMatrix = Matrix<Rational>;

QMatrix form_matrix(const ArrangementSpec& spec, const std::vector<int>& rows) {
  QMatrix m = zero_matrix<Rational>(static_cast<Index>(rows.size()), spec.dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < spec.dim; ++j) m(static_cast<Index>(i), j) = spec.forms[static_cast<std::size_t>(rows[i])][static_cast<std::size_t>(j)];
  return m;
}

bool proportional(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  QMatrix m(2, static_cast<Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    m(0, static_cast<Index>(j)) = a[j];
    m(1, static_cast<Index>(j)) = b[j];
  }
  return rank(m) < 2;
}

std::string flat_id(const std::vector<int>& f) {
  std::string s = "F{";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(f[i] + 1);
  }
  return s + "}";
}

}  // namespace

Arrangement intersection_poset(const ArrangementSpec& spec, bool essentialize) {
  if (spec.dim < 1) throw std::invalid_argument("arrangement needs a positive ambient dimension");
  if (spec.forms.empty()) throw std::invalid_argument("arrangement needs at least one hyperplane");
  ArrangementSpec lin;
  lin.dim = spec.dim;
  for (const auto& f : spec.forms) {
    if (static_cast<int>(f.size()) != spec.dim && static_cast<int>(f.size()) != spec.dim + 1)
      throw std::invalid_argument("form of wrong length");
    if (static_cast<int>(f.size()) == spec.dim + 1 && f.back() != 0) throw PreconditionError("non-central arrangement");
    std::vector<Rational> g(f.begin(), f.begin() + spec.dim);
    if (std::all_of(g.begin(), g.end(), [](const Rational& v) { return v == 0; })) throw std::invalid_argument("zero form");
    for (const auto& h : lin.forms)
      if (proportional(g, h)) throw std::invalid_argument("duplicate hyperplane");
    lin.forms.push_back(std::move(g));
  }
  const int nh = static_cast<int>(lin.forms.size());
  // closure of a set of hyperplanes: every form in the span
  auto closure = [&](const std::vector<int>& s) {
    const Index r = rank(form_matrix(lin, s));
    std::vector<int> out;
    for (int h = 0; h < nh; ++h) {
      std::vector<int> t = s;
      t.push_back(h);
      if (rank(form_matrix(lin, t)) == r) out.push_back(h);
    }
    return out;
  };
  std::set<std::vector<int>> seen{{}};
  std::vector<std::vector<int>> frontier{{}};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& f : frontier)
      for (int h = 0; h < nh; ++h) {
        if (std::binary_search(f.begin(), f.end(), h)) continue;
        std::vector<int> g = f;
        g.push_back(h);
        std::sort(g.begin(), g.end());
        g = closure(g);
        if (seen.insert(g).second) next.push_back(g);
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<int>> flats(seen.begin(), seen.end());
  std::vector<int> rk;
  for (const auto& f : flats) rk.push_back(static_cast<int>(rank(form_matrix(lin, f))));
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> covers;
  for (const auto& f : flats) ids.push_back(f.empty() ? std::string(kDefaultBottom) : flat_id(f));
  for (std::size_t a = 0; a < flats.size(); ++a)
    for (std::size_t b = 0; b < flats.size(); ++b)
      if (rk[b] == rk[a] + 1 && std::includes(flats[b].begin(), flats[b].end(), flats[a].begin(), flats[a].end()))
        covers.emplace_back(ids[a], ids[b]);
  Arrangement out;
  out.spec = lin;
  out.poset = as_hat(build_poset(ids, covers), kDefaultBottom);
  const Poset& full = out.poset.full;
  out.flats.resize(flats.size());
  out.codim.resize(flats.size());
  for (std::size_t a = 0; a < flats.size(); ++a) {
    const int i = full.index(ids[a]);
    out.flats[static_cast<std::size_t>(i)] = flats[a];
    out.codim[static_cast<std::size_t>(i)] = rk[a];
  }
  std::vector<int> all(static_cast<std::size_t>(nh));
  for (int h = 0; h < nh; ++h) all[static_cast<std::size_t>(h)] = h;
  out.ambient_dim = essentialize ? static_cast<int>(rank(form_matrix(lin, all))) : spec.dim;
  return out;
}

ArrangementSpec braid_spec() {
  ArrangementSpec s;
  s.dim = 3;
  s.forms = {{1, -1, 0}, {0, 1, -1}, {1, 0, -1}};
  return s;
}

ArrangementSpec boolean_spec(int n) {
  ArrangementSpec s;
  s.dim = n;
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> f(static_cast<std::size_t>(n), Rational(0));
    f[static_cast<std::size_t>(i)] = 1;
    s.forms.push_back(f);
  }
  return s;
}

std::vector<int> hyperplane_permutation(const ArrangementSpec& spec, const std::vector<std::vector<Rational>>& g) {
  const int n = spec.dim;
  QMatrix gm(n, n);
  if (static_cast<int>(g.size()) != n) throw std::invalid_argument("linear map of wrong size");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(g[static_cast<std::size_t>(i)].size()) != n) throw std::invalid_argument("linear map of wrong size");
    for (int j = 0; j < n; ++j) gm(i, j) = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const auto inv = solve(gm, identity_matrix<Rational>(n));
  if (!inv || rank(gm) < n) throw PreconditionError("linear map is not invertible");
  // {f = 0} is sent to {f g^{-1} = 0}
  std::vector<int> perm;
  for (const auto& f : spec.forms) {
    QMatrix row(1, n);
    for (int j = 0; j < n; ++j) row(0, j) = f[static_cast<std::size_t>(j)];
    const QMatrix image = multiply(row, *inv);
    std::vector<Rational> h(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(j)] = image(0, j);
    int found = -1;
    for (std::size_t k = 0; k < spec.forms.size(); ++k)
      if (proportional(h, std::vector<Rational>(spec.forms[k].begin(), spec.forms[k].begin() + n))) found = static_cast<int>(k);
    if (found < 0) throw PreconditionError("linear map does not preserve the arrangement");
    perm.push_back(found);
  }
  return perm;
}

std::vector<int> flat_permutation(const Arrangement& arr, const std::vector<int>& hyperplanes) {
  std::map<std::vector<int>, int> where;
  for (std::size_t i = 0; i < arr.flats.size(); ++i) where[arr.flats[i]] = static_cast<int>(i);
  std::vector<int> alpha;
  for (const auto& f : arr.flats) {
    std::vector<int> g;
    for (int h : f) g.push_back(hyperplanes[static_cast<std::size_t>(h)]);
    std::sort(g.begin(), g.end());
    auto it = where.find(g);
    if (it == where.end()) throw PreconditionError("hyperplane permutation does not preserve the intersection poset");
    alpha.push_back(it->second);
  }
  return alpha;
}

HatPoset partition_lattice(int n) {
  if (n < 2 || n > 6) throw PreconditionError("partition_lattice needs 2 <= n <= 6");
  using Partition = std::vector<std::vector<int>>;
  // restricted growth strings enumerate set partitions
  std::vector<Partition> parts;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  while (true) {
    const int blocks = *std::max_element(a.begin(), a.end()) + 1;
    Partition p(static_cast<std::size_t>(blocks));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(i + 1);
    std::sort(p.begin(), p.end());
    parts.push_back(p);
    int i = n - 1;
    while (i > 0) {
      const int mx = *std::max_element(a.begin(), a.begin() + i);
      if (a[static_cast<std::size_t>(i)] <= mx) break;
      --i;
    }
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) a[static_cast<std::size_t>(j)] = 0;
  }
  auto id = [](const Partition& p) {
    std::string s;
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (b > 0) s += "|";
      for (int v : p[b]) s += std::to_string(v);
    }
    return s;
  };
  std::vector<std::string> ids;
  for (const auto& p : parts) ids.push_back(id(p));
  std::vector<std::pair<std::string, std::string>> covers;
  for (const auto& p : parts)
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        Partition q;
        for (std::size_t k = 0; k < p.size(); ++k)
          if (k != i && k != j) q.push_back(p[k]);
        std::vector<int> merged = p[i];
        merged.insert(merged.end(), p[j].begin(), p[j].end());
        std::sort(merged.begin(), merged.end());
        q.push_back(merged);
        std::sort(q.begin(), q.end());
        covers.emplace_back(id(p), id(q));
      }
  std::string bottom;
  for (int i = 1; i <= n; ++i) bottom += (i > 1 ? "|" : "") + std::to_string(i);
  return as_hat(build_poset(ids, covers), bottom);
}

}  // namespace stratify
