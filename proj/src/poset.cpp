#include "stratify/poset.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace stratify {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> elements) {
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
    throw PosetError("duplicate element identifier");
  return elements;
}

}  // namespace

std::optional<int> Poset::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Poset::index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw PosetError("unknown element '" + id + "'");
  return it->second;
}

bool Poset::covers(int x, int y) const {
  const auto& u = up_[static_cast<std::size_t>(x)];
  return std::find(u.begin(), u.end(), y) != u.end();
}

std::vector<std::pair<int, int>> Poset::cover_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < size(); ++x)
    for (int y : upper_covers(x)) out.emplace_back(x, y);
  return out;
}

std::vector<int> Poset::below(int x) const {
  std::vector<int> out;
  for (int y = 0; y < size(); ++y)
    if (less(y, x)) out.push_back(y);
  return out;
}

std::vector<int> Poset::above(int x) const {
  std::vector<int> out;
  for (int y = 0; y < size(); ++y)
    if (less(x, y)) out.push_back(y);
  return out;
}

std::vector<int> Poset::between(int x, int y) const {
  std::vector<int> out;
  for (int z = 0; z < size(); ++z)
    if (less(x, z) && less(z, y)) out.push_back(z);
  return out;
}

std::vector<int> Poset::minimal() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x)
    if (lower_covers(x).empty()) out.push_back(x);
  return out;
}

std::vector<int> Poset::maximal() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x)
    if (upper_covers(x).empty()) out.push_back(x);
  return out;
}

std::optional<int> Poset::least() const {
  const auto m = minimal();
  if (m.size() != 1) return std::nullopt;
  for (int y = 0; y < size(); ++y)
    if (!leq(m[0], y)) return std::nullopt;
  return m[0];
}

Poset Poset::induced(const std::vector<int>& subset) const {
  std::vector<std::string> ids;
  for (int i : subset) ids.push_back(id(i));
  std::vector<std::pair<std::string, std::string>> rel;
  for (int a : subset)
    for (int b : subset)
      if (less(a, b)) rel.emplace_back(id(a), id(b));
  return poset_from_relation(ids, rel);
}

std::vector<int> Poset::linear_extension() const {
  std::vector<int> order;
  std::vector<int> missing(static_cast<std::size_t>(size()));
  std::set<int> ready;
  for (int x = 0; x < size(); ++x) {
    missing[static_cast<std::size_t>(x)] = static_cast<int>(lower_covers(x).size());
    if (missing[static_cast<std::size_t>(x)] == 0) ready.insert(x);
  }
  while (!ready.empty()) {
    const int x = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(x);
    for (int y : upper_covers(x))
      if (--missing[static_cast<std::size_t>(y)] == 0) ready.insert(y);
  }
  return order;
}

std::vector<std::pair<int, int>> Poset::reduction() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < size(); ++x)
    for (int y = 0; y < size(); ++y)
      if (less(x, y) && between(x, y).empty()) out.emplace_back(x, y);
  return out;
}

Poset build_poset(std::vector<std::string> elements,
                  const std::vector<std::pair<std::string, std::string>>& covers) {
  Poset p;
  p.ids_ = sorted_unique(std::move(elements));
  const std::size_t n = p.ids_.size();
  for (std::size_t i = 0; i < n; ++i) p.index_[p.ids_[i]] = static_cast<int>(i);
  p.up_.assign(n, {});
  p.down_.assign(n, {});
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : covers) {
    const int x = p.index(a), y = p.index(b);
    if (x == y) throw PosetError("cycle detected: '" + a + "' covers itself");
    if (!seen.insert({x, y}).second) throw PosetError("duplicate cover (" + a + ", " + b + ")");
    p.up_[static_cast<std::size_t>(x)].push_back(y);
    p.down_[static_cast<std::size_t>(y)].push_back(x);
  }
  for (auto& v : p.up_) std::sort(v.begin(), v.end());
  for (auto& v : p.down_) std::sort(v.begin(), v.end());

  // cycle detection via Kahn's algorithm
  if (p.linear_extension().size() != n) throw PosetError("cycle detected in cover relation");

  p.lt_.assign(n, std::vector<char>(n, 0));
  const std::vector<int> order = p.linear_extension();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int x = *it;
    auto& row = p.lt_[static_cast<std::size_t>(x)];
    for (int y : p.up_[static_cast<std::size_t>(x)]) {
      row[static_cast<std::size_t>(y)] = 1;
      const auto& ry = p.lt_[static_cast<std::size_t>(y)];
      for (std::size_t z = 0; z < n; ++z)
        if (ry[z]) row[z] = 1;
    }
  }
  for (const auto& [x, y] : seen)
    if (!p.between(x, y).empty())
      throw PosetError("redundant cover (" + p.id(x) + ", " + p.id(y) + "): implied through '" +
                       p.id(p.between(x, y).front()) + "'");
  return p;
}

Poset poset_from_relation(std::vector<std::string> elements,
                          const std::vector<std::pair<std::string, std::string>>& relations) {
  elements = sorted_unique(std::move(elements));
  const std::size_t n = elements.size();
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < n; ++i) idx[elements[i]] = static_cast<int>(i);
  std::vector<std::vector<char>> lt(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : relations) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end() || ib == idx.end()) throw PosetError("unknown element in relation");
    lt[static_cast<std::size_t>(ia->second)][static_cast<std::size_t>(ib->second)] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (lt[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (lt[k][j]) lt[i][j] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (lt[i][i]) throw PosetError("cycle detected in relation");
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!lt[i][j]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (lt[i][k] && lt[k][j]) cover = false;
      if (cover) covers.emplace_back(elements[i], elements[j]);
    }
  return build_poset(elements, covers);
}

Poset open_interval(const Poset& p, const std::string& x, const std::string& y) {
  const int a = p.index(x), b = p.index(y);
  if (!p.less(a, b)) throw PosetError("open_interval: '" + x + "' is not below '" + y + "'");
  return p.induced(p.between(a, b));
}

Poset strict_down_set(const Poset& p, const std::string& x) {
  return p.induced(p.below(p.index(x)));
}

Poset HatPoset::strata() const {
  std::vector<int> rest;
  for (int i = 0; i < full.size(); ++i)
    if (i != bottom) rest.push_back(i);
  return full.induced(rest);
}

HatPoset adjoin_bottom(const Poset& p, const std::string& bottom) {
  if (p.find(bottom)) throw PosetError("bottom identifier '" + bottom + "' already used");
  std::vector<std::string> ids = p.elements();
  ids.push_back(bottom);
  std::vector<std::pair<std::string, std::string>> covers;
  for (auto [x, y] : p.cover_pairs()) covers.emplace_back(p.id(x), p.id(y));
  for (int m : p.minimal()) covers.emplace_back(bottom, p.id(m));
  HatPoset h;
  h.full = build_poset(ids, covers);
  h.bottom = h.full.index(bottom);
  return h;
}

HatPoset as_hat(const Poset& full, const std::string& bottom) {
  const int b = full.index(bottom);
  for (int y = 0; y < full.size(); ++y)
    if (!full.leq(b, y)) throw PosetError("'" + bottom + "' is not the least element");
  return HatPoset{full, b};
}

std::optional<std::vector<int>> rank_function(const HatPoset& ph) {
  const Poset& p = ph.full;
  std::vector<int> rk(static_cast<std::size_t>(p.size()), -1);
  rk[static_cast<std::size_t>(ph.bottom)] = 0;
  for (int x : p.linear_extension()) {
    for (int y : p.lower_covers(x)) {
      const int r = rk[static_cast<std::size_t>(y)] + 1;
      int& cur = rk[static_cast<std::size_t>(x)];
      if (cur < 0) cur = r;
      else if (cur != r) return std::nullopt;
    }
  }
  return rk;
}

std::vector<int> default_sigma(const HatPoset& ph) {
  if (auto rk = rank_function(ph)) return *rk;
  std::vector<int> sigma(static_cast<std::size_t>(ph.full.size()), 0);
  int pos = 0;
  for (int x : ph.full.linear_extension()) sigma[static_cast<std::size_t>(x)] = pos++;
  return sigma;
}

bool is_strictly_increasing(const Poset& p, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != p.size()) return false;
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      if (p.less(x, y) && sigma[static_cast<std::size_t>(x)] >= sigma[static_cast<std::size_t>(y)]) return false;
  return true;
}

std::map<int, std::vector<Chain>> chains_ending_at(const Poset& p, int x) {
  std::map<int, std::vector<Chain>> out;
  // extend downward: chains are built top-first then reversed
  std::function<void(Chain&)> grow = [&](Chain& rev) {
    Chain c(rev.rbegin(), rev.rend());
    out[static_cast<int>(c.size())].push_back(std::move(c));
    for (int y : p.below(rev.back())) {
      rev.push_back(y);
      grow(rev);
      rev.pop_back();
    }
  };
  Chain start{x};
  grow(start);
  for (auto& [n, cs] : out) std::sort(cs.begin(), cs.end());
  return out;
}

std::map<int, std::vector<Chain>> all_chains(const Poset& p) {
  std::map<int, std::vector<Chain>> out;
  for (int x = 0; x < p.size(); ++x)
    for (auto& [n, cs] : chains_ending_at(p, x))
      out[n].insert(out[n].end(), cs.begin(), cs.end());
  for (auto& [n, cs] : out) std::sort(cs.begin(), cs.end());
  return out;
}

bool is_isomorphism(const Poset& p, const Poset& q, const std::vector<int>& alpha) {
  if (p.size() != q.size() || static_cast<int>(alpha.size()) != p.size()) return false;
  std::vector<char> hit(static_cast<std::size_t>(q.size()), 0);
  for (int a : alpha) {
    if (a < 0 || a >= q.size() || hit[static_cast<std::size_t>(a)]) return false;
    hit[static_cast<std::size_t>(a)] = 1;
  }
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      if (p.less(x, y) != q.less(alpha[static_cast<std::size_t>(x)], alpha[static_cast<std::size_t>(y)])) return false;
  return true;
}

std::vector<int> index_map(const Poset& p, const Poset& q, const std::map<std::string, std::string>& alpha) {
  std::vector<int> out(static_cast<std::size_t>(p.size()), -1);
  for (const auto& [a, b] : alpha) out[static_cast<std::size_t>(p.index(a))] = q.index(b);
  for (int v : out)
    if (v < 0) throw PosetError("map is not defined on every element");
  return out;
}

Poset random_poset(std::mt19937_64& rng, int max_size, bool least, double density) {
  std::uniform_int_distribution<int> size_dist(least ? 2 : 1, std::max(least ? 2 : 1, max_size));
  const int n = size_dist(rng);
  std::bernoulli_distribution edge(density);
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i;
  std::shuffle(label.begin(), label.end(), rng);
  auto name = [&](int i) { return std::string(1, static_cast<char>('a' + label[static_cast<std::size_t>(i)])); };
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back(name(i));
  std::vector<std::pair<std::string, std::string>> rel;
  // position 0 plays the least element when requested
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((least && i == 0) || edge(rng)) rel.emplace_back(name(i), name(j));
  return poset_from_relation(ids, rel);
}

Poset chain_poset(int n) {
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> covers;
  for (int i = 0; i < n; ++i) {
    ids.emplace_back(1, static_cast<char>('a' + i));
    if (i > 0) covers.emplace_back(ids[static_cast<std::size_t>(i - 1)], ids.back());
  }
  return build_poset(ids, covers);
}

Poset antichain_poset(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.emplace_back(1, static_cast<char>('a' + i));
  return build_poset(ids, {});
}

Poset boolean_lattice(int n, bool with_bottom) {
  auto name = [n](unsigned s) {
    std::string out = "{";
    for (int i = 0; i < n; ++i)
      if (s & (1u << i)) {
        if (out.size() > 1) out += ",";
        out += std::to_string(i + 1);
      }
    return out + "}";
  };
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> covers;
  for (unsigned s = with_bottom ? 0u : 1u; s < (1u << n); ++s) {
    ids.push_back(name(s));
    for (int i = 0; i < n; ++i)
      if (!(s & (1u << i)) && (with_bottom || s != 0)) covers.emplace_back(name(s), name(s | (1u << i)));
  }
  return build_poset(ids, covers);
}

}  // namespace stratify
