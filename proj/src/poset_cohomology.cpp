#include "stratify/poset_cohomology.hpp"

namespace stratify {

ChainBasis chain_basis(const Poset& p, int x) {
  ChainBasis b;
  b.top = x;
  if (x == kHat) b.by_length[0].push_back({});
  else b.by_length = chains_ending_at(p, x);
  for (const auto& [n, cs] : b.by_length)
    for (std::size_t i = 0; i < cs.size(); ++i) b.position[cs[i]] = static_cast<Index>(i);
  return b;
}

IntMatrix coboundary_matrix(const Poset& p, const ChainBasis& b, int n) {
  IntMatrix m = zero_matrix<Integer>(b.count(n + 1), b.count(n));
  const auto& source = b.chains(n);
  for (std::size_t j = 0; j < source.size(); ++j) {
    const Chain& c = source[j];
    // insert y between x_{i-1} and x_i (x_0 = bottom), sign (-1)^{i-1}
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int sign = (i % 2 == 0) ? 1 : -1;
      for (int y = 0; y < p.size(); ++y) {
        if (!p.less(y, c[i])) continue;
        if (i > 0 && !p.less(c[i - 1], y)) continue;
        Chain t = c;
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), y);
        m(b.index_of(t), static_cast<Index>(j)) += sign;
      }
    }
  }
  return m;
}

IntMatrix boundary_matrix(const Poset& p, const ChainBasis& b, int n) {
  (void)p;
  IntMatrix m = zero_matrix<Integer>(b.count(n - 1), b.count(n));
  const auto& source = b.chains(n);
  for (std::size_t j = 0; j < source.size(); ++j) {
    const Chain& c = source[j];
    // delete interior x_i, i = 1..n-1, sign (-1)^{i-1}
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      Chain t = c;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
      m(b.index_of(t), static_cast<Index>(j)) += (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

IntMatrix b_cohomological_matrix(const ChainBasis& bx, const ChainBasis& by, int y, int n) {
  IntMatrix m = zero_matrix<Integer>(by.count(n + 1), bx.count(n));
  const auto& source = bx.chains(n);
  const int sign = (n % 2 == 0) ? 1 : -1;
  for (std::size_t j = 0; j < source.size(); ++j) {
    Chain t = source[j];
    t.push_back(y);
    m(by.index_of(t), static_cast<Index>(j)) = sign;
  }
  return m;
}

IntMatrix b_homological_matrix(const ChainBasis& bx, const ChainBasis& by, int x, int n) {
  (void)x;
  IntMatrix m = zero_matrix<Integer>(bx.count(n), by.count(n + 1));
  const auto& target = bx.chains(n);
  const int sign = (n % 2 == 0) ? 1 : -1;
  for (std::size_t i = 0; i < target.size(); ++i) {
    Chain t = target[i];
    t.push_back(by.top);
    m(static_cast<Index>(i), by.index_of(t)) = sign;
  }
  return m;
}

IntMatrix contraction_matrix(const ChainBasis& b, int least, int n) {
  IntMatrix m = zero_matrix<Integer>(b.count(n + 1), b.count(n));
  const auto& source = b.chains(n);
  for (std::size_t j = 0; j < source.size(); ++j) {
    const Chain& c = source[j];
    if (c.front() == least) continue;
    Chain t = c;
    t.insert(t.begin(), least);
    m(b.index_of(t), static_cast<Index>(j)) = 1;
  }
  return m;
}

IntMatrix transport_matrix(const ChainBasis& bp, const ChainBasis& bq, const std::vector<int>& alpha, int n) {
  IntMatrix m = zero_matrix<Integer>(bp.count(n), bq.count(n));
  const auto& chains = bp.chains(n);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    Chain t;
    for (int v : chains[i]) t.push_back(alpha[static_cast<std::size_t>(v)]);
    m(static_cast<Index>(i), bq.index_of(t)) = 1;
  }
  return m;
}

std::string chain_to_string(const Poset& p, const Chain& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out += "<";
    out += p.id(c[i]);
  }
  return out + "]";
}

}  // namespace stratify
