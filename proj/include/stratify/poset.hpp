// Finite posets given by their Hasse diagrams.
#ifndef STRATIFY_POSET_HPP
#define STRATIFY_POSET_HPP

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stratify {

class PosetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Elements are kept sorted by identifier, so index order is identifier order.
class Poset {
 public:
  Poset() = default;

  int size() const { return static_cast<int>(ids_.size()); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& elements() const { return ids_; }
  const std::string& id(int i) const { return ids_[static_cast<std::size_t>(i)]; }
  std::optional<int> find(const std::string& id) const;
  int index(const std::string& id) const;  // throws PosetError

  bool less(int x, int y) const { return lt_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] != 0; }
  bool leq(int x, int y) const { return x == y || less(x, y); }
  bool comparable(int x, int y) const { return leq(x, y) || leq(y, x); }
  bool covers(int x, int y) const;  // x is covered by y
  const std::vector<int>& upper_covers(int x) const { return up_[static_cast<std::size_t>(x)]; }
  const std::vector<int>& lower_covers(int x) const { return down_[static_cast<std::size_t>(x)]; }
  std::vector<std::pair<int, int>> cover_pairs() const;

  std::vector<int> below(int x) const;  // strictly below, ascending index
  std::vector<int> above(int x) const;
  std::vector<int> between(int x, int y) const;  // open interval
  std::vector<int> minimal() const;
  std::vector<int> maximal() const;
  std::optional<int> least() const;

  /// Induced subposet on the given indices.
  Poset induced(const std::vector<int>& subset) const;
  /// Elements ordered so that x < y implies x comes first; ties by identifier.
  std::vector<int> linear_extension() const;

  /// Covers recomputed from the strict order (transitive reduction).
  std::vector<std::pair<int, int>> reduction() const;

  friend Poset build_poset(std::vector<std::string> elements,
                           const std::vector<std::pair<std::string, std::string>>& covers);

 private:
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> up_, down_;
  std::vector<std::vector<char>> lt_;
};

/// Validates and builds; rejects unknown endpoints, cycles and redundant covers.
Poset build_poset(std::vector<std::string> elements,
                  const std::vector<std::pair<std::string, std::string>>& covers);

/// Builds from a strict order relation given as pairs (not necessarily covers).
Poset poset_from_relation(std::vector<std::string> elements,
                          const std::vector<std::pair<std::string, std::string>>& relations);

Poset open_interval(const Poset& p, const std::string& x, const std::string& y);
Poset strict_down_set(const Poset& p, const std::string& x);

/// A poset with a least element 0 (the open stratum in the stratified setting).
struct HatPoset {
  Poset full;  // includes the bottom
  int bottom = 0;

  const std::string& bottom_id() const { return full.id(bottom); }
  /// The strata poset without the bottom.
  Poset strata() const;
};

inline constexpr const char* kDefaultBottom = "X0";

/// Adjoins a new least element below every element of p.
HatPoset adjoin_bottom(const Poset& p, const std::string& bottom = kDefaultBottom);
/// Wraps a poset that already has the given element as least element.
HatPoset as_hat(const Poset& full, const std::string& bottom);

/// rk with rk(0)=0 and rk(y)=rk(x)+1 on covers; nullopt when not graded.
std::optional<std::vector<int>> rank_function(const HatPoset& ph);

/// Strictly increasing level map with sigma(0)=0: the rank function when
/// graded, positions along the identifier-ordered linear extension otherwise.
std::vector<int> default_sigma(const HatPoset& ph);

bool is_strictly_increasing(const Poset& p, const std::vector<int>& sigma);

using Chain = std::vector<int>;

/// Strict chains [x_1 < ... < x_n = x], grouped by n, each group sorted
/// lexicographically.
std::map<int, std::vector<Chain>> chains_ending_at(const Poset& p, int x);
/// All strict chains with at least one element, grouped by length.
std::map<int, std::vector<Chain>> all_chains(const Poset& p);

/// Checks that alpha (index map p -> q) is an order isomorphism.
bool is_isomorphism(const Poset& p, const Poset& q, const std::vector<int>& alpha);
/// Index map from an identifier map; throws when an id is unknown.
std::vector<int> index_map(const Poset& p, const Poset& q, const std::map<std::string, std::string>& alpha);

/// Seeded random poset on at most max_size elements (identifiers "a", "b", ...
/// assigned in a random order). With `least`, one element lies below all
/// others.
Poset random_poset(std::mt19937_64& rng, int max_size, bool least = false, double density = 0.35);

// Standard examples.
Poset chain_poset(int n);                   // a < b < c ...
Poset antichain_poset(int n);
Poset boolean_lattice(int n, bool with_bottom = true);  // subsets of {1..n}

}  // namespace stratify

#endif  // STRATIFY_POSET_HPP
