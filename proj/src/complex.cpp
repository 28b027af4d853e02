#include "stratify/complex.hpp"

namespace stratify {

std::vector<Integer> normalize_torsion(const std::vector<Integer>& orders) {
  if (orders.empty()) return {};
  const Index n = static_cast<Index>(orders.size());
  IntMatrix m = zero_matrix<Integer>(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = orders[static_cast<std::size_t>(i)];
  std::vector<Integer> out;
  for (const Integer& f : invariant_factors(m))
    if (f > 1) out.push_back(f);
  return out;
}

std::string GradedModule::to_string() const {
  std::ostringstream os;
  bool first = true;
  os << "{";
  for (const auto& [n, p] : degrees) {
    if (!first) os << ", ";
    first = false;
    os << n << ": ";
    std::string sep;
    if (p.rank > 0 || p.torsion.empty()) {
      os << "K^" << p.rank;
      sep = " + ";
    }
    for (const auto& t : p.torsion) {
      os << sep << "Z/" << t;
      sep = " + ";
    }
  }
  os << "}";
  return os.str();
}

}  // namespace stratify
