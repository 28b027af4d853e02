#include "stratify/scalar.hpp"

#include <cctype>

namespace stratify {

namespace {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool is_integer_literal(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Integer parse_integer(const std::string& s) {
  if (!is_integer_literal(s)) throw std::invalid_argument("not an integer: '" + s + "'");
  return Integer(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Ring Ring::prime_field(std::int64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("F_p needs a prime p, got " + std::to_string(p));
  if (p > (std::int64_t{1} << 31)) throw std::invalid_argument("prime too large for F_p arithmetic");
  return {Kind::Fp, p};
}

std::string Ring::name() const {
  switch (kind) {
    case Kind::Z: return "Z";
    case Kind::Q: return "Q";
    case Kind::Fp: return "F" + std::to_string(p);
  }
  return "?";
}

// Accepts "Z", "Q", "Fp" spellings "F5", "F_5", "GF5".
Ring Ring::parse(const std::string& s) {
  if (s == "Z" || s == "ZZ") return integers();
  if (s == "Q" || s == "QQ") return rationals();
  std::string digits;
  if (s.rfind("F_", 0) == 0) digits = s.substr(2);
  else if (s.rfind("GF", 0) == 0) digits = s.substr(2);
  else if (s.rfind("F", 0) == 0) digits = s.substr(1);
  if (digits.empty() || !is_integer_literal(digits) || digits[0] == '-')
    throw std::invalid_argument("unknown ring '" + s + "' (expected Z, Q or Fp)");
  return prime_field(std::stoll(digits));
}

template <>
Integer parse_scalar<Integer>(const std::string& s, const Ring&) {
  return parse_integer(s);
}

template <>
Rational parse_scalar<Rational>(const std::string& s, const Ring&) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  const Integer num = parse_integer(s.substr(0, slash));
  const Integer den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(num, den);
}

template <>
Modular parse_scalar<Modular>(const std::string& s, const Ring& ring) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return ScalarTraits<Modular>::from_integer(parse_integer(s), ring);
  const Modular num = ScalarTraits<Modular>::from_integer(parse_integer(s.substr(0, slash)), ring);
  const Modular den = ScalarTraits<Modular>::from_integer(parse_integer(s.substr(slash + 1)), ring);
  return num / den;
}

}  // namespace stratify
