// Exact scalar types used as Eigen coefficients: arbitrary-precision integers,
// rationals, and elements of a prime field F_p.
#ifndef STRATIFY_SCALAR_HPP
#define STRATIFY_SCALAR_HPP

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

namespace stratify {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Element of F_p. The modulus travels with the value; a modulus of 0 marks an
/// "unbound" small integer literal (what Eigen produces for Scalar(0) or
/// Scalar(1)), which adopts the modulus of the first bound operand it meets.
class Modular {
 public:
  Modular() = default;
  Modular(int v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Modular(std::int64_t v, std::int64_t p) : value_(v), modulus_(p) { normalize(); }

  std::int64_t value() const { return value_; }
  std::int64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  Modular inverse() const;

  friend Modular operator+(Modular a, const Modular& b) { return a += b; }
  friend Modular operator-(Modular a, const Modular& b) { return a -= b; }
  friend Modular operator*(Modular a, const Modular& b) { return a *= b; }
  friend Modular operator/(Modular a, const Modular& b) { return a *= b.inverse(); }
  Modular operator-() const { return Modular(-value_, modulus_, raw_tag{}); }

  Modular& operator+=(const Modular& o) {
    bind(o);
    value_ += o.reduced(modulus_);
    normalize();
    return *this;
  }
  Modular& operator-=(const Modular& o) {
    bind(o);
    value_ -= o.reduced(modulus_);
    normalize();
    return *this;
  }
  Modular& operator*=(const Modular& o) {
    bind(o);
    if (modulus_ == 0) {
      value_ *= o.value_;
    } else {
      value_ = static_cast<std::int64_t>(
          (static_cast<__int128>(value_) * o.reduced(modulus_)) % modulus_);
    }
    normalize();
    return *this;
  }
  Modular& operator/=(const Modular& o) { return *this *= o.inverse(); }

  friend bool operator==(const Modular& a, const Modular& b) {
    const std::int64_t p = a.modulus_ != 0 ? a.modulus_ : b.modulus_;
    return a.reduced(p) == b.reduced(p);
  }
  friend bool operator!=(const Modular& a, const Modular& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Modular& m) {
    return os << m.value_;
  }

 private:
  struct raw_tag {};
  Modular(std::int64_t v, std::int64_t p, raw_tag) : value_(v), modulus_(p) { normalize(); }

  std::int64_t reduced(std::int64_t p) const {
    if (p == 0) return value_;
    std::int64_t r = value_ % p;
    return r < 0 ? r + p : r;
  }
  void bind(const Modular& o) {
    if (o.modulus_ == 0) return;
    if (modulus_ == 0) {
      modulus_ = o.modulus_;
      normalize();
    } else if (modulus_ != o.modulus_) {
      throw std::logic_error("Modular: mixing different prime moduli");
    }
  }
  void normalize() {
    if (modulus_ != 0) {
      value_ %= modulus_;
      if (value_ < 0) value_ += modulus_;
    }
  }

  std::int64_t value_ = 0;
  std::int64_t modulus_ = 0;
};

inline Modular Modular::inverse() const {
  if (modulus_ == 0) {
    if (value_ == 1 || value_ == -1) return *this;
    throw std::logic_error("Modular: inverse of an unbound value");
  }
  if (value_ == 0) throw std::domain_error("Modular: division by zero");
  // extended Euclid
  std::int64_t a = value_, m = modulus_, x0 = 1, x1 = 0;
  while (m != 0) {
    std::int64_t q = a / m;
    std::int64_t t = a - q * m;
    a = m;
    m = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  return Modular(x0, modulus_);
}

// --- coefficient rings ------------------------------------------------------

/// Runtime description of the coefficient ring K.
struct Ring {
  enum class Kind { Z, Q, Fp };
  Kind kind = Kind::Z;
  std::int64_t p = 0;

  static Ring integers() { return {Kind::Z, 0}; }
  static Ring rationals() { return {Kind::Q, 0}; }
  static Ring prime_field(std::int64_t p);

  bool is_field() const { return kind != Kind::Z; }
  std::string name() const;
  static Ring parse(const std::string& s);

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.kind == b.kind && a.p == b.p;
  }
  friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }
};

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Integer> {
  static constexpr bool is_field = false;
  static Integer from_integer(const Integer& v, const Ring&) { return v; }
  static bool compatible(const Ring& r) { return r.kind == Ring::Kind::Z; }
  static std::string to_string(const Integer& v) { return v.str(); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_field = true;
  static Rational from_integer(const Integer& v, const Ring&) { return Rational(v); }
  static bool compatible(const Ring& r) { return r.kind == Ring::Kind::Q; }
  static std::string to_string(const Rational& v) { return v.str(); }
};

template <>
struct ScalarTraits<Modular> {
  static constexpr bool is_field = true;
  static Modular from_integer(const Integer& v, const Ring& r) {
    Integer m = v % r.p;
    if (m < 0) m += r.p;
    return Modular(m.convert_to<std::int64_t>(), r.p);
  }
  static bool compatible(const Ring& r) { return r.kind == Ring::Kind::Fp; }
  static std::string to_string(const Modular& v) { return std::to_string(v.value()); }
};

template <class Scalar>
inline constexpr bool is_field_v = ScalarTraits<Scalar>::is_field;

template <class Scalar>
bool is_zero(const Scalar& s) {
  if constexpr (std::is_same_v<Scalar, Modular>) {
    return s.is_zero();
  } else {
    return s == 0;
  }
}

/// Parses "12", "-3" and (for rationals) "3/4".
template <class Scalar>
Scalar parse_scalar(const std::string& s, const Ring& ring);
template <>
Integer parse_scalar<Integer>(const std::string& s, const Ring& ring);
template <>
Rational parse_scalar<Rational>(const std::string& s, const Ring& ring);
template <>
Modular parse_scalar<Modular>(const std::string& s, const Ring& ring);

}  // namespace stratify

namespace Eigen {
template <>
struct NumTraits<stratify::Modular> : GenericNumTraits<stratify::Modular> {
  typedef stratify::Modular Real;
  typedef stratify::Modular NonInteger;
  typedef stratify::Modular Nested;
  typedef stratify::Modular Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

#endif  // STRATIFY_SCALAR_HPP
