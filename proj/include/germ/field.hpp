#ifndef GERM_FIELD_HPP
#define GERM_FIELD_HPP

// Exact coefficient fields: arbitrary-precision rationals and prime fields.
//
// A field is a small policy object with a nested `value_type` and the
// factory functions zero(), one(), from_int(), parse() and format(). Series
// and normal-form code is templated on the policy, so mixing characteristic
// zero and characteristic p is a compile-time error, while mixing two
// different primes is caught at run time (FieldMismatch).

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "germ/error.hpp"

namespace germ {

using BigInt = boost::multiprecision::cpp_int;

/// Rational number in lowest terms with positive denominator; zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    if (denominator < 0) {
      value_ = boost::multiprecision::cpp_rational(-numerator, -denominator);
    } else {
      value_ = boost::multiprecision::cpp_rational(numerator, denominator);
    }
  }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  Rational inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0");
    Rational out;
    out.value_ = 1 / value_;
    return out;
  }

  double to_double() const { return value_.convert_to<double>(); }
  long double to_long_double() const {
    // cpp_rational -> long double is not provided directly; go through the
    // integer parts, which are exact for the magnitudes used here.
    return numerator().convert_to<long double>() / denominator().convert_to<long double>();
  }

  /// "n" for integers, "n/d" otherwise.
  std::string to_string() const {
    if (denominator() == 1) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  /// Accepts "n", "-n", "n/d", "-n/d" (ASCII digits, d > 0).
  static Rational parse(std::string_view text, std::size_t offset = 0);

  Rational operator-() const {
    Rational out;
    out.value_ = -value_;
    return out;
  }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by 0");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  boost::multiprecision::cpp_rational value_;
};

namespace detail {

inline BigInt parse_digits(std::string_view text, std::size_t offset) {
  if (text.empty()) throw ParseError(offset, "expected digits");
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw ParseError(offset + i, std::string("unexpected character '") + text[i] + "'");
    }
  }
  return BigInt(std::string(text));
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text, std::size_t offset) {
  bool negative = false;
  std::size_t start = 0;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    start = 1;
  }
  const auto slash = text.find('/', start);
  BigInt num = detail::parse_digits(text.substr(start, slash - start), offset + start);
  BigInt den = 1;
  if (slash != std::string_view::npos) {
    den = detail::parse_digits(text.substr(slash + 1), offset + slash + 1);
    if (den == 0) throw ParseError(offset + slash + 1, "zero denominator");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

inline Rational inv(const Rational& a) { return a.inverse(); }
inline bool is_zero(const Rational& a) { return a.is_zero(); }

/// Deterministic trial division; adequate for the supported range p < 2^31.
constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Element of F_p stored as its least nonnegative residue.
class ModInt {
 public:
  ModInt(std::uint64_t residue, std::uint32_t modulus)
      : residue_(static_cast<std::uint32_t>(residue % modulus)), modulus_(modulus) {}

  std::uint32_t residue() const noexcept { return residue_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return residue_ == 0; }

  /// Inverse by the extended Euclidean algorithm.
  ModInt inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0 mod " + std::to_string(modulus_));
    std::int64_t old_r = residue_, r = modulus_;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
      const std::int64_t q = old_r / r;
      std::tie(old_r, r) = std::pair(r, old_r - q * r);
      std::tie(old_s, s) = std::pair(s, old_s - q * s);
    }
    std::int64_t m = modulus_;
    return ModInt(static_cast<std::uint64_t>(((old_s % m) + m) % m), modulus_);
  }

  ModInt pow(std::uint64_t e) const {
    std::uint64_t base = residue_, acc = 1 % modulus_;
    while (e > 0) {
      if (e & 1U) acc = acc * base % modulus_;
      base = base * base % modulus_;
      e >>= 1U;
    }
    return ModInt(acc, modulus_);
  }

  /// "t mod p".
  std::string to_string() const { return std::to_string(residue_) + " mod " + std::to_string(modulus_); }

  ModInt operator-() const { return ModInt(residue_ == 0 ? 0 : modulus_ - residue_, modulus_); }
  ModInt& operator+=(const ModInt& o) {
    check(o);
    residue_ = static_cast<std::uint32_t>((std::uint64_t{residue_} + o.residue_) % modulus_);
    return *this;
  }
  ModInt& operator-=(const ModInt& o) {
    check(o);
    residue_ = static_cast<std::uint32_t>((std::uint64_t{residue_} + modulus_ - o.residue_) % modulus_);
    return *this;
  }
  ModInt& operator*=(const ModInt& o) {
    check(o);
    residue_ = static_cast<std::uint32_t>(std::uint64_t{residue_} * o.residue_ % modulus_);
    return *this;
  }
  ModInt& operator/=(const ModInt& o) {
    check(o);
    return *this *= o.inverse();
  }

  friend ModInt operator+(ModInt a, const ModInt& b) { return a += b; }
  friend ModInt operator-(ModInt a, const ModInt& b) { return a -= b; }
  friend ModInt operator*(ModInt a, const ModInt& b) { return a *= b; }
  friend ModInt operator/(ModInt a, const ModInt& b) { return a /= b; }

  friend bool operator==(const ModInt& a, const ModInt& b) {
    a.check(b);
    return a.residue_ == b.residue_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ModInt& a) { return os << a.to_string(); }

 private:
  void check(const ModInt& o) const {
    if (modulus_ != o.modulus_) {
      throw Error(ErrorKind::FieldMismatch,
                  "F_" + std::to_string(modulus_) + " vs F_" + std::to_string(o.modulus_));
    }
  }

  std::uint32_t residue_;
  std::uint32_t modulus_;
};

inline ModInt inv(const ModInt& a) { return a.inverse(); }
inline bool is_zero(const ModInt& a) { return a.is_zero(); }

/// Inverse via Fermat's little theorem, a^(p-2). Independent of inverse().
inline ModInt inv_by_power(const ModInt& a) {
  if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0");
  return a.pow(a.modulus() - 2);
}

/// The field of rationals.
struct Rationals {
  using value_type = Rational;

  static constexpr std::uint32_t characteristic() { return 0; }
  Rational zero() const { return {}; }
  Rational one() const { return Rational(1); }
  Rational from_int(long long v) const { return Rational(v); }
  Rational parse(std::string_view text, std::size_t offset = 0) const { return Rational::parse(text, offset); }
  std::string format(const Rational& v) const { return v.to_string(); }
  std::string name() const { return "Q"; }

  friend bool operator==(const Rationals&, const Rationals&) { return true; }
};

/// The prime field F_p for prime p < 2^31.
class PrimeField {
 public:
  using value_type = ModInt;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p >= (std::uint64_t{1} << 31U)) {
      throw Error(ErrorKind::InvalidPrime, std::to_string(p) + " is outside the supported range p < 2^31");
    }
    if (!is_prime(p)) throw Error(ErrorKind::InvalidPrime, std::to_string(p) + " is not prime");
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t prime() const { return p_; }
  ModInt zero() const { return ModInt(0, p_); }
  ModInt one() const { return ModInt(1, p_); }
  ModInt from_int(long long v) const {
    const long long m = p_;
    return ModInt(static_cast<std::uint64_t>(((v % m) + m) % m), p_);
  }

  /// Plain integer literal (optionally negative), reduced mod p.
  ModInt parse(std::string_view text, std::size_t offset = 0) const {
    bool negative = false;
    std::size_t start = 0;
    if (!text.empty() && text.front() == '-') {
      negative = true;
      start = 1;
    }
    const BigInt magnitude = detail::parse_digits(text.substr(start), offset + start);
    const auto residue = static_cast<std::uint64_t>(magnitude % p_);
    const ModInt v(residue, p_);
    return negative ? -v : v;
  }

  /// Plain residue; this is the input form, so series text round-trips.
  std::string format(const ModInt& v) const { return std::to_string(v.residue()); }
  std::string name() const { return "Fp:" + std::to_string(p_); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

/// Runtime selection between the two coefficient regimes.
using FieldDescriptor = std::variant<Rationals, PrimeField>;

/// Accepts "Q" or "Fp:<p>".
inline FieldDescriptor parse_field(std::string_view text) {
  if (text == "Q") return Rationals{};
  if (text.starts_with("Fp:")) {
    const BigInt p = detail::parse_digits(text.substr(3), 3);
    if (p >= (BigInt(1) << 31)) throw Error(ErrorKind::InvalidPrime, p.str() + " is outside the supported range");
    return PrimeField(p.convert_to<std::uint64_t>());
  }
  throw ParseError(0, "field must be 'Q' or 'Fp:<prime>'");
}

inline std::string field_name(const FieldDescriptor& field) {
  return std::visit([](const auto& f) { return f.name(); }, field);
}

}  // namespace germ

#endif  // GERM_FIELD_HPP
