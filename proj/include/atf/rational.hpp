#pragma once

// Exact scalars: arbitrary-precision integers and rationals in lowest terms.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "atf/errors.hpp"

namespace atf {

using Int = mpz_class;

inline Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

/// Floor division remainder, always in [0, |m|).
inline Int int_mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), int_abs(m).get_mpz_t());
  return r;
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
struct ExtGcd {
  Int g, s, t;
};

inline ExtGcd int_ext_gcd(const Int& a, const Int& b) {
  ExtGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::optional<std::int64_t> int_to_i64(const Int& a) {
  if (!a.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(a.get_si());
}

inline Int parse_int(std::string_view s) {
  Int v;
  std::string str(s);
  if (str.empty() || v.set_str(str, 10) != 0) {
    throw Error(ErrorCode::Parse, "not an integer: '" + str + "'");
  }
  return v;
}

/// Exact rational number. Always canonical: lowest terms, positive denominator.
class Rat {
 public:
  Rat() = default;
  template <std::integral T>
  Rat(T v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rat(const Int& n) : v_(n) {}            // NOLINT(google-explicit-constructor)
  Rat(const Int& num, const Int& den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  /// Parses "num/den" or "num".
  static Rat parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rat(parse_int(s));
    return Rat(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }

  Int num() const { return v_.get_num(); }
  Int den() const { return v_.get_den(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// "num/den", or "num" when the denominator is 1.
  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }

  Rat abs() const { return sign() < 0 ? -*this : *this; }

  Int floor() const {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
  }

  /// Fixed-point decimal with exactly `digits` fractional digits, rounded half away from zero.
  std::string to_fixed(unsigned digits) const {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Int n = int_abs(num()) * scale * 2 + den();
    Int d = den() * 2;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    std::string s = q.get_str();
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string out = sign() < 0 && q != 0 ? "-" : "";
    out += s.substr(0, s.size() - digits);
    if (digits > 0) out += "." + s.substr(s.size() - digits);
    return out;
  }

  Rat operator-() const {
    Rat r;
    r.v_ = -v_;
    return r;
  }
  Rat& operator+=(const Rat& o) {
    v_ += o.v_;
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    v_ -= o.v_;
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    v_ *= o.v_;
    return *this;
  }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace atf
