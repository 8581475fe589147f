#pragma once

// Lattice and integral-affine geometry kernel in the plane.
//
// Conventions:
//   det(a, b) = a.x * b.y - a.y * b.x
//   rot(a)    = (-a.y, a.x)   (counterclockwise quarter turn)
//   The "left" side of a direction v is {y : det(v, y) > 0}.

#include <ostream>
#include <utility>

#include "atf/errors.hpp"
#include "atf/rational.hpp"

namespace atf {

struct IVec2 {
  Int x;
  Int y;

  IVec2() = default;
  IVec2(Int x_, Int y_) : x(std::move(x_)), y(std::move(y_)) {}
  template <std::integral T>
  IVec2(T x_, T y_) : x(static_cast<long>(x_)), y(static_cast<long>(y_)) {}

  bool is_zero() const { return x == 0 && y == 0; }
  bool is_primitive() const { return !is_zero() && int_gcd(x, y) == 1; }

  friend IVec2 operator+(const IVec2& a, const IVec2& b) { return {Int(a.x + b.x), Int(a.y + b.y)}; }
  friend IVec2 operator-(const IVec2& a, const IVec2& b) { return {Int(a.x - b.x), Int(a.y - b.y)}; }
  friend IVec2 operator-(const IVec2& a) { return {Int(-a.x), Int(-a.y)}; }
  friend IVec2 operator*(const Int& k, const IVec2& a) { return {Int(k * a.x), Int(k * a.y)}; }
  friend bool operator==(const IVec2& a, const IVec2& b) { return a.x == b.x && a.y == b.y; }
  friend std::ostream& operator<<(std::ostream& os, const IVec2& v) {
    return os << "(" << v.x.get_str() << ", " << v.y.get_str() << ")";
  }
};

struct QVec2 {
  Rat x;
  Rat y;

  QVec2() = default;
  QVec2(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {}
  QVec2(const IVec2& v) : x(v.x), y(v.y) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return x.is_zero() && y.is_zero(); }

  friend QVec2 operator+(const QVec2& a, const QVec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend QVec2 operator-(const QVec2& a, const QVec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend QVec2 operator-(const QVec2& a) { return {-a.x, -a.y}; }
  friend QVec2 operator*(const Rat& k, const QVec2& a) { return {k * a.x, k * a.y}; }
  friend bool operator==(const QVec2& a, const QVec2& b) { return a.x == b.x && a.y == b.y; }
  /// Lexicographic; used only for canonical orderings.
  friend bool operator<(const QVec2& a, const QVec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
  friend std::ostream& operator<<(std::ostream& os, const QVec2& v) {
    return os << "(" << v.x << ", " << v.y << ")";
  }
};

inline Int det(const IVec2& a, const IVec2& b) { return a.x * b.y - a.y * b.x; }
inline Rat det(const QVec2& a, const QVec2& b) { return a.x * b.y - a.y * b.x; }
inline Int dot(const IVec2& a, const IVec2& b) { return a.x * b.x + a.y * b.y; }
inline Rat dot(const QVec2& a, const QVec2& b) { return a.x * b.x + a.y * b.y; }
inline IVec2 rot(const IVec2& a) { return {Int(-a.y), a.x}; }
inline QVec2 rot(const QVec2& a) { return {-a.y, a.x}; }

/// Row-major 2x2 integer matrix [[a, b], [c, d]].
struct IMat2 {
  Int a, b, c, d;

  static IMat2 identity() { return {Int(1), Int(0), Int(0), Int(1)}; }

  Int determinant() const { return a * d - b * c; }
  bool is_unimodular() const {
    Int dt = determinant();
    return dt == 1 || dt == -1;
  }
  IMat2 transpose() const { return {a, c, b, d}; }

  /// Inverse of a unimodular matrix (adjugate divided by +-1).
  IMat2 unimodular_inverse() const {
    Int dt = determinant();
    if (dt != 1 && dt != -1) throw Error(ErrorCode::BadParams, "matrix is not unimodular");
    return {Int(d * dt), Int(-b * dt), Int(-c * dt), Int(a * dt)};
  }

  IVec2 operator*(const IVec2& v) const { return {Int(a * v.x + b * v.y), Int(c * v.x + d * v.y)}; }
  QVec2 operator*(const QVec2& v) const {
    return {Rat(a) * v.x + Rat(b) * v.y, Rat(c) * v.x + Rat(d) * v.y};
  }
  IMat2 operator*(const IMat2& o) const {
    return {Int(a * o.a + b * o.c), Int(a * o.b + b * o.d), Int(c * o.a + d * o.c),
            Int(c * o.b + d * o.d)};
  }
  friend bool operator==(const IMat2& l, const IMat2& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
  }
  friend std::ostream& operator<<(std::ostream& os, const IMat2& m) {
    return os << "[[" << m.a.get_str() << ", " << m.b.get_str() << "], [" << m.c.get_str() << ", "
              << m.d.get_str() << "]]";
  }
};

inline IMat2 power(IMat2 m, unsigned long e) {
  IMat2 r = IMat2::identity();
  while (e > 0) {
    if (e & 1UL) r = r * m;
    m = m * m;
    e >>= 1;
  }
  return r;
}

/// Closed half-plane {x : <x, normal> + offset >= 0}.
struct HalfPlane {
  IVec2 normal;
  Rat offset;

  Rat evaluate(const QVec2& x) const { return dot(x, QVec2(normal)) + offset; }
  bool contains(const QVec2& x) const { return evaluate(x).sign() >= 0; }
  bool contains_strictly(const QVec2& x) const { return evaluate(x).sign() > 0; }
};

struct PrimitiveDecomposition {
  IVec2 direction;  // primitive
  Rat length;       // > 0
};

/// Writes w = length * direction with a primitive integer direction.
inline PrimitiveDecomposition primitive_decompose(const QVec2& w) {
  if (w.is_zero()) throw Error(ErrorCode::ZeroVector, "cannot decompose the zero vector");
  Int l = int_lcm(w.x.den(), w.y.den());
  Int ix = w.x.num() * (l / w.x.den());
  Int iy = w.y.num() * (l / w.y.den());
  Int g = int_gcd(ix, iy);
  return {IVec2(Int(ix / g), Int(iy / g)), Rat(g, l)};
}

inline IVec2 primitive_direction(const QVec2& w) { return primitive_decompose(w).direction; }

/// Integral affine length of the segment [p, q].
inline Rat affine_length(const QVec2& p, const QVec2& q) {
  if (p == q) throw Error(ErrorCode::ZeroVector, "degenerate segment");
  return primitive_decompose(q - p).length;
}

/// Matrix of x -> x + k det(x, v) v. Unimodular with eigenvector v; k may be negative
/// (the inverse shear has weight -k).
inline IMat2 shear_matrix(const IVec2& v, const Int& k) {
  return {Int(1 + k * v.x * v.y), Int(-k * v.x * v.x), Int(k * v.y * v.y), Int(1 - k * v.x * v.y)};
}

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

/// Which side of the directed line (anchor, v) the point lies on; 0 for on the line.
inline int side_sign(const IVec2& v, const QVec2& anchor, const QVec2& x) {
  return det(QVec2(v), x - anchor).sign();
}

/// Shears the closed `moving` half-plane of the line through `anchor` along v by weight k,
/// and fixes the other half. Continuous, fixes the eigenline pointwise.
inline QVec2 half_shear(const IVec2& v, const Int& k, const QVec2& anchor, const QVec2& x,
                        Side moving) {
  QVec2 y = x - anchor;
  int s = det(QVec2(v), y).sign();
  bool moves = moving == Side::Left ? s >= 0 : s <= 0;
  if (!moves) return x;
  QVec2 vq(v);
  return anchor + y + (Rat(k) * det(y, vq)) * vq;
}

/// The piecewise-linear change-of-cut map: shears {det(v, x - anchor) >= 0} by weight k.
inline QVec2 piecewise_shear(const IVec2& v, const Int& k, const QVec2& anchor, const QVec2& x) {
  return half_shear(v, k, anchor, x, Side::Left);
}

/// Inverse of piecewise_shear: each half-plane is preserved, so invert on the moving half.
inline QVec2 piecewise_shear_inverse(const IVec2& v, const Int& k, const QVec2& anchor,
                                     const QVec2& x) {
  return half_shear(v, Int(-k), anchor, x, Side::Left);
}

/// Any integer vector completing primitive u to a positively oriented basis: det(u, w) = 1.
inline IVec2 complete_basis(const IVec2& u) {
  if (!u.is_primitive()) throw Error(ErrorCode::BadParams, "vector is not primitive");
  // s*u.x + t*u.y = 1  =>  det(u, (-t, s)) = u.x*s + u.y*t = 1
  ExtGcd e = int_ext_gcd(u.x, u.y);
  return {Int(-e.t), e.s};
}

}  // namespace atf
