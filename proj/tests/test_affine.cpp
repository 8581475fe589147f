#include <gtest/gtest.h>

#include <random>

#include "atf/affine.hpp"
#include "atf/rational.hpp"

using namespace atf;

namespace {

Rat q(long n, long d = 1) { return Rat(Int(n), Int(d)); }

IMat2 random_unimodular(std::mt19937& rng, int steps) {
  // Product of elementary matrices; entries stay small for few steps.
  std::uniform_int_distribution<int> pick(0, 3);
  IMat2 m = IMat2::identity();
  const IMat2 gens[4] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 0}};
  for (int i = 0; i < steps; ++i) m = m * gens[pick(rng)];
  return m;
}

Int max_entry(const IMat2& m) {
  Int r = int_abs(m.a);
  for (const Int* e : {&m.b, &m.c, &m.d}) r = std::max(r, int_abs(*e));
  return r;
}

}  // namespace

TEST(Rational, ParsesAndPrintsCanonically) {
  EXPECT_EQ(Rat::parse("6/4").str(), "3/2");
  EXPECT_EQ(Rat::parse("-3").str(), "-3");
  EXPECT_EQ(Rat::parse("0/5").str(), "0");
  EXPECT_THROW(Rat::parse("1/0"), Error);
  EXPECT_THROW(Rat::parse("abc"), Error);
  EXPECT_EQ(q(1, 3).to_fixed(4), "0.3333");
  EXPECT_EQ(q(-7, 2).floor(), -4);
}

TEST(Rational, GcdHelpers) {
  EXPECT_EQ(int_gcd(Int(-12), Int(18)), 6);
  EXPECT_EQ(int_mod(Int(-7), Int(5)), 3);
  auto e = int_ext_gcd(Int(240), Int(46));
  EXPECT_EQ(e.s * 240 + e.t * 46, 2);
}

TEST(PrimitiveDecompose, Examples) {
  auto a = primitive_decompose(QVec2(IVec2(0, 1)));
  EXPECT_EQ(a.direction, IVec2(0, 1));
  EXPECT_EQ(a.length, 1);
  auto b = primitive_decompose(QVec2(IVec2(2, 4)));
  EXPECT_EQ(b.direction, IVec2(1, 2));
  EXPECT_EQ(b.length, 2);
  auto c = primitive_decompose(QVec2(q(1, 2), 0));
  EXPECT_EQ(c.direction, IVec2(1, 0));
  EXPECT_EQ(c.length, q(1, 2));
  EXPECT_THROW(primitive_decompose(QVec2()), Error);
}

TEST(PrimitiveDecompose, RoundTripsOnRandomVectors) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 12);
  for (int i = 0; i < 500; ++i) {
    QVec2 w(q(num(rng), den(rng)), q(num(rng), den(rng)));
    if (w.is_zero()) continue;
    auto d = primitive_decompose(w);
    EXPECT_TRUE(d.direction.is_primitive());
    EXPECT_GT(d.length, 0);
    EXPECT_EQ(d.length * QVec2(d.direction), w);
  }
}

TEST(AffineLength, Examples) {
  EXPECT_EQ(affine_length(QVec2(), QVec2(IVec2(3, 0))), 3);
  EXPECT_EQ(affine_length(QVec2(), QVec2(IVec2(2, 4))), 2);
  EXPECT_EQ(affine_length(QVec2(), QVec2(q(1, 2), q(1, 2))), q(1, 2));
  EXPECT_THROW(affine_length(QVec2(), QVec2()), Error);
}

TEST(AffineLength, InvariantUnderUnimodularMapsAndTranslations) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> coord(-20, 20), den(1, 6);
  int checked = 0;
  while (checked < 300) {
    IMat2 m = random_unimodular(rng, 6);
    if (max_entry(m) > 20) continue;
    QVec2 a(q(coord(rng), den(rng)), q(coord(rng), den(rng)));
    QVec2 b(q(coord(rng), den(rng)), q(coord(rng), den(rng)));
    QVec2 t(q(coord(rng), den(rng)), q(coord(rng), den(rng)));
    if (a == b) continue;
    EXPECT_EQ(affine_length(m * a + t, m * b + t), affine_length(a, b));
    ++checked;
  }
}

TEST(ShearMatrix, MatchesClosedFormForFibreDirections) {
  for (long p = 1; p <= 5; ++p) {
    for (long qq = -p; qq <= p; ++qq) {
      for (long k = 0; k <= 4; ++k) {
        IMat2 s = shear_matrix(IVec2(-p, -qq), Int(k));
        IMat2 expected{Int(k * p * qq + 1), Int(-k * p * p), Int(k * qq * qq), Int(1 - k * p * qq)};
        EXPECT_EQ(s, expected);
      }
    }
  }
}

TEST(ShearMatrix, Examples) {
  EXPECT_EQ(shear_matrix(IVec2(3, -2), Int(0)), IMat2::identity());
  EXPECT_EQ(shear_matrix(IVec2(0, 1), Int(2)), (IMat2{1, 0, 2, 1}));
  EXPECT_EQ(shear_matrix(IVec2(0, 1), Int(2)), power(shear_matrix(IVec2(0, 1), Int(1)), 2));
}

TEST(ShearMatrix, UnimodularPowersFixingTheEigenvector) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> coord(-9, 9);
  int checked = 0;
  while (checked < 100) {
    IVec2 v(coord(rng), coord(rng));
    if (!v.is_primitive()) continue;
    for (long k = 0; k <= 6; ++k) {
      IMat2 s = shear_matrix(v, Int(k));
      EXPECT_EQ(s.determinant(), 1);
      EXPECT_EQ(s * v, v);
      EXPECT_EQ(s, power(shear_matrix(v, Int(1)), static_cast<unsigned long>(k)));
    }
    ++checked;
  }
}

TEST(HalfShear, Examples) {
  const IVec2 v(-1, -1);
  EXPECT_EQ(half_shear(v, Int(1), QVec2(), QVec2(IVec2(1, 0)), Side::Left), QVec2(IVec2(2, 1)));
  EXPECT_EQ(shear_matrix(v, Int(1)) * IVec2(1, 0), IVec2(2, 1));
  EXPECT_EQ(half_shear(v, Int(1), QVec2(), QVec2(IVec2(0, 1)), Side::Left), QVec2(IVec2(0, 1)));
  EXPECT_EQ(half_shear(v, Int(0), QVec2(), QVec2(q(5, 3), q(-2, 7)), Side::Left), QVec2(q(5, 3), q(-2, 7)));
}

TEST(HalfShear, MatrixOnMovingSideIdentityOnFixedSideAndInvertible) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> coord(-7, 7), den(1, 5), kd(-4, 4);
  int checked = 0;
  while (checked < 400) {
    IVec2 v(coord(rng), coord(rng));
    if (!v.is_primitive()) continue;
    Int k(kd(rng));
    QVec2 anchor(q(coord(rng), den(rng)), q(coord(rng), den(rng)));
    QVec2 x(q(coord(rng), den(rng)), q(coord(rng), den(rng)));
    int s = side_sign(v, anchor, x);
    QVec2 y = piecewise_shear(v, k, anchor, x);
    if (s >= 0) {
      EXPECT_EQ(y, anchor + shear_matrix(v, k) * (x - anchor));
    } else {
      EXPECT_EQ(y, x);
    }
    EXPECT_EQ(piecewise_shear_inverse(v, k, anchor, y), x);
    // The right-moving form is undone by the opposite weight.
    QVec2 z = half_shear(v, k, anchor, x, Side::Right);
    EXPECT_EQ(half_shear(v, Int(-k), anchor, z, Side::Right), x);
    ++checked;
  }
}

TEST(CompleteBasis, PositivelyOrientedUnimodular) {
  for (long a = -8; a <= 8; ++a) {
    for (long b = -8; b <= 8; ++b) {
      IVec2 u(a, b);
      if (!u.is_primitive()) {
        if (!u.is_zero()) {
          EXPECT_THROW(complete_basis(u), Error);
        }
        continue;
      }
      EXPECT_EQ(det(u, complete_basis(u)), 1);
    }
  }
}

TEST(IMat2Ops, InverseAndTranspose) {
  IMat2 m{2, 1, 1, 1};
  EXPECT_EQ(m * m.unimodular_inverse(), IMat2::identity());
  EXPECT_EQ(m.transpose().transpose(), m);
  EXPECT_THROW((IMat2{2, 0, 0, 1}).unimodular_inverse(), Error);
}
