#include <gtest/gtest.h>

#include <random>

#include "atf/diagram.hpp"
#include "atf/energy.hpp"
#include "atf/moves.hpp"

using namespace atf;

namespace {

Rat q(long n, long d = 1) { return Rat(Int(n), Int(d)); }
QVec2 pt(long x, long y) { return QVec2(IVec2(x, y)); }
PLGerm fibre(long p, long qq, long k, const Rat& a) { return germ_of_fibre(Int(p), Int(qq), k, a); }

IMat2 random_unimodular(std::mt19937& rng, int steps) {
  std::uniform_int_distribution<int> pick(0, 4);
  IMat2 m = IMat2::identity();
  const IMat2 gens[5] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {1, 0, -1, 1}, {0, 1, 1, 0}};
  for (int i = 0; i < steps; ++i) m = m * gens[pick(rng)];
  return m;
}

struct GridGerm {
  long p, q, k;
  Rat a;
  PLGerm g;
};

/// Coprime |q| < p (plus q = 1 at p = 1), k <= max_k, a in {1, 3/2}.
std::vector<GridGerm> grid(long max_p, long max_k) {
  std::vector<GridGerm> out;
  for (long p = 1; p <= max_p; ++p)
    for (long qq = 1 - p; qq <= std::max(p - 1, 1L); ++qq) {
      if (int_gcd(Int(p), Int(qq)) != 1) continue;
      for (long k = 0; k <= max_k; ++k)
        for (const Rat& a : {q(1), q(3, 2)}) out.push_back({p, qq, k, a, fibre(p, qq, k, a)});
    }
  return out;
}

}  // namespace

TEST(GermOfFibre, CliffordChekanovAndPolterovich) {
  EXPECT_EQ(fibre(1, 1, 1, q(5, 2)), PLGerm(q(5, 2), {pt(1, 0), pt(0, 1)}));
  EXPECT_EQ(germ_to_string(fibre(1, 1, 1, q(1))), "1 + min{b1, b2}");
  EXPECT_EQ(fibre(1, 1, 0, q(2)), PLGerm(q(2), {pt(1, 0)}));
  EXPECT_EQ(germ_to_string(fibre(1, 1, 0, q(2))), "2 + b1");
  EXPECT_EQ(fibre(1, 0, 2, q(1)), PLGerm(q(1), {pt(1, 0), pt(1, 2)}));
}

TEST(GermOfFibre, Errors) {
  EXPECT_THROW(fibre(2, 4, 1, q(1)), Error);
  EXPECT_THROW(fibre(0, 1, 1, q(1)), Error);
  EXPECT_THROW(fibre(1, 0, -1, q(1)), Error);
  EXPECT_THROW(fibre(1, 0, 1, q(0)), Error);
}

TEST(GermOfFibre, MatchesTheClosedFormOnRandomPoints) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 17), pp(1, 7), kk(0, 5);
  for (int i = 0; i < 10000; ++i) {
    long p = pp(rng);
    long qq = num(rng) % (p + 1);
    if (int_gcd(Int(p), Int(qq)) != 1) continue;
    long k = kk(rng);
    Rat a = q(1 + std::labs(num(rng)), den(rng));
    QVec2 b(q(num(rng), den(rng)), q(num(rng), den(rng)));
    Rat expected = a + min(b.x, b.x * Rat(1 - k * p * qq) + b.y * Rat(k * p * p));
    EXPECT_EQ(fibre(p, qq, k, a)(b), expected);
  }
}

TEST(GermNormalForm, Examples) {
  EXPECT_EQ(germ_normal_form(fibre(1, 1, 1, q(1))), (GermClass{q(1), 1, Int(1), Int(0)}));
  EXPECT_EQ(germ_normal_form(fibre(2, 1, 1, q(3))), (GermClass{q(3), 1, Int(2), Int(1)}));
  GermClass k0 = germ_normal_form(fibre(5, 2, 0, q(7, 3)));
  EXPECT_EQ(k0.a, q(7, 3));
  EXPECT_EQ(k0.k, 0);
}

TEST(GermNormalForm, RejectsGermsOutsideTheFamily) {
  EXPECT_THROW(germ_normal_form(PLGerm(q(1), {pt(1, 0), pt(0, 1), pt(1, 1)})), Error);
  EXPECT_THROW(germ_normal_form(PLGerm(q(1), {pt(2, 0)})), Error);
  EXPECT_THROW(germ_normal_form(PLGerm(q(1), {QVec2(q(1, 2), q(0))})), Error);
  EXPECT_THROW(germ_normal_form(PLGerm(q(1), {pt(1, 0), pt(3, 0)})), Error);
}

TEST(GermNormalForm, RoundTripsOnTheGrid) {
  for (const auto& e : grid(7, 5)) {
    GermClass c = germ_normal_form(e.g);
    EXPECT_EQ(c.a, e.a);
    EXPECT_EQ(c.k, e.k);
    if (e.k > 0) {
      EXPECT_EQ(c.p, e.p) << e.p << "," << e.q << "," << e.k;
      EXPECT_EQ(c.q_class, q_class_of(Int(e.q), Int(e.p))) << e.p << "," << e.q << "," << e.k;
    }
  }
}

TEST(GermEquivalent, Examples) {
  EXPECT_FALSE(germ_equivalent(fibre(1, 1, 1, q(1)), fibre(1, 1, 2, q(1))).equivalent);
  EXPECT_TRUE(germ_equivalent(fibre(2, 1, 0, q(3)), fibre(5, 2, 0, q(3))).equivalent);
  auto r = germ_equivalent(fibre(1, 1, 1, q(1)), fibre(1, 0, 1, q(1)));
  ASSERT_TRUE(r.equivalent);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(compose(fibre(1, 1, 1, q(1)), *r.witness), fibre(1, 0, 1, q(1)));
  EXPECT_TRUE(brute_force_equiv(fibre(1, 1, 1, q(1)), fibre(1, 0, 1, q(1)), 3));
  // Different base values are never equivalent.
  EXPECT_FALSE(germ_equivalent(fibre(2, 1, 1, q(1)), fibre(2, 1, 1, q(2))).equivalent);
}

TEST(BruteForceEquiv, Examples) {
  PLGerm clifford = fibre(1, 1, 1, q(1));
  EXPECT_EQ(brute_force_equiv(clifford, clifford, 2), IMat2::identity());
  PLGerm swapped = compose(clifford, IMat2{0, 1, 1, 0});
  EXPECT_EQ(swapped, clifford);
  // The identity comes first; the swap is the only other symmetry at this size.
  std::vector<IMat2> syms;
  for (const auto& m : detail::unimodular_table(1)) {
    if (compose(clifford, m) == clifford) syms.push_back(m);
  }
  EXPECT_EQ(syms, (std::vector<IMat2>{IMat2::identity(), IMat2{0, 1, 1, 0}}));
  PLGerm chekanov = fibre(1, 1, 0, q(1));
  for (long bound : {1L, 4L, 8L}) EXPECT_FALSE(brute_force_equiv(clifford, chekanov, bound));
  EXPECT_THROW(brute_force_equiv(clifford, clifford, 0), Error);
}

TEST(GermEquivalent, AgreesWithBruteForceOnTheGrid) {
  auto g = grid(4, 3);
  int beyond_bound = 0;
  for (const auto& x : g) {
    for (const auto& y : g) {
      auto r = germ_equivalent(x.g, y.g);
      auto w = brute_force_equiv(x.g, y.g, kDefaultBruteBound);
      if (w) {
        EXPECT_TRUE(r.equivalent);
        EXPECT_EQ(compose(x.g, *w), y.g);
      }
      if (r.equivalent) {
        ASSERT_TRUE(r.witness);
        EXPECT_EQ(compose(x.g, *r.witness), y.g);
        if (!w) {
          // The exact solver found a witness the bounded search cannot reach.
          EXPECT_GT(max_abs_entry(*r.witness), kDefaultBruteBound);
          ++beyond_bound;
        }
      }
    }
  }
  RecordProperty("witnesses_beyond_bound", beyond_bound);
}

TEST(GermEquivalent, IsAnEquivalenceRelationOnTheGrid) {
  auto g = grid(3, 2);
  auto eq = [](const PLGerm& a, const PLGerm& b) { return germ_equivalent(a, b).equivalent; };
  for (const auto& x : g) {
    EXPECT_TRUE(eq(x.g, x.g));
    for (const auto& y : g) {
      EXPECT_EQ(eq(x.g, y.g), eq(y.g, x.g));
      if (!eq(x.g, y.g)) continue;
      for (const auto& z : g) {
        if (eq(y.g, z.g)) {
          EXPECT_TRUE(eq(x.g, z.g));
        }
      }
    }
  }
}

TEST(GermEquivalent, InvariantUnderRandomUnimodularMaps) {
  std::mt19937 rng(41);
  auto g = grid(5, 3);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int i = 0; i < 100; ++i) {
    const auto& e = g[pick(rng)];
    IMat2 phi = random_unimodular(rng, 8);
    PLGerm moved = compose(e.g, phi);
    auto r = germ_equivalent(e.g, moved);
    ASSERT_TRUE(r.equivalent);
    EXPECT_EQ(compose(e.g, *r.witness), moved);
    EXPECT_TRUE(germ_normal_form(moved).same_invariants(germ_normal_form(e.g)));
  }
}

TEST(ProbeBound, HalfPlaneModelOffTheRay) {
  Diagram dg = bdpq(2, Int(1), Int(1));
  EXPECT_EQ(probe_bound(dg, pt(2, 1), IVec2(1, 0)), q(2));
}

TEST(ProbeBound, HalfPlaneHorizontalProbesGiveTheFirstCoordinate) {
  std::mt19937 rng(43);
  std::uniform_int_distribution<long> num(1, 40), den(1, 7), sgn(-40, 40);
  for (const Diagram& dg : {bdpq(2, Int(1), Int(1)), bdpq(1, Int(3), Int(-1)), bdpq(3, Int(2), Int(1))}) {
    int checked = 0;
    while (checked < 30) {
      QVec2 y(q(num(rng), den(rng)), q(sgn(rng), den(rng)));
      if (det(QVec2(dg.bdpq.ray()), y).is_zero()) continue;
      EXPECT_EQ(probe_bound(dg, y, IVec2(1, 0)), y.x) << y;
      ++checked;
    }
  }
}

TEST(ProbeBound, QuadrantAndRectangle) {
  Diagram quad = quadrant(q(20));
  EXPECT_EQ(probe_bound(quad, QVec2(q(3, 2), q(5)), IVec2(1, 0)), q(3, 2));
  EXPECT_EQ(probe_bound(quad, QVec2(q(3, 2), q(5)), IVec2(0, 1)), q(5));
  EXPECT_EQ(best_probe_bound(quad, pt(1, 2), 5), q(1));
  Diagram rect = rectangle(q(4), q(1));
  EXPECT_FALSE(probe_bound(rect, QVec2(q(3), q(1, 2)), IVec2(1, 0)));
  EXPECT_EQ(probe_bound(rect, QVec2(q(1), q(1, 2)), IVec2(1, 0)), q(1));
  EXPECT_FALSE(best_probe_bound(rectangle(q(1), q(1)), QVec2(q(1, 2), q(1, 2)), 5));
}

TEST(ProbeBound, QuadrantBestBoundIsTheSmallerCoordinate) {
  std::mt19937 rng(47);
  std::uniform_int_distribution<long> num(1, 60), den(1, 6);
  Diagram quad = quadrant(q(100));
  for (int i = 0; i < 25; ++i) {
    QVec2 x(q(num(rng), den(rng)), q(num(rng), den(rng)));
    EXPECT_EQ(best_probe_bound(quad, x, 3), min(x.x, x.y)) << x;
  }
}

TEST(ProbeBound, Errors) {
  Diagram quad = quadrant(q(10));
  EXPECT_THROW(probe_bound(quad, pt(1, 1), IVec2(2, 0)), Error);
  EXPECT_THROW(probe_bound(quad, pt(-1, 1), IVec2(1, 0)), Error);
  try {
    probe_bound(rectangle(q(4), q(4)), pt(1, 2), IVec2(1, 2));
    ADD_FAILURE() << "expected NotIntegrallyTransversal";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotIntegrallyTransversal);
  }
  EXPECT_THROW(best_probe_bound(quad, pt(1, 1), 0), Error);
}

TEST(EnergyAt, Examples) {
  Diagram dg = bdpq(2, Int(1), Int(1));
  auto e = energy_at(dg, pt(2, 1), 0);
  ASSERT_TRUE(std::holds_alternative<Exact>(e));
  EXPECT_EQ(std::get<Exact>(e).value, q(2));
  // On the ray the energy is left open.
  EXPECT_TRUE(std::holds_alternative<Unknown>(energy_at(dg, pt(1, 1), 1)));
  EXPECT_FALSE(std::holds_alternative<Exact>(energy_at(dg, QVec2(q(3, 2), q(3, 2)), 0)));
  EXPECT_EQ(to_string(energy_at(dg, pt(2, 1), 0)), "exact 2");
}

TEST(EnergyAt, MovingHalfUsesTheInverseShearRow) {
  for (long d = 1; d <= 3; ++d)
    for (long p = 1; p <= 4; ++p)
      for (long qq = -p; qq <= p; ++qq) {
        if (int_gcd(Int(p), Int(qq)) != 1) continue;
        Diagram dg = bdpq(d, Int(p), Int(qq));
        for (long k = 0; k <= d; ++k) {
          // A point strictly on the moving side of R, far enough right.
          QVec2 y(q(10 * p), q(10 * qq - 1));
          ASSERT_GT(det(QVec2(IVec2(-p, -qq)), y).sign(), 0);
          QVec2 x = unflip(dg.bdpq, y, k);
          if (x.x.sign() <= 0) continue;
          auto e = energy_at(dg, y, k);
          ASSERT_TRUE(std::holds_alternative<Exact>(e));
          EXPECT_EQ(std::get<Exact>(e).value, y.x * Rat(1 - k * p * qq) + y.y * Rat(k * p * p));
        }
      }
}

TEST(EnergyAt, AgreesWithTheFibreGermNearTheCrease) {
  std::mt19937 rng(53);
  std::uniform_int_distribution<long> num(-30, 30), den(4000, 9000);
  for (long p = 1; p <= 4; ++p)
    for (long qq = -p; qq <= p; ++qq) {
      if (int_gcd(Int(p), Int(qq)) != 1) continue;
      for (long k = 0; k <= 3; ++k) {
        Diagram dg = bdpq(3, Int(p), Int(qq));
        for (const Rat& a : {q(1), q(3, 2)}) {
          QVec2 xa = fibre_point(dg.bdpq, a);
          PLGerm g = fibre(p, qq, k, a);
          for (int i = 0; i < 20; ++i) {
            QVec2 b(q(num(rng), den(rng)), q(num(rng), den(rng)));
            if (det(QVec2(dg.bdpq.ray()), b).is_zero()) continue;
            auto e = energy_at(dg, xa + b, k);
            ASSERT_TRUE(std::holds_alternative<Exact>(e));
            EXPECT_EQ(std::get<Exact>(e).value, g(b));
          }
        }
      }
    }
}

TEST(EnergyAt, InvariantUnderNodalSlides) {
  Diagram dg = bdpq(2, Int(2), Int(1));
  auto [slid, rec] = nodal_slide(dg, 0, 1, q(5));
  for (const QVec2& y : {pt(3, 1), pt(1, 3), QVec2(q(7, 2), q(1, 3)), pt(9, -4)}) {
    for (long k = 0; k <= 2; ++k) {
      if (unflip(dg.bdpq, y, k).x.sign() <= 0) continue;
      auto a = energy_at(dg, y, k), b = energy_at(slid, y, k);
      ASSERT_TRUE(std::holds_alternative<Exact>(a));
      EXPECT_EQ(std::get<Exact>(a).value, std::get<Exact>(b).value);
    }
  }
}

TEST(EnergyAt, Errors) {
  Diagram dg = bdpq(2, Int(1), Int(1));
  EXPECT_THROW(energy_at(dg, pt(-1, 0), 0), Error);
  EXPECT_THROW(energy_at(dg, pt(2, 1), 3), Error);
  EXPECT_THROW(energy_at(cp2(q(3)), pt(1, 1), 0), Error);
  EXPECT_THROW(energy_at(bdpq(2, Int(1), Int(1), CutSide::Inward), pt(2, 1), 1), Error);
}

TEST(GermAt, FibreGermOnTheRayAndLinearOffIt) {
  Diagram dg = bdpq(2, Int(2), Int(1));
  auto [g, cls] = germ_at(dg, pt(4, 2), 2);
  EXPECT_EQ(g, fibre(2, 1, 2, q(4)));
  EXPECT_EQ(cls, (GermClass{q(4), 2, Int(2), Int(1)}));
  auto [off, off_cls] = germ_at(dg, pt(4, 1), 2);
  EXPECT_EQ(off.gradients.size(), 1u);
  EXPECT_EQ(off_cls.k, 0);
  auto [quad, quad_cls] = germ_at(quadrant(q(10)), pt(2, 2), 0);
  EXPECT_EQ(quad, fibre(1, 1, 1, q(2)));
  EXPECT_EQ(quad_cls.k, 1);
  EXPECT_THROW(germ_at(cp2(q(3)), pt(1, 1), 0), Error);
}

TEST(GermAt, MatchesTheEnergyFieldNearby) {
  Diagram dg = bdpq(2, Int(3), Int(1));
  for (long k = 0; k <= 2; ++k) {
    for (const QVec2& y : {pt(6, 2), pt(7, 5), pt(7, -3)}) {
      if (unflip(dg.bdpq, y, k).x.sign() <= 0) continue;
      auto [g, cls] = germ_at(dg, y, k);
      for (const QVec2& b : {QVec2(q(1, 50), q(1, 70)), QVec2(q(-1, 60), q(1, 40)), QVec2(q(1, 45), q(-1, 33))}) {
        if (det(QVec2(dg.bdpq.ray()), y + b).is_zero()) continue;
        auto e = energy_at(dg, y + b, k);
        ASSERT_TRUE(std::holds_alternative<Exact>(e));
        EXPECT_EQ(std::get<Exact>(e).value, g(b)) << y << " k=" << k;
      }
    }
  }
}
