#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <set>

#include "atf/diagram.hpp"
#include "atf/moves.hpp"
#include "atf/walker.hpp"

using namespace atf;

namespace {

Rat q(long n, long d = 1) { return Rat(Int(n), Int(d)); }
QVec2 pt(long x, long y) { return QVec2(IVec2(x, y)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Parse;
}

/// Markov tree by Vieta jumping: each entry c of (a, b, c) becomes 3ab - c.
std::vector<std::vector<Triple>> vieta_levels(std::size_t depth) {
  std::vector<std::vector<Triple>> out{{Triple{Int(1), Int(1), Int(1)}}};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Triple> next;
    for (const auto& t : out.back()) {
      for (int i = 0; i < 3; ++i) {
        Triple c = t;
        c[i] = 3 * t[(i + 1) % 3] * t[(i + 2) % 3] - t[i];
        next.push_back(sorted_triple(c));
      }
    }
    std::sort(next.begin(), next.end());
    out.push_back(std::move(next));
  }
  return out;
}

/// Two corners sharing the vertex (1,1) at the clockwise end of edge 2.
Diagram shared_vertex() {
  Diagram dg;
  dg.vertices = {pt(0, 0), pt(2, 0), pt(1, 1), pt(0, 1)};
  dg = nodal_trade(nodal_trade(dg, 0), 2);
  return change_branch_cut(dg, 0);
}

}  // namespace

TEST(Prepare, TradesEveryDelzantVertex) {
  Diagram dg = prepare(cp2(q(3)));
  ASSERT_EQ(dg.corners.size(), 3u);
  EXPECT_TRUE(validate(dg).empty());
  for (std::size_t i = 0; i < 3; ++i) {
    CornerType t = corner_type(dg, i);
    EXPECT_EQ(t.d, 1);
    EXPECT_EQ(t.p, 1);
  }
  EXPECT_EQ(prepare(dg), dg);
}

TEST(Prepare, Errors) {
  Diagram bad;
  bad.vertices = {pt(0, 0), pt(2, 0), pt(0, 1)};
  EXPECT_EQ(code_of([&] { prepare(bad); }), ErrorCode::NonDelzantBareVertex);
  EXPECT_EQ(code_of([&] { prepare(bdpq(1, Int(1), Int(0))); }), ErrorCode::UnsupportedRegion);
}

TEST(Step, BottomEdgeOfTheTriangleGrows) {
  Diagram dg = prepare(cp2(q(3)));
  WalkState st = start_walk(dg, 0);
  auto r = step(st, 0);
  EXPECT_GT(r.record.ell, edge_length(dg, 0));
  EXPECT_EQ(r.record.ell, q(6));
  EXPECT_EQ(r.record.label, 0u);
  EXPECT_FALSE(r.merged);
}

TEST(Step, TwoCornerVertexKeepsTheLength) {
  Diagram dg = shared_vertex();
  ASSERT_EQ(dg.vertex(2), pt(1, 1));
  ASSERT_EQ(corners_at(dg, pt(1, 1)).size(), 2u);
  WalkState st = start_walk(dg, 2);
  auto r = step(st, 0);
  EXPECT_EQ(r.record.ell, edge_length(dg, 2));
}

TEST(Step, Errors) {
  Diagram dg = prepare(cp2(q(3)));
  EXPECT_EQ(code_of([&] { start_walk(dg, 3); }), ErrorCode::BadEdge);
  EXPECT_EQ(code_of([&] { walker_corner(dg, 7); }), ErrorCode::BadEdge);
  EXPECT_EQ(code_of([&] { walker_corner(shared_vertex(), 0); }), ErrorCode::NoCornerAtEdge);
}

TEST(Walk, ZeroStepsGiveAnEmptyTrace) {
  WalkTrace tr = walk(prepare(cp2(q(3))), 0, 0);
  EXPECT_TRUE(tr.steps.empty());
  EXPECT_EQ(tr.final_diagram, tr.initial);
}

TEST(Walk, ProjectivePlaneFollowsTheMarkovPathWithAOne) {
  WalkTrace tr = walk(prepare(cp2(q(3))), 0, 10);
  ASSERT_EQ(tr.steps.size(), 10u);
  std::vector<Int> expected{Int(1), Int(1)};
  while (expected.size() < 10) expected.push_back(3 * expected.back() - expected[expected.size() - 2]);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(tr.steps[i].corner_type.p, expected[i]) << "step " << i;
    EXPECT_EQ(tr.steps[i].corner_type.d, 1);
  }
}

TEST(Walk, LengthAndDiagnosticsAreMonotoneAndBounded) {
  for (const Diagram& start : {prepare(cp2(q(3))), prepare(rectangle(q(3), q(2))), prepare(cp2(q(7, 2)))}) {
    for (std::size_t e = 0; e < start.vertices.size(); ++e) {
      WalkTrace tr = walk(start, e, 15);
      Rat prev = tr.initial_ell;
      Rat prev_a;
      bool grew = false;
      for (const auto& s : tr.steps) {
        EXPECT_GE(s.ell, prev);
        grew = grew || s.ell > prev;
        EXPECT_LE(s.ell, tr.boundary_length);
        EXPECT_GE(s.a_n, prev_a);
        EXPECT_GE(s.a_n, s.ell - tr.initial_ell);
        prev = s.ell;
        prev_a = s.a_n;
      }
      EXPECT_TRUE(grew);
    }
  }
}

TEST(Walk, AreaAndLabelsAreConstant) {
  Diagram start = prepare(rectangle(q(3), q(2)));
  WalkState st = start_walk(start, 0);
  std::set<std::size_t> labels(st.labels.begin(), st.labels.end());
  for (std::size_t n = 0; n < 12; ++n) {
    auto r = step(st, n);
    EXPECT_EQ(area(st.dg), area(start));
    EXPECT_TRUE(validate(st.dg).empty());
    EXPECT_TRUE(labels.count(r.record.label));
    EXPECT_EQ(std::set<std::size_t>(st.labels.begin(), st.labels.end()), labels);
  }
}

TEST(Walk, MutatedPValuesGrowOnTheProjectivePlane) {
  WalkTrace tr = walk(prepare(cp2(q(3))), 0, 15);
  Int prev(0);
  for (const auto& s : tr.steps) {
    EXPECT_GE(s.corner_type.p, prev);
    prev = s.corner_type.p;
  }
  EXPECT_GT(prev, 100);
}

TEST(Walk, DigestsAreStableAndDistinguishSteps) {
  WalkTrace a = walk(prepare(cp2(q(3))), 0, 6);
  WalkTrace b = walk(prepare(cp2(q(3))), 0, 6);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a.steps[i].digest, b.steps[i].digest);
    EXPECT_EQ(a.steps[i].digest.size(), 16u);
    seen.insert(a.steps[i].digest);
  }
  EXPECT_EQ(seen.size(), 6u);
  Diagram dg = prepare(cp2(q(3)));
  Diagram rotated = dg;
  std::rotate(rotated.vertices.begin(), rotated.vertices.begin() + 1, rotated.vertices.end());
  EXPECT_EQ(diagram_digest(rotated), diagram_digest(dg));
}

TEST(TwoCornerReport, ProjectivePlaneAlternates) {
  WalkTrace tr = walk(prepare(cp2(q(3))), 0, 12);
  TwoCornerReport r = two_corner_report(tr, 8);
  EXPECT_TRUE(r.eventually_two_labels);
  ASSERT_TRUE(r.from_step);
  EXPECT_LE(*r.from_step, 4u);
  EXPECT_EQ(r.labels.size(), 2u);
}

TEST(TwoCornerReport, ShortTraceIsInsufficient) {
  WalkTrace tr = walk(prepare(cp2(q(3))), 0, 1);
  EXPECT_EQ(code_of([&] { two_corner_report(tr); }), ErrorCode::InsufficientData);
}

TEST(TwoCornerReport, RectangleIsRecorded) {
  WalkTrace tr = walk(prepare(rectangle(q(3), q(2))), 0, 12);
  TwoCornerReport r = two_corner_report(tr, 8);
  RecordProperty("rectangle_two_labels", r.eventually_two_labels ? "true" : "false");
  if (r.eventually_two_labels) {
    EXPECT_EQ(r.labels.size(), 2u);
  }
}

TEST(MarkovTree, MatchesVietaJumping) {
  const auto vieta = vieta_levels(4);
  auto start = std::chrono::steady_clock::now();
  MarkovNode root = markov_tree(q(3), 4);
  auto ours = triples_by_depth(root);
  std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  ASSERT_EQ(ours.size(), vieta.size());
  for (std::size_t d = 0; d < vieta.size(); ++d) {
    EXPECT_EQ(ours[d], vieta[d]) << "depth " << d;
    for (const auto& t : ours[d]) EXPECT_TRUE(is_markov(t));
  }
  EXPECT_LT(took.count(), 10.0);
}

TEST(MarkovTree, SmallDepths) {
  auto d0 = triples_by_depth(markov_tree(q(3), 0));
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_EQ(d0[0], (std::vector<Triple>{Triple{Int(1), Int(1), Int(1)}}));
  auto d2 = triples_by_depth(markov_tree(q(3), 2));
  const std::set<Triple> allowed{{Int(1), Int(1), Int(1)}, {Int(1), Int(1), Int(2)}, {Int(1), Int(2), Int(5)}};
  for (const auto& level : d2) {
    for (const auto& t : level) EXPECT_TRUE(allowed.count(t));
  }
  EXPECT_FALSE(is_markov({Int(1), Int(2), Int(3)}));
  EXPECT_TRUE(is_markov({Int(2), Int(5), Int(29)}));
}
