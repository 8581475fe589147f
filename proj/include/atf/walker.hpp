#pragma once

// Edge stretching: repeated mutation at the corner on the clockwise end of a fixed edge,
// with its diagnostics, plus the mutation tree of the projective plane triangle.
//
// Orientation: boundaries run counterclockwise, so edge i goes from vertex i to vertex
// i + 1 with the interior on its left. Traversed with the interior on the right it runs
// from vertex i + 1 to vertex i, so the clockwise end is vertex i (the left end of a
// bottom edge).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "atf/affine.hpp"
#include "atf/diagram.hpp"
#include "atf/errors.hpp"
#include "atf/moves.hpp"
#include "atf/rational.hpp"

namespace atf {

/// Sets every corner's nodes to the default ladder, given the other cuts as they are.
inline Diagram shrink_cuts(const Diagram& dg) {
  Diagram out = dg;
  for (std::size_t i = 0; i < out.corners.size(); ++i) {
    Corner& c = out.corners[i];
    Rat eps = default_epsilon(out, c.anchor, c.eigendirection, c.multiplicity(), i);
    c.nodes = detail::ladder(eps, c.multiplicity());
  }
  return out;
}

/// Trades every bare Delzant vertex and shrinks all cuts.
inline Diagram prepare(const Diagram& dg) {
  if (!dg.is_compact()) throw Error(ErrorCode::UnsupportedRegion, "only compact diagrams can be prepared");
  require_valid(dg);
  Diagram out = dg;
  for (std::size_t i = 0; i < dg.vertices.size(); ++i) {
    auto kind = vertex_kind(out, i);
    if (std::holds_alternative<NonDelzantBare>(kind)) {
      throw Error(ErrorCode::NonDelzantBareVertex, "vertex " + std::to_string(i) + " is neither Delzant nor a corner");
    }
    if (is_delzant(kind)) out = nodal_trade(out, i);
  }
  return shrink_cuts(out);
}

// ---------------------------------------------------------------------------
// Boundary bookkeeping

/// Integral affine length along the boundary from `from` to `to`, walking clockwise.
inline Rat clockwise_length(const std::vector<QVec2>& vs, const QVec2& from, const QVec2& to) {
  const std::size_t n = vs.size();
  auto edge_of = [&](const QVec2& x) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::on_segment(vs[i], vs[(i + 1) % n], x) && x != vs[(i + 1) % n]) return i;
    }
    throw Error(ErrorCode::BadEdge, "point is not on the boundary");
  };
  auto len = [](const QVec2& a, const QVec2& b) { return a == b ? Rat(0) : affine_length(a, b); };
  std::size_t i = edge_of(from);
  std::size_t j = edge_of(to);
  // Clockwise from `from` first reaches vertex i, then i - 1, ...
  if (i == j && (to == vs[i] || dot(to - vs[i], to - vs[i]) <= dot(from - vs[i], from - vs[i]))) {
    return len(to, from);
  }
  Rat total = len(vs[i], from);
  std::size_t k = i;
  while (true) {
    std::size_t prev = (k + n - 1) % n;
    if (prev == j) return total + len(to, vs[k]);
    total += len(vs[prev], vs[k]);
    k = prev;
  }
}

/// Index of the edge containing segment [a, b].
inline std::optional<std::size_t> edge_containing(const std::vector<QVec2>& vs, const QVec2& a, const QVec2& b) {
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (detail::on_segment(vs[i], vs[(i + 1) % n], a) && detail::on_segment(vs[i], vs[(i + 1) % n], b)) return i;
  }
  return std::nullopt;
}

inline Rat edge_length(const Diagram& dg, std::size_t e) {
  return affine_length(dg.vertex(e), dg.vertex(e + 1));
}

/// FNV-1a over a canonical text form: vertices rotated to start at the smallest one.
inline std::uint64_t diagram_digest(const Diagram& dg) {
  std::ostringstream os;
  os << (dg.is_compact() ? "compact" : "bdpq") << ";";
  if (dg.is_compact()) {
    const auto& vs = dg.vertices;
    std::size_t start = 0;
    for (std::size_t i = 1; i < vs.size(); ++i) {
      if (vs[i] < vs[start]) start = i;
    }
    for (std::size_t i = 0; i < vs.size(); ++i) os << vs[(start + i) % vs.size()] << ";";
    for (const auto& c : dg.corners) {
      os << "c" << c.anchor << c.eigendirection;
      for (const auto& t : c.nodes) os << "," << t;
      os << ";";
    }
  } else {
    const auto& m = dg.bdpq;
    os << m.d << "," << m.p.get_str() << "," << m.q.get_str() << ","
       << (m.cut_side == CutSide::Outward ? "out" : "in");
    for (const auto& t : m.nodes) os << "," << t;
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string digest_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 15];
  return s;
}

// ---------------------------------------------------------------------------
// Walk

struct StepRecord {
  std::size_t n = 0;
  std::size_t label = 0;
  CornerType corner_type;
  Rat ell;                          // length of the tracked edge after the step
  std::map<std::size_t, Rat> g_values;  // clockwise distance from the pinned vertex, per label
  Rat a_n;
  std::string digest;
};

struct WalkState {
  Diagram dg;
  std::size_t edge = 0;
  std::vector<std::size_t> labels;  // labels[i] is the label of corner i
  QVec2 pinned;                     // clockwise end of the initial edge
};

struct WalkTrace {
  Diagram initial;
  std::size_t initial_edge = 0;
  Rat initial_ell;
  Rat boundary_length;
  std::vector<StepRecord> steps;
  std::vector<std::size_t> restart_offsets;
  Diagram final_diagram;
};

inline WalkState start_walk(const Diagram& dg, std::size_t edge) {
  if (!dg.is_compact()) throw Error(ErrorCode::UnsupportedRegion, "walks need a compact diagram");
  if (edge >= dg.vertices.size()) throw Error(ErrorCode::BadEdge, "edge " + std::to_string(edge) + " does not exist");
  WalkState st{dg, edge, {}, dg.vertex(edge)};
  for (std::size_t i = 0; i < dg.corners.size(); ++i) st.labels.push_back(i);
  return st;
}

/// Corner to mutate for edge e: at the clockwise end, the one making the smallest angle.
inline std::size_t walker_corner(const Diagram& dg, std::size_t edge) {
  if (edge >= dg.vertices.size()) throw Error(ErrorCode::BadEdge, "edge " + std::to_string(edge) + " does not exist");
  const QVec2 x = dg.vertex(edge);
  IVec2 u = primitive_direction(dg.vertex(edge + 1) - x);
  auto ids = corners_at(dg, x);
  if (ids.empty()) throw Error(ErrorCode::NoCornerAtEdge, "no corner at the clockwise end of edge " + std::to_string(edge));
  // Smaller angle with u  <=>  larger cot = <u,v> / det(u,v), det > 0 for inward v.
  auto better = [&](std::size_t a, std::size_t b) {
    const IVec2& va = dg.corners[a].eigendirection;
    const IVec2& vb = dg.corners[b].eigendirection;
    return dot(u, va) * det(u, vb) > dot(u, vb) * det(u, va);
  };
  std::size_t best = ids.front();
  for (std::size_t id : ids) {
    if (better(id, best)) best = id;
  }
  return best;
}

struct StepResult {
  StepRecord record;
  bool merged = false;
};

/// One mutation at the clockwise end of the tracked edge. CornerMerge propagates unless
/// allow_merge is set.
inline StepResult step(WalkState& st, std::size_t n, bool allow_merge = false) {
  const Diagram& dg = st.dg;
  const std::size_t id = walker_corner(dg, st.edge);
  const QVec2 a = dg.vertex(st.edge);
  const QVec2 b = dg.vertex(st.edge + 1);
  StepRecord rec;
  rec.n = n;
  rec.label = st.labels[id];
  {
    // The type is read with the other corners at the vertex moved away.
    Diagram iso = isolate(dg, id);
    rec.corner_type = corner_type(iso, id);
  }
  auto erased = allow_merge ? merge_partner(dg, id) : std::nullopt;
  MutateOptions opts;
  opts.allow_merge = allow_merge;
  opts.clear_path = true;
  auto [next, move] = mutate(dg, id, opts);
  (void)move;
  if (erased) st.labels.erase(st.labels.begin() + static_cast<std::ptrdiff_t>(*erased));
  auto e = edge_containing(next.vertices, a, b);
  if (!e) throw Error(ErrorCode::BadEdge, "tracked edge was not preserved");
  st.dg = std::move(next);
  st.edge = *e;
  rec.ell = edge_length(st.dg, st.edge);
  for (std::size_t i = 0; i < st.dg.corners.size(); ++i) {
    rec.g_values[st.labels[i]] = clockwise_length(st.dg.vertices, st.pinned, st.dg.corners[i].anchor);
  }
  rec.digest = digest_hex(diagram_digest(st.dg));
  return {rec, erased.has_value()};
}

inline constexpr int kMaxRestarts = 3;

/// Iterates step; a corner merge is absorbed by merging and restarting the count of
/// corners from there, at most kMaxRestarts times.
inline WalkTrace walk(const Diagram& dg, std::size_t edge, std::size_t n_steps) {
  WalkState st = start_walk(dg, edge);
  WalkTrace tr;
  tr.initial = dg;
  tr.initial_edge = edge;
  tr.initial_ell = edge_length(dg, edge);
  tr.boundary_length = boundary_affine_length(dg);
  int restarts = 0;
  for (std::size_t n = 0; n < n_steps; ++n) {
    try {
      tr.steps.push_back(step(st, n).record);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CornerMerge) throw;
      if (++restarts > kMaxRestarts) throw Error(ErrorCode::WalkAborted, "too many corner merges");
      tr.restart_offsets.push_back(n);
      tr.steps.push_back(step(st, n, true).record);
    }
  }
  // a_n: furthest mutated label, over the labels that are mutated somewhere in the trace.
  std::set<std::size_t> mutated;
  for (const auto& s : tr.steps) mutated.insert(s.label);
  for (auto& s : tr.steps) {
    Rat best;
    for (const auto& [label, g] : s.g_values) {
      if (mutated.count(label)) best = max(best, g);
    }
    s.a_n = best;
  }
  tr.final_diagram = st.dg;
  return tr;
}

// ---------------------------------------------------------------------------
// Two-corner report

struct TwoCornerReport {
  bool eventually_two_labels = false;
  std::optional<std::size_t> from_step;
  std::vector<std::size_t> labels;
};

inline TwoCornerReport two_corner_report(const WalkTrace& tr, std::size_t window = 8) {
  const std::size_t need = std::max<std::size_t>(window, 3);
  if (tr.steps.size() < need) throw Error(ErrorCode::InsufficientData, "trace is shorter than the window");
  std::vector<std::size_t> ks;
  for (const auto& s : tr.steps) ks.push_back(s.label);
  const std::size_t n = ks.size();
  auto alternates_from = [&](std::size_t start) {
    std::set<std::size_t> seen(ks.begin() + static_cast<std::ptrdiff_t>(start), ks.end());
    if (seen.size() != 2) return false;
    for (std::size_t i = start; i + 1 < n; ++i) {
      if (ks[i] == ks[i + 1]) return false;
    }
    return true;
  };
  TwoCornerReport r;
  if (!alternates_from(n - window)) return r;
  std::size_t start = n - window;
  while (start > 0 && alternates_from(start - 1)) --start;
  r.eventually_two_labels = true;
  r.from_step = tr.steps[start].n;
  r.labels = {ks[n - 1], ks[n - 2]};
  std::sort(r.labels.begin(), r.labels.end());
  return r;
}

// ---------------------------------------------------------------------------
// Markov tree

using Triple = std::array<Int, 3>;

inline Triple sorted_triple(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

struct MarkovNode {
  Diagram dg;
  Triple triple;
  std::size_t depth = 0;
  std::vector<MarkovNode> children;
};

inline Triple corner_p_values(const Diagram& dg) {
  if (dg.corners.size() != 3) throw Error(ErrorCode::InvalidDiagram, "expected three corners");
  Triple t;
  for (std::size_t i = 0; i < 3; ++i) t[i] = corner_type(dg, i).p;
  return sorted_triple(t);
}

namespace detail {

inline void grow_markov(MarkovNode& node, std::size_t depth) {
  if (node.depth >= depth) return;
  for (std::size_t i = 0; i < node.dg.corners.size(); ++i) {
    MutateOptions opts;
    opts.clear_path = true;
    Diagram next = mutate(node.dg, i, opts).first;
    MarkovNode child{next, corner_p_values(next), node.depth + 1, {}};
    grow_markov(child, depth);
    node.children.push_back(std::move(child));
  }
}

}  // namespace detail

/// Mutation tree of the traded triangle cp2(lambda), every corner at every node.
inline MarkovNode markov_tree(const Rat& lambda, std::size_t depth) {
  Diagram root = prepare(cp2(lambda));
  MarkovNode node{root, corner_p_values(root), 0, {}};
  detail::grow_markov(node, depth);
  return node;
}

/// Sorted triples at each depth of a tree.
inline std::vector<std::vector<Triple>> triples_by_depth(const MarkovNode& root) {
  std::vector<std::vector<Triple>> out;
  std::vector<const MarkovNode*> level{&root};
  while (!level.empty()) {
    std::vector<Triple> ts;
    std::vector<const MarkovNode*> next;
    for (const auto* n : level) {
      ts.push_back(n->triple);
      for (const auto& c : n->children) next.push_back(&c);
    }
    std::sort(ts.begin(), ts.end());
    out.push_back(std::move(ts));
    level = std::move(next);
  }
  return out;
}

inline bool is_markov(const Triple& t) {
  return t[0] * t[0] + t[1] * t[1] + t[2] * t[2] == 3 * t[0] * t[1] * t[2];
}

}  // namespace atf
