#pragma once

// The move calculus: nodal trade, nodal slide, change of branch cut, mutation, isolation
// and region clearing. Every move returns a new diagram; inputs are never modified.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atf/affine.hpp"
#include "atf/diagram.hpp"
#include "atf/errors.hpp"
#include "atf/rational.hpp"

namespace atf {

enum class MoveKind { Trade, Slide, CutChange, Mutation, Clear };

inline std::string_view to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Trade: return "trade";
    case MoveKind::Slide: return "slide";
    case MoveKind::CutChange: return "cut-change";
    case MoveKind::Mutation: return "mutate";
    case MoveKind::Clear: return "clear";
  }
  return "unknown";
}

struct MoveRecord {
  MoveKind kind = MoveKind::Slide;
  std::size_t target = 0;  // corner id, or vertex index for trades
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<QVec2> crossed_points;
};

/// Which half-plane of the eigenline stays fixed during a change of branch cut. With Right
/// the half to the left of the eigendirection is sheared by weight +d; Left shears the
/// right half by weight -d. The two differ by a global linear shear, and changing a cut
/// with one side and then back with the other is the identity.
inline constexpr Side kDefaultFixedSide = Side::Right;

struct CutChangeOptions {
  Side fixed = kDefaultFixedSide;
  /// Absorb a corner met head-on at the far end of the eigenline instead of failing.
  bool allow_merge = false;
};

namespace detail {

inline void require_compact_corner(const Diagram& dg, std::size_t corner_id) {
  if (corner_id >= corner_count(dg)) {
    throw Error(ErrorCode::NotACorner, "corner " + std::to_string(corner_id) + " does not exist");
  }
}

/// First positive parameter at which the ray anchor + s dir meets another corner's cut
/// (anchor to outermost node), ignoring contact at s = 0.
inline std::optional<Rat> first_cut_hit(const Diagram& dg, const QVec2& anchor, const IVec2& dir,
                                        std::optional<std::size_t> exclude) {
  std::optional<Rat> best;
  auto consider = [&](const Rat& s) {
    if (s.sign() > 0 && (!best || s < *best)) best = s;
  };
  QVec2 u(dir);
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (exclude && *exclude == j) continue;
    const Corner& c = dg.corners[j];
    QVec2 a = c.anchor;
    QVec2 b = c.cut_end();
    QVec2 e = b - a;
    if (det(u, e).is_zero()) {
      if (!det(u, a - anchor).is_zero()) continue;
      Rat uu = dot(u, u);
      Rat sa = dot(a - anchor, u) / uu;
      Rat sb = dot(b - anchor, u) / uu;
      if (sa.sign() > 0 || sb.sign() > 0) {
        // Overlap starts at the nearer endpoint, or at the anchor if it lies inside.
        if (sa.sign() <= 0 || sb.sign() <= 0) {
          best = Rat(0);
        } else {
          consider(min(sa, sb));
        }
      }
      continue;
    }
    if (auto s = ray_segment_param(anchor, u, a, b)) consider(*s);
  }
  return best;
}

/// Room along the eigenray: distance to the boundary exit or to the first foreign cut.
inline Rat free_length(const Diagram& dg, const QVec2& anchor, const IVec2& dir,
                       std::optional<std::size_t> exclude) {
  auto exit = eigen_exit(dg, anchor, dir);
  if (!exit) throw Error(ErrorCode::UnsupportedRegion, "eigenray never leaves the region");
  Rat room = *exit;
  if (auto hit = first_cut_hit(dg, anchor, dir, exclude)) room = min(room, *hit);
  return room;
}

inline std::vector<Rat> ladder(const Rat& epsilon, std::size_t d) {
  std::vector<Rat> out;
  for (std::size_t i = 1; i <= d; ++i) out.push_back(Rat(static_cast<long>(i)) * epsilon);
  return out;
}

inline bool on_segment(const QVec2& a, const QVec2& b, const QVec2& x) {
  if (!det(b - a, x - a).is_zero()) return false;
  return min(a.x, b.x) <= x.x && x.x <= max(a.x, b.x) && min(a.y, b.y) <= x.y && x.y <= max(a.y, b.y);
}

inline void record_crossings(const QVec2& from, const QVec2& to, const std::vector<QVec2>& tracked,
                             std::vector<QVec2>& out) {
  for (const auto& x : tracked) {
    if (on_segment(from, to, x) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
}

/// Drops repeated and straight vertices so that every listed vertex is a strict turn, then
/// rotates the list to start at the smallest vertex.
inline std::vector<QVec2> normalize_polygon(std::vector<QVec2> vs) {
  bool changed = true;
  while (changed && vs.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::size_t n = vs.size();
      const QVec2& prev = vs[(i + n - 1) % n];
      const QVec2& next = vs[(i + 1) % n];
      if (vs[i] == next || det(vs[i] - prev, next - vs[i]).is_zero()) {
        vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (!vs.empty()) std::rotate(vs.begin(), std::min_element(vs.begin(), vs.end()), vs.end());
  return vs;
}

inline std::vector<Rat> nodes_from_far_end(const std::vector<Rat>& nodes, const Rat& length) {
  std::vector<Rat> out;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) out.push_back(length - *it);
  return out;
}

}  // namespace detail

/// Default node parameter for a cut of multiplicity d along dir from anchor: a quarter of
/// the free room along the eigenray, split evenly over the d nodes.
inline Rat default_epsilon(const Diagram& dg, const QVec2& anchor, const IVec2& dir, std::size_t d,
                           std::optional<std::size_t> exclude = std::nullopt) {
  Rat room = detail::free_length(dg, anchor, dir, exclude);
  return room / Rat(static_cast<long>(4 * d));
}

// ---------------------------------------------------------------------------
// Nodal trade

/// Replaces a Delzant vertex by a corner with eigendirection u1 + u2 and one node.
inline Diagram nodal_trade(const Diagram& dg, std::size_t vertex_index,
                           std::optional<Rat> epsilon = std::nullopt) {
  auto kind = vertex_kind(dg, vertex_index);
  if (!is_delzant(kind)) {
    throw Error(ErrorCode::NotDelzant, "vertex " + std::to_string(vertex_index) + " is not a bare Delzant vertex");
  }
  if (!dg.is_compact()) throw Error(ErrorCode::NotDelzant, "the model has no Delzant vertex");
  const std::size_t n = dg.vertices.size();
  const QVec2& x = dg.vertices[vertex_index];
  IVec2 u1 = primitive_direction(dg.vertices[(vertex_index + 1) % n] - x);
  IVec2 u2 = primitive_direction(dg.vertices[(vertex_index + n - 1) % n] - x);
  IVec2 v = u1 + u2;
  Rat room = detail::free_length(dg, x, v, std::nullopt);
  Rat eps = epsilon ? *epsilon : room / Rat(4);
  if (eps.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
  if (!(eps < room)) throw Error(ErrorCode::EpsilonTooLarge, "node would leave the region or hit a cut");
  Diagram out = dg;
  out.corners.push_back(Corner{x, v, {eps}});
  return out;
}

// ---------------------------------------------------------------------------
// Nodal slide

inline std::pair<Diagram, MoveRecord> nodal_slide(const Diagram& dg, std::size_t corner_id,
                                                  std::size_t node_index, const Rat& new_t,
                                                  const std::vector<QVec2>& tracked = {}) {
  detail::require_compact_corner(dg, corner_id);
  CornerView view = corner_views(dg)[corner_id];
  Corner& c = view.corner;
  if (node_index >= c.nodes.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(node_index) + " does not exist");
  }
  if (new_t.sign() <= 0) throw Error(ErrorCode::LeavesRegion, "node parameter must be positive");
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    if (i != node_index && c.nodes[i] == new_t) throw Error(ErrorCode::HitsNode, "target coincides with another node");
  }
  if ((node_index > 0 && !(c.nodes[node_index - 1] < new_t)) ||
      (node_index + 1 < c.nodes.size() && !(new_t < c.nodes[node_index + 1]))) {
    throw Error(ErrorCode::NodeOrderViolated, "slide would pass a neighbouring node");
  }
  const QVec2 from = c.node_position(node_index);
  std::vector<Rat> nodes = c.nodes;
  nodes[node_index] = new_t;

  Diagram out = dg;
  if (dg.is_compact()) {
    auto exit = eigen_exit(dg, c.anchor, c.eigendirection);
    if (exit && !(new_t < *exit)) throw Error(ErrorCode::LeavesRegion, "node would leave the region");
    if (node_index + 1 == c.nodes.size() && c.nodes.back() < new_t) {
      auto hit = detail::first_cut_hit(dg, c.anchor, c.eigendirection, corner_id);
      if (hit && !(new_t < *hit)) throw Error(ErrorCode::CutCollision, "extended cut would cross another cut");
    }
    out.corners[corner_id].nodes = nodes;
  } else {
    out.bdpq.nodes = nodes;
  }
  MoveRecord rec{MoveKind::Slide, corner_id, {{"node", std::to_string(node_index)}, {"to", new_t.str()}}, {}};
  detail::record_crossings(from, c.anchor + new_t * QVec2(c.eigendirection), tracked, rec.crossed_points);
  return {out, rec};
}

/// Moves all nodes of a corner at once; crossings are collected per node.
inline std::pair<Diagram, MoveRecord> slide_all(const Diagram& dg, std::size_t corner_id,
                                                const std::vector<Rat>& targets,
                                                const std::vector<QVec2>& tracked = {}) {
  detail::require_compact_corner(dg, corner_id);
  Corner c = corner_views(dg)[corner_id].corner;
  if (targets.size() != c.nodes.size()) throw Error(ErrorCode::BadParams, "one target per node is required");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].sign() <= 0) throw Error(ErrorCode::LeavesRegion, "node parameter must be positive");
    if (i > 0 && !(targets[i - 1] < targets[i])) throw Error(ErrorCode::NodeOrderViolated, "targets must increase");
  }
  Diagram out = dg;
  if (dg.is_compact()) {
    auto exit = eigen_exit(dg, c.anchor, c.eigendirection);
    if (exit && !(targets.back() < *exit)) throw Error(ErrorCode::LeavesRegion, "node would leave the region");
    auto hit = detail::first_cut_hit(dg, c.anchor, c.eigendirection, corner_id);
    if (hit && !(targets.back() < *hit)) throw Error(ErrorCode::CutCollision, "cut would cross another cut");
    out.corners[corner_id].nodes = targets;
  } else {
    out.bdpq.nodes = targets;
  }
  MoveRecord rec{MoveKind::Slide, corner_id, {}, {}};
  std::string to;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    detail::record_crossings(c.node_position(i), c.anchor + targets[i] * QVec2(c.eigendirection), tracked,
                             rec.crossed_points);
    to += (i ? "," : "") + targets[i].str();
  }
  rec.params.emplace_back("to", to);
  return {out, rec};
}

// ---------------------------------------------------------------------------
// Change of branch cut

inline Diagram change_branch_cut(const Diagram& dg, std::size_t corner_id, CutChangeOptions opts = {}) {
  detail::require_compact_corner(dg, corner_id);
  if (dg.is_bdpq()) {
    Diagram out = dg;
    out.bdpq.cut_side = dg.bdpq.cut_side == CutSide::Outward ? CutSide::Inward : CutSide::Outward;
    return out;
  }
  if (dg.quadrant_cap) {
    throw Error(ErrorCode::UnsupportedRegion, "the clipped quadrant has no far boundary to re-anchor on");
  }
  const Corner& c = dg.corners[corner_id];
  const IVec2 v = c.eigendirection;
  const auto pieces = boundary_pieces(dg);
  LineClip clip = clip_line(pieces, c.anchor, QVec2(v));
  if (clip.grazes) throw Error(ErrorCode::EigenlineGrazesBoundary, "eigenline runs along an edge");
  if (clip.empty || !clip.hi) throw Error(ErrorCode::InvalidDiagram, "eigenray does not cross the region");
  const Rat L = *clip.hi;
  const QVec2 y = c.anchor + L * QVec2(v);

  std::optional<std::size_t> merge_with;
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (j != corner_id && dg.corners[j].anchor == y && dg.corners[j].eigendirection == -v) merge_with = j;
  }
  if (merge_with && !opts.allow_merge) {
    throw Error(ErrorCode::CornerMerge, "eigenline exits through corner " + std::to_string(*merge_with) +
                                            " on the same eigenline");
  }
  const QVec2 far_node = c.cut_end();
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (j == corner_id || (merge_with && *merge_with == j)) continue;
    const Corner& o = dg.corners[j];
    if (!segments_intersect(far_node, y, o.anchor, o.cut_end())) continue;
    if (o.anchor == y) {
      // Touching only at the shared far anchor is allowed.
      if (!det(QVec2(v), QVec2(o.eigendirection)).is_zero()) continue;
    }
    if (o.anchor == c.anchor) continue;
    throw Error(ErrorCode::CutCollision, "corner " + std::to_string(j) + " blocks the new cut");
  }

  const Side moving = opposite(opts.fixed);
  const long d = static_cast<long>(c.multiplicity());
  const Int weight = moving == Side::Left ? Int(d) : Int(-d);
  const IMat2 linear = shear_matrix(v, weight);
  auto map = [&](const QVec2& x) { return half_shear(v, weight, c.anchor, x, moving); };

  std::vector<QVec2> ring;
  const std::size_t n = dg.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const QVec2& a = dg.vertices[i];
    const QVec2& b = dg.vertices[(i + 1) % n];
    ring.push_back(map(a));
    for (const QVec2* p : {&c.anchor, &y}) {
      if (*p != a && *p != b && detail::on_segment(a, b, *p)) ring.push_back(*p);
    }
  }

  Diagram out = dg;
  out.vertices = detail::normalize_polygon(ring);
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (j == corner_id) continue;
    const Corner& o = dg.corners[j];
    Corner& m = out.corners[j];
    int s = side_sign(v, c.anchor, o.anchor);
    if (s == 0) s = det(QVec2(v), QVec2(o.eigendirection)).sign();
    bool moves = moving == Side::Left ? s > 0 : s < 0;
    m.anchor = map(o.anchor);
    if (moves) m.eigendirection = linear * o.eigendirection;
  }
  Corner& mc = out.corners[corner_id];
  mc.anchor = y;
  mc.eigendirection = -v;
  mc.nodes = detail::nodes_from_far_end(c.nodes, L);
  if (merge_with) {
    for (const auto& t : dg.corners[*merge_with].nodes) mc.nodes.push_back(t);
    std::sort(mc.nodes.begin(), mc.nodes.end());
    mc.nodes.erase(std::unique(mc.nodes.begin(), mc.nodes.end()), mc.nodes.end());
    out.corners.erase(out.corners.begin() + static_cast<std::ptrdiff_t>(*merge_with));
  }
  return out;
}

/// Index a corner has after change_branch_cut with a merge (later indices shift down).
inline std::size_t index_after_merge(std::size_t id, std::optional<std::size_t> erased) {
  return erased && *erased < id ? id - 1 : id;
}

/// The corner absorbed by change_branch_cut(dg, corner_id, {.allow_merge = true}), if any.
inline std::optional<std::size_t> merge_partner(const Diagram& dg, std::size_t corner_id) {
  if (!dg.is_compact() || corner_id >= dg.corners.size()) return std::nullopt;
  const Corner& c = dg.corners[corner_id];
  auto exit = eigen_exit(dg, c.anchor, c.eigendirection);
  if (!exit) return std::nullopt;
  QVec2 y = c.anchor + *exit * QVec2(c.eigendirection);
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (j != corner_id && dg.corners[j].anchor == y && dg.corners[j].eigendirection == -c.eigendirection) return j;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Mutation

/// Shortens every other cut that crosses the path of the new cut (from the outermost node
/// to the far boundary point), scaling its nodes toward its anchor. Cuts anchored on the
/// path itself are left alone.
inline Diagram clear_cut_path(const Diagram& dg, std::size_t corner_id) {
  detail::require_compact_corner(dg, corner_id);
  if (!dg.is_compact()) return dg;
  const Corner& c = dg.corners[corner_id];
  auto exit = eigen_exit(dg, c.anchor, c.eigendirection);
  if (!exit) return dg;
  const QVec2 from = c.cut_end();
  const QVec2 to = c.anchor + *exit * QVec2(c.eigendirection);
  Diagram out = dg;
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (j == corner_id) continue;
    const Corner& o = dg.corners[j];
    auto s = ray_segment_param(o.anchor, QVec2(o.eigendirection), from, to);
    if (!s || s->sign() <= 0 || o.nodes.back() < *s) continue;
    Rat scale = *s / (Rat(2) * o.nodes.back());
    for (auto& t : out.corners[j].nodes) t = t * scale;
  }
  return out;
}

struct MutateOptions {
  std::optional<Rat> epsilon;
  Side fixed = kDefaultFixedSide;
  bool allow_merge = false;
  std::vector<QVec2> tracked;
  /// Shorten other cuts crossing the new cut's path first, instead of failing.
  bool clear_path = false;
};

/// Change of branch cut followed by sliding the corner's nodes to epsilon, 2 epsilon, ...
inline std::pair<Diagram, MoveRecord> mutate(const Diagram& dg, std::size_t corner_id, const MutateOptions& opts = {}) {
  auto erased = opts.allow_merge ? merge_partner(dg, corner_id) : std::nullopt;
  Diagram cut = change_branch_cut(opts.clear_path ? clear_cut_path(dg, corner_id) : dg, corner_id,
                                  {opts.fixed, opts.allow_merge});
  std::size_t id = index_after_merge(corner_id, erased);
  Corner c = corner_views(cut)[id].corner;
  const std::size_t d = c.multiplicity();
  Rat eps;
  if (cut.is_compact()) {
    Rat room = detail::free_length(cut, c.anchor, c.eigendirection, id);
    eps = opts.epsilon ? *opts.epsilon : room / Rat(static_cast<long>(4 * d));
    if (eps.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
    if (!(Rat(static_cast<long>(d)) * eps < room)) throw Error(ErrorCode::EpsilonTooLarge, "ladder does not fit");
  } else {
    eps = opts.epsilon ? *opts.epsilon : c.nodes.front() / Rat(static_cast<long>(d));
    if (eps.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
  }
  auto [out, slide] = slide_all(cut, id, detail::ladder(eps, d), opts.tracked);
  MoveRecord rec{MoveKind::Mutation, corner_id, {{"epsilon", eps.str()}}, slide.crossed_points};
  rec.params.emplace_back("side", opts.fixed == Side::Right ? "right" : "left");
  if (erased) rec.params.emplace_back("merged", std::to_string(*erased));
  return {out, rec};
}

// ---------------------------------------------------------------------------
// Isolation

/// Changes the cut of every other corner sharing corner_id's anchor.
inline Diagram isolate(const Diagram& dg, std::size_t corner_id) {
  detail::require_compact_corner(dg, corner_id);
  if (dg.is_bdpq()) return dg;
  Diagram out = dg;
  const QVec2 anchor = dg.corners[corner_id].anchor;
  for (std::size_t j = 0; j < dg.corners.size(); ++j) {
    if (j != corner_id && out.corners[j].anchor == anchor) out = change_branch_cut(out, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Region clearing

namespace detail {

/// Parameter range of {anchor + s dir} inside the convex hull of `pts`; nullopt if disjoint.
inline std::optional<std::pair<Rat, Rat>> hull_line_range(const std::vector<QVec2>& pts, const QVec2& anchor,
                                                          const IVec2& dir) {
  QVec2 u(dir);
  Rat uu = dot(u, u);
  std::optional<Rat> lo, hi;
  auto take = [&](const Rat& s) {
    if (!lo || s < *lo) lo = s;
    if (!hi || *hi < s) hi = s;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      const QVec2& a = pts[i];
      const QVec2& b = pts[j];
      bool a_on = det(u, a - anchor).is_zero();
      bool b_on = det(u, b - anchor).is_zero();
      if (a_on) take(dot(a - anchor, u) / uu);
      if (b_on) take(dot(b - anchor, u) / uu);
      if (i == j || a_on || b_on) continue;
      if (auto s = ray_segment_param(anchor, u, a, b)) take(*s);
    }
  }
  if (!lo) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

}  // namespace detail

/// Slides nodes so that no node or cut meets the convex hull of `region`.
/// Compact diagrams pull each offending cut back toward its anchor; the half-plane model
/// pushes an outward cut beyond the region and pulls an inward cut back toward the origin.
/// `swept` receives the slide supports (from old to new node position), if requested.
inline Diagram clear_region(const Diagram& dg, const std::vector<QVec2>& region,
                            std::vector<std::pair<QVec2, QVec2>>* swept = nullptr) {
  if (region.empty()) return dg;
  Diagram out = dg;
  auto note = [&](const Corner& c, const std::vector<Rat>& targets) {
    if (!swept) return;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (c.nodes[i] != targets[i]) {
        swept->emplace_back(c.node_position(i), c.anchor + targets[i] * QVec2(c.eigendirection));
      }
    }
  };
  auto views = corner_views(dg);
  for (std::size_t id = 0; id < views.size(); ++id) {
    const Corner& c = views[id].corner;
    auto range = detail::hull_line_range(region, c.anchor, c.eigendirection);
    if (!range) continue;
    auto [lo, hi] = *range;
    if (hi.sign() < 0) continue;
    if (dg.is_bdpq() && views[id].outward) {
      // Nodes and the outward cut occupy everything from the first node on.
      if (hi < c.nodes.front()) continue;
      std::vector<Rat> targets;
      for (const auto& t : c.nodes) targets.push_back(t + hi);
      note(c, targets);
      out.bdpq.nodes = targets;
      continue;
    }
    // Cut runs from the anchor to the outermost node.
    if (c.nodes.back() < lo) continue;
    if (lo.sign() <= 0) throw Error(ErrorCode::Unclearable, "region contains the anchor of corner " + std::to_string(id));
    Rat scale = lo / (Rat(2) * c.nodes.back());
    std::vector<Rat> targets;
    for (const auto& t : c.nodes) targets.push_back(t * scale);
    note(c, targets);
    if (dg.is_bdpq()) {
      out.bdpq.nodes = targets;
    } else {
      out.corners[id].nodes = targets;
    }
  }
  return out;
}

}  // namespace atf
