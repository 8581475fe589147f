#pragma once

// Decorated almost toric base diagrams: a rational convex region with ATF-corners
// (boundary anchor, inward primitive eigendirection, nodes along the eigenray).
//
// Two kinds are supported. A Compact diagram is a convex polygon listed counterclockwise
// (interior on the left of every directed edge); the quadrant preset is a compact clip of
// the quadrant whose far edges are flagged artificial. A Bdpq diagram is the half-plane
// model {x1 >= 0} with d nodes on the ray R = {t (p, q) : t > 0}; its Inward form is the
// image after changing the cut at every node, which has a single corner at the origin.
//
// Node parameters are affine parameters t along the primitive eigendirection, strictly
// increasing away from the anchor (for Bdpq: node i sits at t_i (p, q), so t = x1 / p).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atf/affine.hpp"
#include "atf/errors.hpp"
#include "atf/rational.hpp"

namespace atf {

enum class DiagramKind { Compact, Bdpq };
enum class CutSide { Outward, Inward };

struct Corner {
  QVec2 anchor;
  IVec2 eigendirection;
  std::vector<Rat> nodes;

  std::size_t multiplicity() const { return nodes.size(); }
  QVec2 node_position(std::size_t i) const { return anchor + nodes.at(i) * QVec2(eigendirection); }
  /// Far end of the branch cut (the outermost node).
  QVec2 cut_end() const { return node_position(nodes.size() - 1); }

  friend bool operator==(const Corner&, const Corner&) = default;
};

struct BdpqParams {
  long d = 1;
  Int p = 1;
  Int q = 0;
  CutSide cut_side = CutSide::Outward;
  std::vector<Rat> nodes;

  IVec2 ray() const { return {p, q}; }
  friend bool operator==(const BdpqParams&, const BdpqParams&) = default;
};

struct Diagram {
  DiagramKind kind = DiagramKind::Compact;
  std::vector<QVec2> vertices;
  std::vector<Corner> corners;
  /// Set for the clipped quadrant: edges on x = cap or y = cap are not real boundary.
  std::optional<Rat> quadrant_cap;
  BdpqParams bdpq;

  bool is_compact() const { return kind == DiagramKind::Compact; }
  bool is_bdpq() const { return kind == DiagramKind::Bdpq; }
  std::size_t vertex_count() const { return vertices.size(); }
  const QVec2& vertex(std::size_t i) const { return vertices.at(i % vertices.size()); }

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

// ---------------------------------------------------------------------------
// Region geometry

/// One straight piece of the boundary, traversed with the interior on its left:
/// points base + s * dir for s in [lo, hi] (missing bound = infinite).
struct BoundaryPiece {
  QVec2 base;
  IVec2 dir;
  std::optional<Rat> lo;
  std::optional<Rat> hi;
  bool artificial = false;

  QVec2 at(const Rat& s) const { return base + s * QVec2(dir); }
  bool contains_param(const Rat& s) const {
    return (!lo || *lo <= s) && (!hi || s <= *hi);
  }
};

namespace detail {

inline bool on_quadrant_clip(const Diagram& dg, const QVec2& a, const QVec2& b) {
  if (!dg.quadrant_cap) return false;
  const Rat& cap = *dg.quadrant_cap;
  return (a.x == cap && b.x == cap) || (a.y == cap && b.y == cap);
}

/// Lower boundary direction of the Inward model: the shear of (0, -1).
inline IVec2 bdpq_inward_lower_dir(const BdpqParams& m) {
  IMat2 s = shear_matrix(IVec2(Int(-m.p), Int(-m.q)), Int(m.d));
  return s * IVec2(0, -1);
}

}  // namespace detail

inline std::vector<BoundaryPiece> boundary_pieces(const Diagram& dg) {
  std::vector<BoundaryPiece> out;
  if (dg.is_compact()) {
    const std::size_t n = dg.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const QVec2& a = dg.vertices[i];
      const QVec2& b = dg.vertices[(i + 1) % n];
      if (a == b) continue;
      auto pd = primitive_decompose(b - a);
      out.push_back({a, pd.direction, Rat(0), pd.length, detail::on_quadrant_clip(dg, a, b)});
    }
    return out;
  }
  if (dg.bdpq.cut_side == CutSide::Outward) {
    out.push_back({QVec2(), IVec2(0, -1), std::nullopt, std::nullopt, false});
  } else {
    out.push_back({QVec2(), IVec2(0, -1), std::nullopt, Rat(0), false});
    out.push_back({QVec2(), detail::bdpq_inward_lower_dir(dg.bdpq), Rat(0), std::nullopt, false});
  }
  return out;
}

/// Closed membership.
inline bool region_contains(const std::vector<BoundaryPiece>& pieces, const QVec2& x) {
  return std::all_of(pieces.begin(), pieces.end(), [&](const BoundaryPiece& p) {
    return det(QVec2(p.dir), x - p.base).sign() >= 0;
  });
}

inline bool region_interior(const std::vector<BoundaryPiece>& pieces, const QVec2& x) {
  return std::all_of(pieces.begin(), pieces.end(), [&](const BoundaryPiece& p) {
    return det(QVec2(p.dir), x - p.base).sign() > 0;
  });
}

inline bool contains(const Diagram& dg, const QVec2& x) { return region_contains(boundary_pieces(dg), x); }
inline bool interior(const Diagram& dg, const QVec2& x) { return region_interior(boundary_pieces(dg), x); }

/// Index of a boundary piece containing x, preferring one where x is not an endpoint.
inline std::optional<std::size_t> boundary_piece_at(const std::vector<BoundaryPiece>& pieces,
                                                    const QVec2& x) {
  std::optional<std::size_t> endpoint_hit;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    QVec2 rel = x - p.base;
    if (!det(QVec2(p.dir), rel).is_zero()) continue;
    Rat s = p.dir.x != 0 ? rel.x / Rat(p.dir.x) : rel.y / Rat(p.dir.y);
    if (!p.contains_param(s)) continue;
    bool at_end = (p.lo && s == *p.lo) || (p.hi && s == *p.hi);
    if (!at_end) return i;
    if (!endpoint_hit) endpoint_hit = i;
  }
  return endpoint_hit;
}

inline bool on_boundary(const Diagram& dg, const QVec2& x) {
  return boundary_piece_at(boundary_pieces(dg), x).has_value();
}

/// Parameter interval of the line a + s w inside the closed region, with the boundary
/// pieces that bound it at each end (several when the line passes through a vertex).
struct LineClip {
  bool empty = false;
  std::optional<Rat> lo;  // nullopt = -infinity
  std::optional<Rat> hi;  // nullopt = +infinity
  std::vector<std::size_t> lo_pieces;
  std::vector<std::size_t> hi_pieces;
  /// Set when the line lies on the supporting line of some piece.
  bool grazes = false;
};

inline LineClip clip_line(const std::vector<BoundaryPiece>& pieces, const QVec2& a, const QVec2& w) {
  LineClip c;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    // det(dir, a + s w - base) >= 0  <=>  c0 + s c1 >= 0
    Rat c0 = det(QVec2(p.dir), a - p.base);
    Rat c1 = det(QVec2(p.dir), w);
    if (c1.is_zero()) {
      if (c0.sign() < 0) {
        c.empty = true;
        return c;
      }
      if (c0.is_zero()) c.grazes = true;
      continue;
    }
    Rat s = -c0 / c1;
    if (c1.sign() > 0) {
      if (!c.lo || *c.lo < s) {
        c.lo = s;
        c.lo_pieces = {i};
      } else if (*c.lo == s) {
        c.lo_pieces.push_back(i);
      }
    } else {
      if (!c.hi || s < *c.hi) {
        c.hi = s;
        c.hi_pieces = {i};
      } else if (*c.hi == s) {
        c.hi_pieces.push_back(i);
      }
    }
  }
  if (c.lo && c.hi && *c.hi < *c.lo) c.empty = true;
  return c;
}

/// Where the eigenray anchor + s v (s > 0) leaves the region; nullopt if it never does.
inline std::optional<Rat> eigen_exit(const Diagram& dg, const QVec2& anchor, const IVec2& v) {
  LineClip c = clip_line(boundary_pieces(dg), anchor, QVec2(v));
  if (c.empty) return Rat(0);
  return c.hi;
}

inline Rat polygon_area(const std::vector<QVec2>& vs) {
  Rat twice;
  for (std::size_t i = 0; i < vs.size(); ++i) twice += det(vs[i], vs[(i + 1) % vs.size()]);
  return twice / Rat(2);
}

inline Rat area(const Diagram& dg) {
  if (!dg.is_compact()) throw Error(ErrorCode::UnsupportedRegion, "area of an unbounded region");
  return polygon_area(dg.vertices);
}

/// Total integral affine length of the boundary of a compact diagram.
inline Rat boundary_affine_length(const Diagram& dg) {
  if (!dg.is_compact()) throw Error(ErrorCode::UnsupportedRegion, "perimeter of an unbounded region");
  Rat total;
  for (const auto& p : boundary_pieces(dg)) total += *p.hi;
  return total;
}

/// Corners of the diagram as uniform records. Bdpq models expose their single corner:
/// Inward has it at the origin with eigendirection (p, q); Outward has no finite anchor,
/// so its cut is reported with anchor at the origin and `outward` set.
struct CornerView {
  Corner corner;
  bool outward = false;
};

inline std::vector<CornerView> corner_views(const Diagram& dg) {
  std::vector<CornerView> out;
  if (dg.is_compact()) {
    for (const auto& c : dg.corners) out.push_back({c, false});
  } else {
    out.push_back({Corner{QVec2(), dg.bdpq.ray(), dg.bdpq.nodes},
                   dg.bdpq.cut_side == CutSide::Outward});
  }
  return out;
}

inline std::size_t corner_count(const Diagram& dg) { return dg.is_compact() ? dg.corners.size() : 1; }

/// Segment intersection test (closed segments), exact.
inline bool segments_intersect(const QVec2& a, const QVec2& b, const QVec2& c, const QVec2& d) {
  auto orient = [](const QVec2& p, const QVec2& q, const QVec2& r) { return det(q - p, r - p).sign(); };
  auto on_seg = [](const QVec2& p, const QVec2& q, const QVec2& r) {
    return min(p.x, q.x) <= r.x && r.x <= max(p.x, q.x) && min(p.y, q.y) <= r.y && r.y <= max(p.y, q.y);
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_seg(a, b, c)) return true;
  if (o2 == 0 && on_seg(a, b, d)) return true;
  if (o3 == 0 && on_seg(c, d, a)) return true;
  if (o4 == 0 && on_seg(c, d, b)) return true;
  return false;
}

/// Parameter s with a + s u on the segment [c, d], for non-parallel lines; nullopt otherwise.
inline std::optional<Rat> ray_segment_param(const QVec2& a, const QVec2& u, const QVec2& c,
                                            const QVec2& d) {
  QVec2 e = d - c;
  Rat den = det(u, e);
  if (den.is_zero()) return std::nullopt;
  Rat s = det(c - a, e) / den;
  Rat r = det(c - a, u) / den;
  if (r.sign() < 0 || Rat(1) < r) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationCode {
  TooFewVertices,
  DuplicateVertex,
  NotStrictlyConvex,
  NotCounterClockwise,
  BadMultiplicity,
  BadNodeOrder,
  NotPrimitive,
  AnchorNotOnBoundary,
  CutLeavesRegion,
  NodeOutsideRegion,
  DuplicateEigendirection,
  CutsIntersect,
  NotCoprime,
  BadParams,
};

inline std::string_view to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::TooFewVertices: return "TooFewVertices";
    case ViolationCode::DuplicateVertex: return "DuplicateVertex";
    case ViolationCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ViolationCode::NotCounterClockwise: return "NotCounterClockwise";
    case ViolationCode::BadMultiplicity: return "BadMultiplicity";
    case ViolationCode::BadNodeOrder: return "BadNodeOrder";
    case ViolationCode::NotPrimitive: return "NotPrimitive";
    case ViolationCode::AnchorNotOnBoundary: return "AnchorNotOnBoundary";
    case ViolationCode::CutLeavesRegion: return "CutLeavesRegion";
    case ViolationCode::NodeOutsideRegion: return "NodeOutsideRegion";
    case ViolationCode::DuplicateEigendirection: return "DuplicateEigendirection";
    case ViolationCode::CutsIntersect: return "CutsIntersect";
    case ViolationCode::NotCoprime: return "NotCoprime";
    case ViolationCode::BadParams: return "BadParams";
  }
  return "Unknown";
}

struct Violation {
  ViolationCode code;
  std::string message;
  std::optional<std::size_t> index;  // vertex or corner index, when applicable
};

namespace detail {

inline bool nodes_increasing_positive(const std::vector<Rat>& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].sign() <= 0) return false;
    if (i > 0 && !(nodes[i - 1] < nodes[i])) return false;
  }
  return true;
}

inline void validate_bdpq(const BdpqParams& m, std::vector<Violation>& out) {
  if (m.d < 1 || static_cast<std::size_t>(m.d) != m.nodes.size()) {
    out.push_back({ViolationCode::BadMultiplicity, "d must be >= 1 and match the node count", 0});
  }
  if (m.p < 1) out.push_back({ViolationCode::BadParams, "p must be >= 1", std::nullopt});
  if (int_gcd(m.p, m.q) != 1) {
    out.push_back({ViolationCode::NotCoprime,
                   "gcd(" + m.p.get_str() + ", " + m.q.get_str() + ") != 1", std::nullopt});
  }
  if (!nodes_increasing_positive(m.nodes)) {
    out.push_back({ViolationCode::BadNodeOrder, "node parameters must be positive and increasing", 0});
  }
}

}  // namespace detail

/// Checks every structural invariant; an empty result means the diagram is valid.
inline std::vector<Violation> validate(const Diagram& dg) {
  std::vector<Violation> out;
  if (dg.is_bdpq()) {
    detail::validate_bdpq(dg.bdpq, out);
    return out;
  }

  const auto& vs = dg.vertices;
  const std::size_t n = vs.size();
  if (n < 3) {
    out.push_back({ViolationCode::TooFewVertices, "a compact diagram needs at least 3 vertices", std::nullopt});
    return out;
  }
  bool degenerate = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (vs[i] == vs[(i + 1) % n]) {
      out.push_back({ViolationCode::DuplicateVertex, "consecutive vertices coincide", i});
      degenerate = true;
    }
  }
  if (degenerate) return out;
  std::size_t negative = 0;
  for (std::size_t i = 0; i < n; ++i) {
    QVec2 e0 = vs[i] - vs[(i + n - 1) % n];
    QVec2 e1 = vs[(i + 1) % n] - vs[i];
    if (det(e0, e1).sign() <= 0) {
      ++negative;
      out.push_back({ViolationCode::NotStrictlyConvex, "vertex is not a strict left turn", i});
    }
  }
  if (negative == n) {
    out.clear();
    out.push_back({ViolationCode::NotCounterClockwise, "vertices are listed clockwise", std::nullopt});
  }
  if (!out.empty()) return out;

  const auto pieces = boundary_pieces(dg);
  std::vector<bool> cut_ok(dg.corners.size(), false);
  for (std::size_t ci = 0; ci < dg.corners.size(); ++ci) {
    const Corner& c = dg.corners[ci];
    if (c.nodes.empty()) {
      out.push_back({ViolationCode::BadMultiplicity, "corner has no nodes", ci});
      continue;
    }
    if (!detail::nodes_increasing_positive(c.nodes)) {
      out.push_back({ViolationCode::BadNodeOrder, "node parameters must be positive and increasing", ci});
      continue;
    }
    if (!c.eigendirection.is_primitive()) {
      out.push_back({ViolationCode::NotPrimitive, "eigendirection is not primitive", ci});
      continue;
    }
    if (!boundary_piece_at(pieces, c.anchor)) {
      out.push_back({ViolationCode::AnchorNotOnBoundary, "anchor is not on the boundary", ci});
      continue;
    }
    LineClip clip = clip_line(pieces, c.anchor, QVec2(c.eigendirection));
    bool enters = !clip.empty && (!clip.hi || clip.hi->sign() > 0) &&
                  region_interior(pieces, c.anchor + (clip.hi ? *clip.hi / Rat(2) : Rat(1)) *
                                                         QVec2(c.eigendirection));
    if (!enters || (clip.hi && !(c.nodes.back() < *clip.hi))) {
      out.push_back({ViolationCode::CutLeavesRegion, "branch cut leaves the region", ci});
      continue;
    }
    bool nodes_inside = true;
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
      if (!region_interior(pieces, c.node_position(k))) nodes_inside = false;
    }
    if (!nodes_inside) {
      out.push_back({ViolationCode::NodeOutsideRegion, "a node is not interior", ci});
      continue;
    }
    cut_ok[ci] = true;
  }

  for (std::size_t i = 0; i < dg.corners.size(); ++i) {
    for (std::size_t j = i + 1; j < dg.corners.size(); ++j) {
      const Corner& a = dg.corners[i];
      const Corner& b = dg.corners[j];
      if (a.anchor == b.anchor && a.eigendirection == b.eigendirection) {
        out.push_back({ViolationCode::DuplicateEigendirection, "two corners share anchor and eigendirection", j});
        continue;
      }
      if (!cut_ok[i] || !cut_ok[j]) continue;
      bool hit = segments_intersect(a.anchor, a.cut_end(), b.anchor, b.cut_end());
      if (hit && a.anchor == b.anchor) {
        // Distinct directions from a shared anchor only meet there.
        hit = det(QVec2(a.eigendirection), QVec2(b.eigendirection)).is_zero() &&
              dot(a.eigendirection, b.eigendirection) > 0;
      }
      if (hit) out.push_back({ViolationCode::CutsIntersect, "branch cuts intersect", j});
    }
  }
  return out;
}

inline void require_valid(const Diagram& dg) {
  auto v = validate(dg);
  if (!v.empty()) {
    throw Error(ErrorCode::InvalidDiagram, std::string(to_string(v.front().code)) + ": " + v.front().message);
  }
}

// ---------------------------------------------------------------------------
// Classification

struct Delzant {};
struct HostsCorners {
  std::vector<std::size_t> corners;
};
struct NonDelzantBare {};
using VertexKind = std::variant<Delzant, HostsCorners, NonDelzantBare>;

inline std::vector<std::size_t> corners_at(const Diagram& dg, const QVec2& x) {
  std::vector<std::size_t> ids;
  if (dg.is_compact()) {
    for (std::size_t i = 0; i < dg.corners.size(); ++i) {
      if (dg.corners[i].anchor == x) ids.push_back(i);
    }
  } else if (dg.bdpq.cut_side == CutSide::Inward && x == QVec2()) {
    ids.push_back(0);
  }
  return ids;
}

/// Vertex list of the region; the Outward model has none, the Inward model has the origin.
inline std::vector<QVec2> region_vertices(const Diagram& dg) {
  if (dg.is_compact()) return dg.vertices;
  if (dg.bdpq.cut_side == CutSide::Inward) return {QVec2()};
  return {};
}

inline VertexKind vertex_kind(const Diagram& dg, std::size_t vertex_index) {
  auto vs = region_vertices(dg);
  if (vertex_index >= vs.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(vertex_index) + " does not exist");
  }
  auto hosted = corners_at(dg, vs[vertex_index]);
  if (!hosted.empty()) return HostsCorners{hosted};
  const std::size_t n = vs.size();
  IVec2 u1 = primitive_direction(vs[(vertex_index + 1) % n] - vs[vertex_index]);
  IVec2 u2 = primitive_direction(vs[(vertex_index + n - 1) % n] - vs[vertex_index]);
  Int dt = det(u1, u2);
  if (dt == 1 || dt == -1) return Delzant{};
  return NonDelzantBare{};
}

inline bool is_delzant(const VertexKind& k) { return std::holds_alternative<Delzant>(k); }

/// Type (d, p, q) of a corner; q is recorded as its class in Z_p / +-1, represented in
/// [0, floor(p/2)].
struct CornerType {
  long d = 1;
  Int p = 1;
  Int q_class = 0;

  friend bool operator==(const CornerType&, const CornerType&) = default;
};

inline Int q_class_of(const Int& q, const Int& p) {
  if (p <= 1) return Int(0);
  Int r = int_mod(q, p);
  Int s = p - r;
  return r < s ? r : s;
}

/// Primitive boundary direction leaving x with the interior on its left.
inline IVec2 outgoing_boundary_direction(const Diagram& dg, const QVec2& x) {
  const auto pieces = boundary_pieces(dg);
  for (const auto& p : pieces) {
    if (p.base == x && (!p.lo || p.lo->sign() <= 0) && (!p.hi || p.hi->sign() > 0)) return p.dir;
  }
  auto idx = boundary_piece_at(pieces, x);
  if (!idx) throw Error(ErrorCode::NotACorner, "point is not on the boundary");
  return pieces[*idx].dir;
}

inline CornerType corner_type(const Diagram& dg, std::size_t corner_id) {
  if (dg.is_bdpq()) {
    if (corner_id != 0) throw Error(ErrorCode::NotACorner, "the model has a single corner");
    return {dg.bdpq.d, dg.bdpq.p, q_class_of(dg.bdpq.q, dg.bdpq.p)};
  }
  if (corner_id >= dg.corners.size()) {
    throw Error(ErrorCode::NotACorner, "corner " + std::to_string(corner_id) + " does not exist");
  }
  const Corner& c = dg.corners[corner_id];
  if (corners_at(dg, c.anchor).size() > 1) {
    throw Error(ErrorCode::NotIsolated, "corner " + std::to_string(corner_id) + " shares its vertex");
  }
  IVec2 u1 = outgoing_boundary_direction(dg, c.anchor);
  IVec2 u2 = complete_basis(u1);
  Int p = det(u1, c.eigendirection);
  Int q = det(u2, c.eigendirection);
  if (p <= 0) throw Error(ErrorCode::InvalidDiagram, "eigendirection does not point inward");
  return {static_cast<long>(c.multiplicity()), p, q_class_of(q, p)};
}

// ---------------------------------------------------------------------------
// Presets

struct PresetParams {
  Rat lambda = 3;
  Rat width = 3;
  Rat height = 2;
  Rat cap = 10;
  long d = 1;
  Int p = 1;
  Int q = 0;
  CutSide cut_side = CutSide::Outward;
  std::vector<Rat> nodes;  // bdpq only; default 1, 2, ..., d
};

/// CP^2 moment triangle (0,0), (lambda,0), (0,lambda); no corners.
inline Diagram cp2(const Rat& lambda) {
  if (lambda.sign() <= 0) throw Error(ErrorCode::BadParams, "lambda must be positive");
  Diagram dg;
  dg.vertices = {QVec2(0, 0), QVec2(lambda, 0), QVec2(0, lambda)};
  return dg;
}

inline Diagram rectangle(const Rat& width, const Rat& height) {
  if (width.sign() <= 0 || height.sign() <= 0) throw Error(ErrorCode::BadParams, "sides must be positive");
  Diagram dg;
  dg.vertices = {QVec2(0, 0), QVec2(width, 0), QVec2(width, height), QVec2(0, height)};
  return dg;
}

/// The quadrant, clipped to [0, cap]^2 for finite representation.
inline Diagram quadrant(const Rat& cap) {
  Diagram dg = rectangle(cap, cap);
  dg.quadrant_cap = cap;
  return dg;
}

inline Diagram bdpq(long d, const Int& p, const Int& q, CutSide side = CutSide::Outward,
                    std::vector<Rat> nodes = {}) {
  if (d < 1 || p < 1) throw Error(ErrorCode::BadParams, "need d >= 1 and p >= 1");
  if (int_gcd(p, q) != 1) throw Error(ErrorCode::NotCoprime, "p and q must be coprime");
  if (nodes.empty()) {
    for (long i = 1; i <= d; ++i) nodes.emplace_back(i);
  }
  Diagram dg;
  dg.kind = DiagramKind::Bdpq;
  dg.bdpq = BdpqParams{d, p, q, side, std::move(nodes)};
  if (!validate(dg).empty()) throw Error(ErrorCode::BadParams, "invalid node parameters");
  return dg;
}

inline Diagram preset(std::string_view name, const PresetParams& params = {}) {
  if (name == "cp2") return cp2(params.lambda);
  if (name == "rectangle") return rectangle(params.width, params.height);
  if (name == "quadrant") {
    if (params.cap.sign() <= 0) throw Error(ErrorCode::BadParams, "cap must be positive");
    return quadrant(params.cap);
  }
  if (name == "bdpq") return bdpq(params.d, params.p, params.q, params.cut_side, params.nodes);
  throw Error(ErrorCode::BadParams, "unknown preset '" + std::string(name) + "'");
}

}  // namespace atf
