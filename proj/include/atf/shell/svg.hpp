#pragma once

// Deterministic SVG rendering of diagrams. All geometry stays rational until the final
// formatting step, which prints fixed 12-digit decimals.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "atf/affine.hpp"
#include "atf/diagram.hpp"
#include "atf/energy.hpp"
#include "atf/errors.hpp"
#include "atf/rational.hpp"

namespace atf::shell {

struct Viewport {
  QVec2 lo;
  QVec2 hi;
};

struct RenderSpec {
  std::optional<Viewport> viewport;
  bool boundary = true;
  bool cuts = true;
  bool nodes = true;
  bool crease = true;
  std::vector<Rat> levels;
  /// Cut changes assumed for the energy field of the half-plane model; defaults to 0 for
  /// the outward model and d for the inward one.
  std::optional<long> flipped_k;
};

inline constexpr unsigned kSvgDigits = 12;

namespace detail {

using Polyline = std::vector<QVec2>;

/// Sutherland-Hodgman clip of a convex polygon by {x : det(dir, x - base) >= 0}.
inline Polyline clip_polygon(const Polyline& poly, const QVec2& base, const QVec2& dir) {
  Polyline out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const QVec2& a = poly[i];
    const QVec2& b = poly[(i + 1) % n];
    Rat fa = det(dir, a - base);
    Rat fb = det(dir, b - base);
    if (fa.sign() >= 0) out.push_back(a);
    if ((fa.sign() > 0 && fb.sign() < 0) || (fa.sign() < 0 && fb.sign() > 0)) {
      Rat t = fa / (fa - fb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

/// Clips segment [a, b] to the viewport (Liang-Barsky, exact).
inline std::optional<std::pair<QVec2, QVec2>> clip_segment(const QVec2& a, const QVec2& b, const Viewport& vp) {
  Rat t0 = 0, t1 = 1;
  QVec2 d = b - a;
  auto edge = [&](const Rat& p, const Rat& q) {
    // p t <= q
    if (p.is_zero()) return q.sign() >= 0;
    Rat r = q / p;
    if (p.sign() < 0) {
      if (t1 < r) return false;
      if (t0 < r) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
    return true;
  };
  if (!edge(-d.x, a.x - vp.lo.x) || !edge(d.x, vp.hi.x - a.x) || !edge(-d.y, a.y - vp.lo.y) ||
      !edge(d.y, vp.hi.y - a.y)) {
    return std::nullopt;
  }
  return std::make_pair(a + t0 * d, a + t1 * d);
}

inline std::vector<Polyline> clip_polyline(const Polyline& pts, const Viewport& vp) {
  std::vector<Polyline> out;
  Polyline cur;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto seg = clip_segment(pts[i], pts[i + 1], vp);
    if (!seg) {
      if (cur.size() >= 2) out.push_back(cur);
      cur.clear();
      continue;
    }
    if (cur.empty() || cur.back() != seg->first) {
      if (cur.size() >= 2) out.push_back(cur);
      cur = {seg->first};
    }
    cur.push_back(seg->second);
  }
  if (cur.size() >= 2) out.push_back(cur);
  return out;
}

inline Viewport default_viewport(const Diagram& dg, const RenderSpec& spec) {
  if (dg.is_compact()) {
    QVec2 lo = dg.vertices.front(), hi = dg.vertices.front();
    for (const auto& v : dg.vertices) {
      lo = {min(lo.x, v.x), min(lo.y, v.y)};
      hi = {max(hi.x, v.x), max(hi.y, v.y)};
    }
    Rat pad = max(hi.x - lo.x, hi.y - lo.y) / Rat(20);
    return {lo - QVec2(pad, pad), hi + QVec2(pad, pad)};
  }
  Rat m = 2;
  Rat ylo = 0, yhi = 0;
  for (const auto& t : dg.bdpq.nodes) {
    QVec2 x = t * QVec2(dg.bdpq.ray());
    m = max(m, x.x);
    ylo = min(ylo, x.y);
    yhi = max(yhi, x.y);
  }
  for (const auto& c : spec.levels) m = max(m, c);
  m = m * Rat(3, 2);
  return {QVec2(-m / Rat(8), min(-m, ylo - m / Rat(4))), QVec2(m, max(m, yhi + m / Rat(4)))};
}

/// Level set {e = c} of the model's energy field, before clipping.
inline Polyline bdpq_level_set(const BdpqParams& m, long k, const Rat& c, const Viewport& vp) {
  // The sheared lower ray moves at least as fast as the vertical one, so this leaves the frame.
  Rat reach = (vp.hi.y - vp.lo.y) + (vp.hi.x - vp.lo.x) + c.abs();
  IVec2 v(Int(-m.p), Int(-m.q));
  QVec2 top(c, vp.hi.y + reach);
  QVec2 bend(c, c * Rat(m.q) / Rat(m.p));
  QVec2 bottom(c, vp.lo.y - reach);
  return {half_shear(v, Int(k), QVec2(), top, Side::Left), bend, half_shear(v, Int(k), QVec2(), bottom, Side::Left)};
}

class SvgWriter {
 public:
  explicit SvgWriter(const Viewport& vp) : vp_(vp) {
    Rat w = vp.hi.x - vp.lo.x;
    Rat h = vp.hi.y - vp.lo.y;
    stroke_ = max(w, h) / Rat(250);
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(vp.lo.x) << " "
        << num(-vp.hi.y) << " " << num(w) << " " << num(h) << "\">\n";
  }

  std::string num(const Rat& r) const { return r.to_fixed(kSvgDigits); }
  std::string pt(const QVec2& p) const { return num(p.x) + "," + num(-p.y); }

  void open_group(const std::string& cls, const std::string& style) {
    os_ << "<g class=\"" << cls << "\" " << style << ">\n";
  }
  void close_group() { os_ << "</g>\n"; }

  void polygon(const Polyline& pts, const std::string& attrs) {
    os_ << "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) os_ << (i ? " " : "") << pt(pts[i]);
    os_ << "\" " << attrs << "/>\n";
  }
  void polyline(const Polyline& pts, const std::string& attrs = "") {
    os_ << "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) os_ << (i ? " " : "") << pt(pts[i]);
    os_ << "\"" << (attrs.empty() ? "" : " " + attrs) << "/>\n";
  }
  void cross(const QVec2& c) {
    Rat r = stroke_ * Rat(3);
    os_ << "<path d=\"M" << pt(c + QVec2(-r, -r)) << " L" << pt(c + QVec2(r, r)) << " M" << pt(c + QVec2(-r, r))
        << " L" << pt(c + QVec2(r, -r)) << "\"/>\n";
  }
  std::string stroke_width(long factor = 1) const { return num(stroke_ * Rat(factor)); }
  void raw(const std::string& s) { os_ << s; }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  Viewport vp_;
  Rat stroke_;
  std::ostringstream os_;
};

}  // namespace detail

inline std::string render_svg(const Diagram& dg, const RenderSpec& spec = {}) {
  for (const auto& c : spec.levels) {
    if (c.sign() <= 0) throw Error(ErrorCode::BadParams, "level values must be positive");
  }
  Viewport vp = spec.viewport ? *spec.viewport : detail::default_viewport(dg, spec);
  if (!(vp.lo.x < vp.hi.x) || !(vp.lo.y < vp.hi.y)) throw Error(ErrorCode::EmptyViewport, "viewport has no area");

  const auto pieces = boundary_pieces(dg);
  detail::Polyline region{vp.lo, QVec2(vp.hi.x, vp.lo.y), vp.hi, QVec2(vp.lo.x, vp.hi.y)};
  for (const auto& p : pieces) {
    region = detail::clip_polygon(region, p.base, QVec2(p.dir));
    if (region.empty()) break;
  }

  detail::SvgWriter w(vp);
  const std::string sw = w.stroke_width();
  w.raw("<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"" + w.stroke_width(8) + "\" height=\"" +
        w.stroke_width(8) + "\"><path d=\"M0,0 L" + w.stroke_width(8) + "," + w.stroke_width(8) +
        "\" stroke=\"#999999\" stroke-width=\"" + sw + "\"/></pattern></defs>\n");

  if (!region.empty()) {
    w.open_group("region", "fill=\"#f4f1e8\" stroke=\"none\"");
    w.polygon(region, "");
    w.close_group();
  }

  // Open sides: stretches of the clipped region lying on the viewport frame.
  const bool unbounded = !dg.is_compact() || dg.quadrant_cap.has_value();
  if (unbounded && !region.empty()) {
    w.open_group("unbounded", "fill=\"none\" stroke=\"url(#hatch)\" stroke-width=\"" + w.stroke_width(8) + "\"");
    const std::size_t n = region.size();
    for (std::size_t i = 0; i < n; ++i) {
      const QVec2& a = region[i];
      const QVec2& b = region[(i + 1) % n];
      bool on_frame = (a.x == b.x && (a.x == vp.lo.x || a.x == vp.hi.x)) ||
                      (a.y == b.y && (a.y == vp.lo.y || a.y == vp.hi.y));
      if (dg.quadrant_cap) {
        const Rat& cap = *dg.quadrant_cap;
        on_frame = on_frame || (a.x == cap && b.x == cap) || (a.y == cap && b.y == cap);
      }
      if (on_frame) w.polyline({a, b});
    }
    w.close_group();
  }

  if (spec.boundary) {
    w.open_group("boundary", "fill=\"none\" stroke=\"#000000\" stroke-width=\"" + sw + "\"");
    if (dg.is_compact() && !dg.quadrant_cap) {
      w.polygon(dg.vertices, "");
    } else {
      Rat reach = (vp.hi.x - vp.lo.x) + (vp.hi.y - vp.lo.y);
      for (const auto& p : pieces) {
        if (p.artificial) continue;
        Rat r = reach + (p.base.x - vp.lo.x).abs() + (p.base.y - vp.lo.y).abs();
        Rat lo = p.lo ? *p.lo : -r;
        Rat hi = p.hi ? *p.hi : r;
        for (const auto& part : detail::clip_polyline({p.at(lo), p.at(hi)}, vp)) w.polyline(part);
      }
    }
    w.close_group();
  }

  if (spec.levels.size() && (dg.is_bdpq() || dg.quadrant_cap)) {
    w.open_group("levels", "fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"" + sw + "\"");
    for (const auto& c : spec.levels) {
      detail::Polyline line;
      if (dg.is_bdpq()) {
        long k = spec.flipped_k ? *spec.flipped_k : (dg.bdpq.cut_side == CutSide::Inward ? dg.bdpq.d : 0);
        line = detail::bdpq_level_set(dg.bdpq, k, c, vp);
      } else {
        const Rat& cap = *dg.quadrant_cap;
        line = {QVec2(c, cap), QVec2(c, c), QVec2(cap, c)};
      }
      for (const auto& part : detail::clip_polyline(line, vp)) w.polyline(part);
    }
    w.close_group();
  }

  if (spec.crease && (dg.is_bdpq() || dg.quadrant_cap)) {
    w.open_group("crease", "fill=\"none\" stroke=\"#a83a1f\" stroke-width=\"" + sw + "\" stroke-dasharray=\"" +
                               w.stroke_width(2) + "," + w.stroke_width(2) + "\"");
    Rat reach = (vp.hi.x - vp.lo.x) + (vp.hi.y - vp.lo.y) + vp.lo.x.abs() + vp.lo.y.abs();
    QVec2 dir = dg.is_bdpq() ? QVec2(dg.bdpq.ray()) : QVec2(IVec2(1, 1));
    for (const auto& part : detail::clip_polyline({QVec2(), reach * dir}, vp)) w.polyline(part);
    w.close_group();
  }

  const auto views = corner_views(dg);
  if (spec.cuts) {
    w.open_group("cuts", "fill=\"none\" stroke=\"#000000\" stroke-width=\"" + sw + "\" stroke-dasharray=\"" +
                             w.stroke_width(4) + "," + w.stroke_width(3) + "\"");
    for (const auto& view : views) {
      const Corner& c = view.corner;
      QVec2 from = c.anchor, to = c.cut_end();
      if (view.outward) {
        from = c.cut_end();
        Rat reach = (vp.hi.x - vp.lo.x) + (vp.hi.y - vp.lo.y) + (from.x - vp.lo.x).abs() + (from.y - vp.lo.y).abs();
        to = from + reach * QVec2(c.eigendirection);
      }
      for (const auto& part : detail::clip_polyline({from, to}, vp)) w.polyline(part);
    }
    w.close_group();
  }

  if (spec.nodes) {
    w.open_group("nodes", "fill=\"none\" stroke=\"#000000\" stroke-width=\"" + sw + "\"");
    for (const auto& view : views) {
      for (std::size_t i = 0; i < view.corner.nodes.size(); ++i) {
        QVec2 x = view.corner.node_position(i);
        if (vp.lo.x <= x.x && x.x <= vp.hi.x && vp.lo.y <= x.y && x.y <= vp.hi.y) w.cross(x);
      }
    }
    w.close_group();
  }
  return w.finish();
}

}  // namespace atf::shell
