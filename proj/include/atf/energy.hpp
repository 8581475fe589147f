#pragma once

// Displacement-energy data: probe upper bounds, the exact energy field on the half-plane
// model, fibre germs b -> a + min <g, b>, their GL(2,Z) normal form and equivalence.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atf/affine.hpp"
#include "atf/diagram.hpp"
#include "atf/errors.hpp"
#include "atf/moves.hpp"
#include "atf/rational.hpp"

namespace atf {

// ---------------------------------------------------------------------------
// Germs

/// Pointed piecewise-linear function b -> base + min over gradients of <g, b>.
/// Gradients are kept sorted and free of repeats.
struct PLGerm {
  Rat base;
  std::vector<QVec2> gradients;

  PLGerm() = default;
  PLGerm(Rat a, std::vector<QVec2> gs) : base(std::move(a)), gradients(std::move(gs)) {
    std::sort(gradients.begin(), gradients.end());
    gradients.erase(std::unique(gradients.begin(), gradients.end()), gradients.end());
    if (gradients.empty()) throw Error(ErrorCode::BadParams, "a germ needs at least one gradient");
  }

  Rat operator()(const QVec2& b) const {
    Rat best = dot(gradients.front(), b);
    for (const auto& g : gradients) best = min(best, dot(g, b));
    return base + best;
  }

  bool is_integral() const {
    return std::all_of(gradients.begin(), gradients.end(),
                       [](const QVec2& g) { return g.x.is_integer() && g.y.is_integer(); });
  }

  friend bool operator==(const PLGerm&, const PLGerm&) = default;
};

inline IVec2 to_ivec(const QVec2& g) {
  if (!g.x.is_integer() || !g.y.is_integer()) throw Error(ErrorCode::BadParams, "gradient is not integral");
  return {g.x.num(), g.y.num()};
}

/// Pulls a germ back along b -> phi b: gradients become phi^T g.
inline PLGerm compose(const PLGerm& g, const IMat2& phi) {
  std::vector<QVec2> gs;
  IMat2 t = phi.transpose();
  for (const auto& h : g.gradients) gs.push_back(t * h);
  return {g.base, gs};
}

/// Displacement-energy germ of the fibre over x_a after k cut changes:
/// a + min{b1, b1 (1 - kpq) + b2 k p^2}.
inline PLGerm germ_of_fibre(const Int& p, const Int& q, long k, const Rat& a) {
  if (p < 1 || k < 0 || a.sign() <= 0) throw Error(ErrorCode::BadParams, "need p >= 1, k >= 0, a > 0");
  if (int_gcd(p, q) != 1) throw Error(ErrorCode::BadParams, "p and q must be coprime");
  Int kk(k);
  return {a, {QVec2(IVec2(1, 0)), QVec2(IVec2(Int(1 - kk * p * q), Int(kk * p * p)))}};
}

struct GermClass {
  Rat a;
  long k = 0;
  Int p = 1;
  Int q_class = 0;

  /// Equal as invariants: k = 0 forgets p and q.
  bool same_invariants(const GermClass& o) const {
    if (a != o.a || k != o.k) return false;
    return k == 0 || (p == o.p && q_class == o.q_class);
  }
  friend bool operator==(const GermClass&, const GermClass&) = default;
};

/// All unimodular phi with g1 o phi = g2 as functions, for germs whose gradients span the
/// plane or consist of a single primitive vector (the single-gradient case returns one
/// representative). Entries are not bounded.
inline std::vector<IMat2> solve_witnesses(const PLGerm& g1, const PLGerm& g2) {
  std::vector<IMat2> out;
  if (g1.base != g2.base || g1.gradients.size() != g2.gradients.size()) return out;
  if (!g1.is_integral() || !g2.is_integral()) return out;
  auto basis_matrix = [](const IVec2& c0, const IVec2& c1) { return IMat2{c0.x, c1.x, c0.y, c1.y}; };
  if (g1.gradients.size() == 1) {
    IVec2 h = to_ivec(g1.gradients[0]);
    IVec2 h2 = to_ivec(g2.gradients[0]);
    if (!h.is_primitive() || !h2.is_primitive()) return out;
    IMat2 a = basis_matrix(h, complete_basis(h));
    IMat2 b = basis_matrix(h2, complete_basis(h2));
    IMat2 m = b * a.unimodular_inverse();  // m h = h2
    out.push_back(m.transpose());
    return out;
  }
  if (g1.gradients.size() != 2) return out;
  IVec2 a0 = to_ivec(g1.gradients[0]), a1 = to_ivec(g1.gradients[1]);
  IVec2 b0 = to_ivec(g2.gradients[0]), b1 = to_ivec(g2.gradients[1]);
  Int da = det(a0, a1);
  if (da == 0) return out;
  for (int swap = 0; swap < 2; ++swap) {
    IVec2 c0 = swap ? b1 : b0;
    IVec2 c1 = swap ? b0 : b1;
    // m [a0 a1] = [c0 c1]  =>  m = [c0 c1] adj([a0 a1]) / da
    IMat2 adj{a1.y, Int(-a1.x), Int(-a0.y), a0.x};
    IMat2 num = basis_matrix(c0, c1) * adj;
    Int entries[4] = {num.a, num.b, num.c, num.d};
    bool integral = true;
    for (const auto& e : entries) integral = integral && int_mod(e, da) == 0;
    if (!integral) continue;
    IMat2 m{Int(num.a / da), Int(num.b / da), Int(num.c / da), Int(num.d / da)};
    if (m.is_unimodular()) out.push_back(m.transpose());
  }
  return out;
}

inline Int max_abs_entry(const IMat2& m) {
  Int r = int_abs(m.a);
  for (const Int* e : {&m.b, &m.c, &m.d}) r = std::max(r, int_abs(*e));
  return r;
}

/// GL(2,Z) normal form (a, k, p, [q]) of a germ from the fibre family.
inline GermClass germ_normal_form(const PLGerm& g) {
  if (!g.is_integral() || g.gradients.size() > 2) {
    throw Error(ErrorCode::NotAGermOfEq18, "germ is not a minimum of at most two integral functionals");
  }
  if (g.gradients.size() == 1) {
    if (!to_ivec(g.gradients[0]).is_primitive()) throw Error(ErrorCode::NotAGermOfEq18, "gradient is not primitive");
    return {g.base, 0, Int(1), Int(0)};
  }
  IVec2 g1 = to_ivec(g.gradients[0]), g2 = to_ivec(g.gradients[1]);
  Int D = int_abs(det(g1, g2));
  IVec2 diff = g1 - g2;
  Int c = int_gcd(diff.x, diff.y);
  if (D == 0 || int_mod(D, c) != 0) throw Error(ErrorCode::NotAGermOfEq18, "crease data is inconsistent");
  Int p = D / c;
  if (int_mod(D, Int(p * p)) != 0) throw Error(ErrorCode::NotAGermOfEq18, "|det| is not divisible by p^2");
  Int kk = D / (p * p);
  if (!kk.fits_slong_p()) throw Error(ErrorCode::NotAGermOfEq18, "k out of range");
  const long k = kk.get_si();
  for (int order = 0; order < 2; ++order) {
    IVec2 first = order ? g2 : g1;
    IVec2 second = order ? g1 : g2;
    if (!first.is_primitive()) continue;
    IVec2 r(Int((first.x - second.x) / (kk * p)), Int((first.y - second.y) / (kk * p)));
    if (int_mod(det(first, r), p) != 0) continue;
    Int q = int_mod(det(r, complete_basis(first)), p);
    if (int_gcd(p, q) != 1) continue;
    GermClass cls{g.base, k, p, q_class_of(q, p)};
    if (!solve_witnesses(germ_of_fibre(p, q, k, g.base), g).empty()) return cls;
  }
  throw Error(ErrorCode::NotAGermOfEq18, "no fibre germ matches");
}

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<IMat2> witness;
};

inline constexpr long kDefaultBruteBound = 8;

namespace detail {

/// Unimodular matrices with entries in [-bound, bound]: identity first, then by L1 norm
/// and lexicographically. Cached per bound.
inline const std::vector<IMat2>& unimodular_table(long bound) {
  static std::mutex mu;
  static std::map<long, std::vector<IMat2>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(bound);
  if (it != cache.end()) return it->second;
  struct Entry {
    long l1;
    long e[4];
  };
  std::vector<Entry> es;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c)
        for (long d = -bound; d <= bound; ++d) {
          long dt = a * d - b * c;
          if (dt != 1 && dt != -1) continue;
          es.push_back({std::labs(a) + std::labs(b) + std::labs(c) + std::labs(d), {a, b, c, d}});
        }
  auto is_identity = [](const Entry& x) { return x.e[0] == 1 && x.e[1] == 0 && x.e[2] == 0 && x.e[3] == 1; };
  std::sort(es.begin(), es.end(), [&](const Entry& x, const Entry& y) {
    if (is_identity(x) != is_identity(y)) return is_identity(x);
    if (x.l1 != y.l1) return x.l1 < y.l1;
    return std::lexicographical_compare(x.e, x.e + 4, y.e, y.e + 4);
  });
  std::vector<IMat2> ms;
  ms.reserve(es.size());
  for (const auto& x : es) ms.push_back({Int(x.e[0]), Int(x.e[1]), Int(x.e[2]), Int(x.e[3])});
  return cache.emplace(bound, std::move(ms)).first->second;
}

}  // namespace detail

/// Exhaustive search for unimodular phi (entries bounded) with g1 o phi = g2.
inline std::optional<IMat2> brute_force_equiv(const PLGerm& g1, const PLGerm& g2, long entry_bound = kDefaultBruteBound) {
  if (entry_bound < 1) throw Error(ErrorCode::BadParams, "entry bound must be positive");
  if (g1.base != g2.base || g1.gradients.size() != g2.gradients.size()) return std::nullopt;
  const auto& table = detail::unimodular_table(entry_bound);
  const std::size_t n = g1.gradients.size();

  // Small integral inputs take a machine-integer path; the search itself is identical.
  bool small = g1.is_integral() && g2.is_integral();
  const long limit = 1L << 24;
  std::vector<std::int64_t> a, b;
  if (small) {
    for (const auto* g : {&g1, &g2}) {
      for (const auto& h : g->gradients) {
        for (const Rat* r : {&h.x, &h.y}) {
          if (int_abs(r->num()) >= limit) small = false;
        }
      }
    }
  }
  if (small) {
    for (const auto& h : g1.gradients) a.insert(a.end(), {h.x.num().get_si(), h.y.num().get_si()});
    for (const auto& h : g2.gradients) b.insert(b.end(), {h.x.num().get_si(), h.y.num().get_si()});
    std::vector<std::pair<std::int64_t, std::int64_t>> target;
    for (std::size_t i = 0; i < n; ++i) target.emplace_back(b[2 * i], b[2 * i + 1]);
    std::sort(target.begin(), target.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> img(n);
    for (const auto& m : table) {
      const std::int64_t ma = m.a.get_si(), mb = m.b.get_si(), mc = m.c.get_si(), md = m.d.get_si();
      for (std::size_t i = 0; i < n; ++i) {
        // phi^T g
        img[i] = {ma * a[2 * i] + mc * a[2 * i + 1], mb * a[2 * i] + md * a[2 * i + 1]};
      }
      std::sort(img.begin(), img.end());
      if (img == target) return m;
    }
    return std::nullopt;
  }
  for (const auto& m : table) {
    if (compose(g1, m) == g2) return m;
  }
  return std::nullopt;
}

/// Decides equivalence from normal forms; the witness comes from the exact assignment
/// solver, falling back to bounded brute force for germs outside the fibre family.
inline EquivalenceResult germ_equivalent(const PLGerm& g1, const PLGerm& g2, long brute_bound = kDefaultBruteBound) {
  std::optional<GermClass> c1, c2;
  try {
    c1 = germ_normal_form(g1);
    c2 = germ_normal_form(g2);
  } catch (const Error&) {
    c1.reset();
  }
  if (c1 && c2) {
    if (!c1->same_invariants(*c2)) return {false, std::nullopt};
    auto ws = solve_witnesses(g1, g2);
    if (ws.empty()) throw Error(ErrorCode::NotAGermOfEq18, "normal forms agree but no witness exists");
    auto best = std::min_element(ws.begin(), ws.end(), [](const IMat2& x, const IMat2& y) {
      return max_abs_entry(x) < max_abs_entry(y);
    });
    return {true, *best};
  }
  auto ws = solve_witnesses(g1, g2);
  if (!ws.empty()) return {true, ws.front()};
  auto w = brute_force_equiv(g1, g2, brute_bound);
  return {w.has_value(), w};
}

/// Human-readable form, e.g. "1 + min{b1, b2}".
inline std::string germ_to_string(const PLGerm& g) {
  auto term = [](const QVec2& h) {
    std::string s;
    auto add = [&](const Rat& c, const char* var) {
      if (c.is_zero()) return;
      bool neg = c.sign() < 0;
      Rat m = c.abs();
      if (s.empty()) {
        s += neg ? "-" : "";
      } else {
        s += neg ? " - " : " + ";
      }
      if (m != Rat(1)) s += m.str() + "*";
      s += var;
    };
    add(h.x, "b1");
    add(h.y, "b2");
    return s.empty() ? std::string("0") : s;
  };
  std::string body;
  if (g.gradients.size() == 1) {
    body = term(g.gradients[0]);
  } else {
    // Lead with the coordinate functional when present, as the formula is usually written.
    std::vector<QVec2> gs = g.gradients;
    std::stable_partition(gs.begin(), gs.end(), [](const QVec2& h) { return h == QVec2(IVec2(1, 0)); });
    body = "min{";
    for (std::size_t i = 0; i < gs.size(); ++i) body += (i ? ", " : "") + term(gs[i]);
    body += "}";
  }
  return g.base.str() + " + " + body;
}

// ---------------------------------------------------------------------------
// Probes

namespace detail {

inline bool piece_is_artificial(const std::vector<BoundaryPiece>& pieces, const std::vector<std::size_t>& ids) {
  return std::any_of(ids.begin(), ids.end(), [&](std::size_t i) { return pieces[i].artificial; });
}

inline bool on_any_segment(const std::vector<std::pair<QVec2, QVec2>>& segs, const QVec2& x) {
  return std::any_of(segs.begin(), segs.end(),
                     [&](const auto& s) { return detail::on_segment(s.first, s.second, x); });
}

}  // namespace detail

/// Probe displacement bound for the fibre over x along primitive direction w: the affine
/// distance from the entry point when x sits on the near half of the probe.
inline std::optional<Rat> probe_bound(const Diagram& dg, const QVec2& x, const IVec2& w) {
  if (!w.is_primitive()) throw Error(ErrorCode::BadParams, "probe direction must be primitive");
  const auto pieces = boundary_pieces(dg);
  if (!region_interior(pieces, x)) throw Error(ErrorCode::OutOfRegion, "probe point is not interior");
  LineClip clip = clip_line(pieces, x, QVec2(w));
  if (clip.empty || !clip.lo) return std::nullopt;
  if (detail::piece_is_artificial(pieces, clip.lo_pieces)) return std::nullopt;
  if (clip.lo_pieces.size() != 1) throw Error(ErrorCode::NotIntegrallyTransversal, "probe enters at a vertex");
  const IVec2& f = pieces[clip.lo_pieces.front()].dir;
  Int dt = det(f, w);
  if (dt != 1 && dt != -1) throw Error(ErrorCode::NotIntegrallyTransversal, "|det(f, w)| != 1 at the entry edge");

  const Rat t = -*clip.lo;  // w primitive: parameter difference is affine length
  const QVec2 entry = x + *clip.lo * QVec2(w);
  std::optional<Rat> length;
  if (clip.hi && !detail::piece_is_artificial(pieces, clip.hi_pieces)) length = *clip.hi - *clip.lo;

  // The probe must avoid nodes and cuts. Clear along a compact stretch of it: the whole
  // probe when finite, else far enough to pass every eigenline crossing.
  Rat far = clip.hi ? *clip.hi : Rat(1);
  if (!clip.hi) {
    for (const auto& view : corner_views(dg)) {
      const Corner& c = view.corner;
      QVec2 u(c.eigendirection);
      Rat den = det(QVec2(w), u);
      if (den.is_zero()) continue;
      Rat s = det(c.anchor - x, u) / den;
      far = max(far, s + Rat(1));
    }
    for (const auto& view : corner_views(dg)) {
      for (std::size_t i = 0; i < view.corner.nodes.size(); ++i) {
        QVec2 rel = view.corner.node_position(i) - x;
        far = max(far, dot(rel, QVec2(w)) + Rat(1));
      }
    }
  }
  std::vector<std::pair<QVec2, QVec2>> swept;
  clear_region(dg, {entry, x + far * QVec2(w)}, &swept);
  if (detail::on_any_segment(swept, x)) {
    throw Error(ErrorCode::Unclearable, "clearing the probe would move a node across the fibre");
  }
  if (length && !(t * Rat(2) < *length)) return std::nullopt;
  return t;
}

/// Minimum probe bound over all primitive directions with max-norm <= search_bound.
inline std::optional<Rat> best_probe_bound(const Diagram& dg, const QVec2& x, long search_bound) {
  if (search_bound < 1) throw Error(ErrorCode::BadParams, "search bound must be positive");
  if (!interior(dg, x)) throw Error(ErrorCode::OutOfRegion, "probe point is not interior");
  std::optional<Rat> best;
  for (long a = -search_bound; a <= search_bound; ++a) {
    for (long b = -search_bound; b <= search_bound; ++b) {
      IVec2 w(a, b);
      if (!w.is_primitive()) continue;
      try {
        if (auto t = probe_bound(dg, x, w); t && (!best || *t < *best)) best = t;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotIntegrallyTransversal && e.code() != ErrorCode::Unclearable) throw;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Energy field on the half-plane model

struct Exact {
  Rat value;
};
struct UpperBound {
  Rat value;
};
struct Unknown {};
using EnergyValue = std::variant<Exact, UpperBound, Unknown>;

/// Preimage of y in the unflipped model, for the model with flipped_k cut changes.
inline QVec2 unflip(const BdpqParams& m, const QVec2& y, long flipped_k) {
  IVec2 v(Int(-m.p), Int(-m.q));
  return half_shear(v, Int(-flipped_k), QVec2(), y, Side::Left);
}

/// Displacement energy of the fibre over y in the model after flipped_k cut changes: the
/// first coordinate of the unflipped point, unknown on the ray R.
inline EnergyValue energy_at(const Diagram& model, const QVec2& y, long flipped_k) {
  if (!model.is_bdpq()) throw Error(ErrorCode::UnsupportedRegion, "energy field needs the half-plane model");
  const BdpqParams& m = model.bdpq;
  if (flipped_k < 0 || flipped_k > m.d) throw Error(ErrorCode::BadParams, "flipped_k must lie in [0, d]");
  if (m.cut_side == CutSide::Inward && flipped_k != m.d) {
    throw Error(ErrorCode::BadParams, "the inward model has all d cuts changed");
  }
  QVec2 x = unflip(m, y, flipped_k);
  if (x.x.sign() <= 0) throw Error(ErrorCode::OutOfRegion, "point is not interior");
  bool on_ray = det(QVec2(m.ray()), x).is_zero();
  if (!on_ray) return Exact{x.x};
  if (flipped_k == 0) {
    Diagram outward = model;
    outward.bdpq.cut_side = CutSide::Outward;
    try {
      if (auto t = probe_bound(outward, x, IVec2(1, 0))) return UpperBound{*t};
    } catch (const Error&) {
    }
  }
  return Unknown{};
}

inline std::string to_string(const EnergyValue& e) {
  if (auto* x = std::get_if<Exact>(&e)) return "exact " + x->value.str();
  if (auto* u = std::get_if<UpperBound>(&e)) return "at most " + u->value.str();
  return "unknown";
}

/// Fibre base point x_a = (a, a q / p) on R.
inline QVec2 fibre_point(const BdpqParams& m, const Rat& a) { return {a, a * Rat(m.q) / Rat(m.p)}; }

/// Local energy germ at y: on the half-plane model after flipped_k cut changes (the fibre
/// germ on R, linear elsewhere) or on the capped quadrant, where the energy is min{x1, x2}.
inline std::pair<PLGerm, GermClass> germ_at(const Diagram& dg, const QVec2& y, long flipped_k) {
  PLGerm g;
  if (dg.is_bdpq()) {
    const BdpqParams& m = dg.bdpq;
    if (flipped_k < 0 || flipped_k > m.d) throw Error(ErrorCode::BadParams, "flipped_k must lie in [0, d]");
    if (m.cut_side == CutSide::Inward && flipped_k != m.d) {
      throw Error(ErrorCode::BadParams, "the inward model has all d cuts changed");
    }
    if (y.x.sign() <= 0) throw Error(ErrorCode::OutOfRegion, "point is not interior");
    Rat side = det(QVec2(IVec2(Int(-m.p), Int(-m.q))), y);
    IMat2 s = shear_matrix(IVec2(Int(-m.p), Int(-m.q)), Int(-flipped_k));
    QVec2 moved(IVec2(s.a, s.b));
    if (side.is_zero()) {
      g = germ_of_fibre(m.p, m.q, flipped_k, y.x);
    } else if (side.sign() > 0) {
      g = PLGerm(dot(moved, y), {moved});
    } else {
      g = PLGerm(y.x, {QVec2(IVec2(1, 0))});
    }
  } else if (dg.quadrant_cap) {
    if (!interior(dg, y)) throw Error(ErrorCode::OutOfRegion, "point is not interior");
    std::vector<QVec2> gs;
    if (y.x <= y.y) gs.emplace_back(IVec2(1, 0));
    if (y.y <= y.x) gs.emplace_back(IVec2(0, 1));
    g = PLGerm(min(y.x, y.y), gs);
  } else {
    throw Error(ErrorCode::UnsupportedRegion, "germs are available on the half-plane model and the quadrant");
  }
  return {g, germ_normal_form(g)};
}

}  // namespace atf
