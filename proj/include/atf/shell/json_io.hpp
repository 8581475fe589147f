#pragma once

// JSON encoding of diagrams, germs, moves and traces. Rationals are strings ("num/den" or
// "num"); integers are numbers when they fit in 64 bits and strings otherwise. Both forms
// are accepted on input.

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

#include "atf/diagram.hpp"
#include "atf/energy.hpp"
#include "atf/errors.hpp"
#include "atf/moves.hpp"
#include "atf/rational.hpp"
#include "atf/walker.hpp"

namespace atf::shell {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars

inline json to_json(const Rat& r) { return r.str(); }

inline json int_to_json(const Int& v) {
  if (auto x = int_to_i64(v)) return *x;
  return v.get_str();
}

inline Rat rat_from_json(const json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_array() && j.size() == 1) return rat_from_json(j[0]);
  throw Error(ErrorCode::Parse, "expected a rational, got " + j.dump());
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw Error(ErrorCode::Parse, "expected an integer, got " + j.dump());
}

inline json to_json(const IVec2& v) { return json::array({int_to_json(v.x), int_to_json(v.y)}); }
inline json to_json(const QVec2& v) { return json::array({v.x.str(), v.y.str()}); }

inline IVec2 ivec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "expected [x, y], got " + j.dump());
  return {int_from_json(j[0]), int_from_json(j[1])};
}

inline QVec2 qvec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "expected [x, y], got " + j.dump());
  return {rat_from_json(j[0]), rat_from_json(j[1])};
}

inline json to_json(const IMat2& m) {
  return json::array({json::array({int_to_json(m.a), int_to_json(m.b)}),
                      json::array({int_to_json(m.c), int_to_json(m.d)})});
}

inline IMat2 imat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "expected [[a, b], [c, d]]");
  IVec2 r0 = ivec_from_json(j[0]);
  IVec2 r1 = ivec_from_json(j[1]);
  return {r0.x, r0.y, r1.x, r1.y};
}

// ---------------------------------------------------------------------------
// Diagrams

inline std::string to_string(CutSide s) { return s == CutSide::Outward ? "outward" : "inward"; }

inline CutSide cut_side_from_string(const std::string& s) {
  if (s == "outward") return CutSide::Outward;
  if (s == "inward") return CutSide::Inward;
  throw Error(ErrorCode::Parse, "cut_side must be 'outward' or 'inward'");
}

inline json rats_to_json(const std::vector<Rat>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(r.str());
  return a;
}

inline std::vector<Rat> rats_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "expected a list of rationals");
  std::vector<Rat> out;
  for (const auto& x : j) out.push_back(rat_from_json(x));
  return out;
}

inline json to_json(const Diagram& dg) {
  json j;
  if (dg.is_compact()) {
    j["kind"] = "compact";
    json vs = json::array();
    for (const auto& v : dg.vertices) vs.push_back(to_json(v));
    j["vertices"] = vs;
    json cs = json::array();
    for (const auto& c : dg.corners) {
      cs.push_back({{"anchor", to_json(c.anchor)}, {"v", to_json(c.eigendirection)}, {"nodes", rats_to_json(c.nodes)}});
    }
    j["corners"] = cs;
    if (dg.quadrant_cap) j["quadrant_cap"] = dg.quadrant_cap->str();
  } else {
    const auto& m = dg.bdpq;
    j["kind"] = "bdpq";
    j["bdpq"] = {{"d", m.d},
                 {"p", int_to_json(m.p)},
                 {"q", int_to_json(m.q)},
                 {"cut_side", to_string(m.cut_side)},
                 {"nodes", rats_to_json(m.nodes)}};
  }
  return j;
}

inline Diagram diagram_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "diagram must be a JSON object");
  Diagram dg;
  std::string kind = j.value("kind", "compact");
  if (kind == "compact") {
    for (const auto& v : j.at("vertices")) dg.vertices.push_back(qvec_from_json(v));
    if (j.contains("corners")) {
      for (const auto& c : j.at("corners")) {
        dg.corners.push_back(Corner{qvec_from_json(c.at("anchor")), ivec_from_json(c.at("v")), rats_from_json(c.at("nodes"))});
      }
    }
    if (j.contains("quadrant_cap")) dg.quadrant_cap = rat_from_json(j.at("quadrant_cap"));
  } else if (kind == "bdpq") {
    const json& m = j.at("bdpq");
    dg.kind = DiagramKind::Bdpq;
    dg.bdpq.d = m.at("d").get<long>();
    dg.bdpq.p = int_from_json(m.at("p"));
    dg.bdpq.q = int_from_json(m.at("q"));
    dg.bdpq.cut_side = cut_side_from_string(m.value("cut_side", "outward"));
    if (m.contains("nodes")) {
      dg.bdpq.nodes = rats_from_json(m.at("nodes"));
    } else {
      for (long i = 1; i <= dg.bdpq.d; ++i) dg.bdpq.nodes.emplace_back(i);
    }
  } else {
    throw Error(ErrorCode::Parse, "unknown diagram kind '" + kind + "'");
  }
  return dg;
}

/// Parses, turning nlohmann's own exceptions into Parse errors.
inline Diagram parse_diagram(const std::string& text) {
  try {
    return diagram_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline json to_json(const Violation& v) {
  json j{{"code", std::string(to_string(v.code))}, {"message", v.message}};
  if (v.index) j["index"] = *v.index;
  return j;
}

inline json violations_to_json(const std::vector<Violation>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline json to_json(const CornerType& t) {
  return {{"d", t.d}, {"p", int_to_json(t.p)}, {"q", int_to_json(t.q_class)}};
}

/// Corner types of every corner, null where the corner shares its vertex.
inline json corner_types_json(const Diagram& dg) {
  json a = json::array();
  for (std::size_t i = 0; i < corner_count(dg); ++i) {
    try {
      a.push_back(to_json(corner_type(dg, i)));
    } catch (const Error&) {
      a.push_back(nullptr);
    }
  }
  return a;
}

inline json vertex_kinds_json(const Diagram& dg) {
  json a = json::array();
  auto vs = region_vertices(dg);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto k = vertex_kind(dg, i);
    if (is_delzant(k)) {
      a.push_back("delzant");
    } else if (std::holds_alternative<NonDelzantBare>(k)) {
      a.push_back("non-delzant");
    } else {
      a.push_back("corner");
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Germs and energy

inline json to_json(const PLGerm& g) {
  json gs = json::array();
  for (const auto& h : g.gradients) gs.push_back(to_json(h));
  return {{"a", g.base.str()}, {"gradients", gs}, {"text", germ_to_string(g)}};
}

inline PLGerm germ_from_json(const json& j) {
  try {
    std::vector<QVec2> gs;
    for (const auto& h : j.at("gradients")) gs.push_back(qvec_from_json(h));
    return PLGerm(rat_from_json(j.at("a")), gs);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline json to_json(const GermClass& c) {
  json j{{"a", c.a.str()}, {"k", c.k}};
  if (c.k > 0) {
    j["p"] = int_to_json(c.p);
    j["q"] = int_to_json(c.q_class);
  }
  return j;
}

inline json to_json(const EnergyValue& e) {
  if (auto* x = std::get_if<Exact>(&e)) return {{"status", "exact"}, {"value", x->value.str()}};
  if (auto* u = std::get_if<UpperBound>(&e)) return {{"status", "upper_bound"}, {"value", u->value.str()}};
  return {{"status", "unknown"}};
}

// ---------------------------------------------------------------------------
// Moves and walks

inline json to_json(const MoveRecord& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  json crossed = json::array();
  for (const auto& x : r.crossed_points) crossed.push_back(to_json(x));
  return {{"kind", std::string(to_string(r.kind))}, {"target", r.target}, {"params", params}, {"crossed_points", crossed}};
}

inline json to_json(const StepRecord& s) {
  json g = json::object();
  for (const auto& [label, v] : s.g_values) g[std::to_string(label)] = v.str();
  return {{"n", s.n},      {"label", s.label},   {"type", to_json(s.corner_type)}, {"ell", s.ell.str()},
          {"g", g},        {"a_n", s.a_n.str()}, {"digest", s.digest}};
}

inline json to_json(const WalkTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  return {{"initial", to_json(t.initial)},
          {"edge", t.initial_edge},
          {"initial_ell", t.initial_ell.str()},
          {"boundary_length", t.boundary_length.str()},
          {"steps", steps},
          {"restart_offsets", t.restart_offsets},
          {"final", to_json(t.final_diagram)}};
}

inline std::string trace_csv(const WalkTrace& t) {
  std::string out = "n,label,d,p,q,ell,a_n,digest\n";
  for (const auto& s : t.steps) {
    out += std::to_string(s.n) + "," + std::to_string(s.label) + "," + std::to_string(s.corner_type.d) + "," +
           s.corner_type.p.get_str() + "," + s.corner_type.q_class.get_str() + "," + s.ell.str() + "," +
           s.a_n.str() + "," + s.digest + "\n";
  }
  return out;
}

inline json triple_to_json(const Triple& t) { return json::array({int_to_json(t[0]), int_to_json(t[1]), int_to_json(t[2])}); }

inline json to_json(const MarkovNode& n) {
  json children = json::array();
  for (const auto& c : n.children) children.push_back(to_json(c));
  return {{"depth", n.depth}, {"triple", triple_to_json(n.triple)}, {"children", children}};
}

inline json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.code()))}, {"message", e.message()}};
}

}  // namespace atf::shell
