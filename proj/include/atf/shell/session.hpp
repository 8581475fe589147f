#pragma once

// Move requests shared by the CLI and the service, and the exploration tree: an
// append-only tree of diagram states whose edges are the requests that produced them.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "atf/diagram.hpp"
#include "atf/errors.hpp"
#include "atf/moves.hpp"
#include "atf/shell/json_io.hpp"
#include "atf/walker.hpp"

namespace atf::shell {

// ---------------------------------------------------------------------------
// Presets and move requests

/// Builds a preset from a JSON parameter object ({"lambda": "3", "d": 2, ...}).
inline Diagram preset_from_json(const std::string& name, const json& params) {
  PresetParams pp;
  try {
    if (params.contains("lambda")) pp.lambda = rat_from_json(params["lambda"]);
    if (params.contains("width")) pp.width = rat_from_json(params["width"]);
    if (params.contains("height")) pp.height = rat_from_json(params["height"]);
    if (params.contains("cap")) pp.cap = rat_from_json(params["cap"]);
    if (params.contains("d")) pp.d = int_from_json(params["d"]).get_si();
    if (params.contains("p")) pp.p = int_from_json(params["p"]);
    if (params.contains("q")) pp.q = int_from_json(params["q"]);
    if (params.contains("cut_side")) pp.cut_side = cut_side_from_string(params["cut_side"].get<std::string>());
    if (params.contains("nodes")) pp.nodes = rats_from_json(params["nodes"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return preset(name, pp);
}

inline Side side_from_string(const std::string& s) {
  if (s == "right") return Side::Right;
  if (s == "left") return Side::Left;
  throw Error(ErrorCode::Parse, "side must be 'left' or 'right'");
}

inline std::size_t index_field(const json& req, const char* key) {
  if (!req.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  const json& v = req.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw Error(ErrorCode::Parse, std::string("bad index '") + key + "'");
  return static_cast<std::size_t>(v.get<long long>());
}

/// Applies one move request:
///   {"kind": "trade", "vertex": V, "epsilon"?}
///   {"kind": "slide", "corner": K, "node": I, "to": T, "tracked"?: [[x, y], ...]}
///   {"kind": "cut-change", "corner": K, "side"?: "right"|"left", "allow_merge"?}
///   {"kind": "mutate", "corner": K, "epsilon"?, "side"?, "allow_merge"?, "tracked"?}
///   {"kind": "isolate", "corner": K}
///   {"kind": "prepare"}
///   {"kind": "clear", "region": [[x, y], ...]}
/// The result diagram is validated before it is returned.
inline std::pair<Diagram, MoveRecord> apply_move_request(const Diagram& dg, const json& req) {
  if (!req.is_object() || !req.contains("kind") || !req["kind"].is_string()) {
    throw Error(ErrorCode::Parse, "move request needs a 'kind'");
  }
  const std::string kind = req["kind"].get<std::string>();
  auto opt_rat = [&](const char* key) -> std::optional<Rat> {
    if (!req.contains(key) || req[key].is_null()) return std::nullopt;
    return rat_from_json(req[key]);
  };
  auto points = [&](const char* key) {
    std::vector<QVec2> pts;
    if (req.contains(key)) {
      for (const auto& p : req[key]) pts.push_back(qvec_from_json(p));
    }
    return pts;
  };
  Side side = req.contains("side") ? side_from_string(req["side"].get<std::string>()) : kDefaultFixedSide;
  bool allow_merge = req.value("allow_merge", false);

  std::pair<Diagram, MoveRecord> res;
  if (kind == "trade") {
    std::size_t v = index_field(req, "vertex");
    auto eps = opt_rat("epsilon");
    res.first = nodal_trade(dg, v, eps);
    res.second = MoveRecord{MoveKind::Trade, v, {}, {}};
    res.second.params.emplace_back("epsilon", res.first.corners.back().nodes.front().str());
  } else if (kind == "slide") {
    auto to = opt_rat("to");
    if (!to) throw Error(ErrorCode::Parse, "slide needs 'to'");
    res = nodal_slide(dg, index_field(req, "corner"), index_field(req, "node"), *to, points("tracked"));
  } else if (kind == "cut-change") {
    std::size_t k = index_field(req, "corner");
    res.first = change_branch_cut(dg, k, {side, allow_merge});
    res.second = MoveRecord{MoveKind::CutChange, k, {{"side", side == Side::Right ? "right" : "left"}}, {}};
  } else if (kind == "mutate") {
    MutateOptions opts;
    opts.epsilon = opt_rat("epsilon");
    opts.fixed = side;
    opts.allow_merge = allow_merge;
    opts.tracked = points("tracked");
    opts.clear_path = req.value("clear_path", false);
    res = mutate(dg, index_field(req, "corner"), opts);
  } else if (kind == "isolate") {
    std::size_t k = index_field(req, "corner");
    res.first = isolate(dg, k);
    res.second = MoveRecord{MoveKind::CutChange, k, {{"isolate", "true"}}, {}};
  } else if (kind == "prepare") {
    res.first = prepare(dg);
    res.second = MoveRecord{MoveKind::Trade, 0, {{"prepare", "true"}}, {}};
  } else if (kind == "clear") {
    res.first = clear_region(dg, points("region"));
    res.second = MoveRecord{MoveKind::Clear, 0, {}, {}};
  } else {
    throw Error(ErrorCode::Parse, "unknown move kind '" + kind + "'");
  }
  require_valid(res.first);
  return res;
}

// ---------------------------------------------------------------------------
// Session tree

struct SessionNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  Diagram diagram;
  json request;  // null for the root
  json record;   // null for the root
};

class Session {
 public:
  Session(std::string id, Diagram root) : id_(std::move(id)) {
    nodes_.push_back(SessionNode{0, std::nullopt, std::move(root), nullptr, nullptr});
  }

  const std::string& id() const { return id_; }
  std::size_t current() const { return current_; }
  std::uint64_t revision() const { return revision_; }
  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return nodes_.size();
  }

  /// Snapshot of a node; nodes never change after creation.
  std::optional<SessionNode> node(std::size_t n) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (n >= nodes_.size()) return std::nullopt;
    return nodes_[n];
  }

  /// Applies a move to node n and appends the result. Writers are serialized.
  std::pair<std::size_t, MoveRecord> apply(std::size_t n, const json& request) {
    std::lock_guard<std::mutex> write(writer_);
    std::optional<SessionNode> parent = node(n);
    if (!parent) throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(n) + " does not exist");
    auto [dg, rec] = apply_move_request(parent->diagram, request);
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t id = nodes_.size();
    nodes_.push_back(SessionNode{id, n, std::move(dg), request, to_json(rec)});
    current_ = id;
    ++revision_;
    return {id, rec};
  }

  json tree_json() const {
    std::lock_guard<std::mutex> lock(mu_);
    json ns = json::array();
    for (const auto& nd : nodes_) {
      json j{{"id", nd.id}, {"parent", nd.parent ? json(*nd.parent) : json(nullptr)}, {"move", nd.request}, {"record", nd.record}};
      if (nd.diagram.is_compact() && nd.diagram.corners.size() == 3) {
        try {
          j["triple"] = triple_to_json(corner_p_values(nd.diagram));
        } catch (const Error&) {
        }
      }
      ns.push_back(j);
    }
    return {{"session_id", id_}, {"current", current_}, {"revision", revision_}, {"nodes", ns}};
  }

  json to_state() const {
    std::lock_guard<std::mutex> lock(mu_);
    json ns = json::array();
    for (const auto& nd : nodes_) {
      ns.push_back({{"id", nd.id},
                    {"parent", nd.parent ? json(*nd.parent) : json(nullptr)},
                    {"diagram", to_json(nd.diagram)},
                    {"move", nd.request},
                    {"record", nd.record}});
    }
    return {{"session_id", id_}, {"current", current_}, {"revision", revision_}, {"nodes", ns}};
  }

  static std::unique_ptr<Session> from_state(const json& j) {
    const json& ns = j.at("nodes");
    if (!ns.is_array() || ns.empty()) throw Error(ErrorCode::Parse, "session has no nodes");
    auto s = std::make_unique<Session>(j.at("session_id").get<std::string>(), diagram_from_json(ns[0].at("diagram")));
    for (std::size_t i = 1; i < ns.size(); ++i) {
      const json& nd = ns[i];
      s->nodes_.push_back(SessionNode{i, nd.at("parent").get<std::size_t>(), diagram_from_json(nd.at("diagram")),
                                      nd.at("move"), nd.at("record")});
    }
    s->current_ = j.value("current", std::size_t{0});
    s->revision_ = j.value("revision", std::uint64_t{0});
    return s;
  }

  /// Re-applies every recorded move and checks that each node is reproduced exactly.
  bool replays_exactly() const {
    std::vector<SessionNode> snapshot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      snapshot = nodes_;
    }
    for (std::size_t i = 1; i < snapshot.size(); ++i) {
      const auto& nd = snapshot[i];
      auto [dg, rec] = apply_move_request(snapshot[*nd.parent].diagram, nd.request);
      if (!(dg == nd.diagram) || to_json(rec) != nd.record) return false;
    }
    return true;
  }

 private:
  std::string id_;
  std::vector<SessionNode> nodes_;
  std::size_t current_ = 0;
  std::uint64_t revision_ = 0;
  mutable std::mutex mu_;
  std::mutex writer_;
};

/// All sessions, optionally persisted as <state_dir>/<id>.json.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> state_dir = std::nullopt)
      : state_dir_(std::move(state_dir)) {
    if (!state_dir_) return;
    std::filesystem::create_directories(*state_dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*state_dir_)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream in(entry.path());
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        auto s = Session::from_state(json::parse(buf.str()));
        next_id_ = std::max(next_id_, id_number(s->id()) + 1);
        sessions_[s->id()] = std::move(s);
      } catch (const std::exception&) {
        // Unreadable state files are skipped rather than aborting startup.
      }
    }
  }

  Session& create(Diagram root) {
    require_valid(root);
    std::lock_guard<std::mutex> lock(mu_);
    std::string id = "s" + std::to_string(next_id_++);
    auto& slot = sessions_[id];
    slot = std::make_unique<Session>(id, std::move(root));
    persist(*slot);
    return *slot;
  }

  Session* find(const std::string& id) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second.get();
  }

  void persist(const Session& s) const {
    if (!state_dir_) return;
    std::filesystem::path tmp = *state_dir_ / (s.id() + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << s.to_state().dump(1) << "\n";
    }
    std::filesystem::rename(tmp, *state_dir_ / (s.id() + ".json"));
  }

 private:
  static std::size_t id_number(const std::string& id) {
    try {
      return id.size() > 1 ? std::stoul(id.substr(1)) : 0;
    } catch (const std::exception&) {
      return 0;
    }
  }

  std::optional<std::filesystem::path> state_dir_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
  mutable std::mutex mu_;
};

}  // namespace atf::shell
