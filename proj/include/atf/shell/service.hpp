#pragma once

// HTTP + JSON service over the session store. Each session serializes its writers; reads
// see immutable node snapshots.

#include <httplib.h>

#include <sstream>
#include <string>

#include "atf/energy.hpp"
#include "atf/errors.hpp"
#include "atf/shell/json_io.hpp"
#include "atf/shell/session.hpp"
#include "atf/shell/svg.hpp"

namespace atf::shell {

/// 400 for malformed requests, 404 for unknown ids, 409 for moves the diagram refuses.
inline int http_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse:
    case ErrorCode::BadParams:
    case ErrorCode::NotCoprime:
    case ErrorCode::EmptyViewport:
    case ErrorCode::ZeroVector:
    case ErrorCode::DivisionByZero:
      return 400;
    case ErrorCode::IndexOutOfRange:
      return 404;
    default:
      return 409;
  }
}

inline QVec2 parse_point(const std::string& x, const std::string& y) { return {Rat::parse(x), Rat::parse(y)}; }

/// Comma-separated rationals ("1/2,1,3/2").
inline std::vector<Rat> parse_rat_list(const std::string& s) {
  std::vector<Rat> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(Rat::parse(item));
  }
  return out;
}

inline json node_json(const SessionNode& nd) {
  auto violations = validate(nd.diagram);
  json j{{"id", nd.id},
         {"parent", nd.parent ? json(*nd.parent) : json(nullptr)},
         {"diagram", to_json(nd.diagram)},
         {"corner_types", corner_types_json(nd.diagram)},
         {"violations", violations_to_json(violations)},
         {"valid", violations.empty()},
         {"move", nd.request},
         {"record", nd.record}};
  if (nd.diagram.is_compact()) {
    j["vertex_kinds"] = vertex_kinds_json(nd.diagram);
    if (!nd.diagram.quadrant_cap) {
      j["area"] = area(nd.diagram).str();
      j["boundary_length"] = boundary_affine_length(nd.diagram).str();
    }
  }
  return j;
}

/// Default number of cut changes behind a half-plane model's energy field.
inline long default_flips(const Diagram& dg) {
  return dg.is_bdpq() && dg.bdpq.cut_side == CutSide::Inward ? dg.bdpq.d : 0;
}

class Service {
 public:
  explicit Service(SessionStore& store) : store_(store) { routes(); }

  httplib::Server& server() { return svr_; }

  bool listen(const std::string& host, int port) { return svr_.listen(host, port); }
  int bind_any(const std::string& host) { return svr_.bind_to_any_port(host); }
  bool listen_after_bind() { return svr_.listen_after_bind(); }
  void stop() { svr_.stop(); }

 private:
  using Req = httplib::Request;
  using Res = httplib::Response;

  static void send(Res& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  /// Runs a handler, mapping library errors onto HTTP statuses.
  template <class F>
  static void guarded(Res& res, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      send(res, http_status(e.code()), error_json(e));
    } catch (const json::exception& e) {
      send(res, 400, {{"error", "Parse"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
  }

  Session& session(const Req& req) {
    Session* s = store_.find(req.matches[1]);
    if (!s) throw Error(ErrorCode::IndexOutOfRange, "unknown session '" + std::string(req.matches[1]) + "'");
    return *s;
  }

  static std::size_t node_index(const Req& req) {
    try {
      return std::stoul(req.matches[2]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::IndexOutOfRange, "bad node id");
    }
  }

  SessionNode node(const Req& req) {
    Session& s = session(req);
    std::size_t n = node_index(req);
    auto nd = s.node(n);
    if (!nd) throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(n) + " does not exist");
    return *nd;
  }

  static std::string param(const Req& req, const char* key) {
    if (!req.has_param(key)) throw Error(ErrorCode::Parse, std::string("missing query parameter '") + key + "'");
    return req.get_param_value(key);
  }

  static long flips(const Req& req, const Diagram& dg) {
    if (!req.has_param("k")) return default_flips(dg);
    try {
      return std::stol(req.get_param_value("k"));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "k must be an integer");
    }
  }

  void routes() {
    svr_.Post("/session", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        json body = json::parse(req.body);
        Diagram dg;
        if (body.contains("diagram")) {
          dg = diagram_from_json(body["diagram"]);
        } else if (body.contains("preset")) {
          dg = preset_from_json(body["preset"].get<std::string>(), body.value("params", json::object()));
        } else {
          throw Error(ErrorCode::Parse, "need 'preset' or 'diagram'");
        }
        if (body.value("prepare", false)) dg = prepare(dg);
        Session& s = store_.create(std::move(dg));
        send(res, 200, {{"session_id", s.id()}, {"root", 0}});
      });
    });

    svr_.Get(R"(/session/([A-Za-z0-9_-]+)/tree)", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, session(req).tree_json()); });
    });

    svr_.Get(R"(/session/([A-Za-z0-9_-]+)/node/(\d+))", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, node_json(node(req))); });
    });

    svr_.Post(R"(/session/([A-Za-z0-9_-]+)/node/(\d+)/move)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        Session& s = session(req);
        json body = json::parse(req.body);
        if (!body.is_object()) throw Error(ErrorCode::Parse, "move body must be an object");
        // {kind, corner, params: {...}} and flat requests are both accepted.
        if (body.contains("params") && body["params"].is_object()) {
          json flat = body["params"];
          for (auto& [k, v] : body.items()) {
            if (k != "params") flat[k] = v;
          }
          body = flat;
        }
        std::size_t n = node_index(req);
        if (!s.node(n)) throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(n) + " does not exist");
        auto [id, rec] = s.apply(n, body);
        store_.persist(s);
        send(res, 200, {{"node", id}, {"record", to_json(rec)}});
      });
    });

    svr_.Get(R"(/session/([A-Za-z0-9_-]+)/node/(\d+)/render\.svg)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        SessionNode nd = node(req);
        RenderSpec spec;
        if (req.has_param("levels")) spec.levels = parse_rat_list(req.get_param_value("levels"));
        if (req.has_param("k")) spec.flipped_k = flips(req, nd.diagram);
        res.status = 200;
        res.set_content(render_svg(nd.diagram, spec), "image/svg+xml");
      });
    });

    svr_.Get(R"(/session/([A-Za-z0-9_-]+)/node/(\d+)/germ)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        SessionNode nd = node(req);
        QVec2 y = parse_point(param(req, "x"), param(req, "y"));
        auto [g, cls] = germ_at(nd.diagram, y, flips(req, nd.diagram));
        send(res, 200, {{"germ", to_json(g)}, {"class", to_json(cls)}});
      });
    });

    svr_.Get(R"(/session/([A-Za-z0-9_-]+)/node/(\d+)/energy)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        SessionNode nd = node(req);
        QVec2 y = parse_point(param(req, "x"), param(req, "y"));
        send(res, 200, to_json(energy_at(nd.diagram, y, flips(req, nd.diagram))));
      });
    });
  }

  SessionStore& store_;
  httplib::Server svr_;
};

}  // namespace atf::shell
