#pragma once

// Command-line front end. Exit codes: 0 success, 1 inequivalent germs, 2 errors and
// validation failures, 3 CornerMerge.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "atf/diagram.hpp"
#include "atf/energy.hpp"
#include "atf/errors.hpp"
#include "atf/moves.hpp"
#include "atf/shell/json_io.hpp"
#include "atf/shell/service.hpp"
#include "atf/shell/session.hpp"
#include "atf/shell/svg.hpp"
#include "atf/walker.hpp"

namespace atf::shell {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInequivalent = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitCornerMerge = 3;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
  out << text;
}

/// Parses "x,y" into a rational point.
inline QVec2 parse_pair(const std::string& s) {
  auto parts = parse_rat_list(s);
  if (parts.size() != 2) throw Error(ErrorCode::Parse, "expected x,y but got '" + s + "'");
  return {parts[0], parts[1]};
}

inline IVec2 parse_int_pair(const std::string& s) {
  QVec2 q = parse_pair(s);
  if (!q.x.is_integer() || !q.y.is_integer()) throw Error(ErrorCode::Parse, "expected integers a,b");
  return {q.x.num(), q.y.num()};
}

inline PLGerm load_germ(const std::string& path) {
  try {
    return germ_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline bool has_delzant_vertex(const Diagram& dg) {
  if (!dg.is_compact()) return false;
  for (std::size_t i = 0; i < dg.vertices.size(); ++i) {
    if (is_delzant(vertex_kind(dg, i))) return true;
  }
  return false;
}

/// Runs the CLI on args (without the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact toolkit for almost toric base diagrams", "atf-studio"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  int code = kExitOk;
  auto emit = [&](const json& j, const std::string& text) {
    if (as_json) {
      out << j.dump() << "\n";
    } else {
      out << text;
      if (!text.empty() && text.back() != '\n') out << "\n";
    }
  };
  auto load = [](const std::string& path) { return parse_diagram(read_file(path)); };
  auto save = [&](const Diagram& dg, const std::string& path) {
    std::string text = to_json(dg).dump(2) + "\n";
    if (path.empty() || path == "-") {
      out << text;
    } else {
      write_file(path, text);
    }
  };

  // new
  auto* cmd_new = app.add_subcommand("new", "Create a preset diagram");
  std::string preset_name, new_out, lambda, width, height, cap, d, p, q, cut_side;
  bool new_prepare = false;
  cmd_new->add_option("--preset", preset_name, "cp2, quadrant, rectangle or bdpq")->required();
  cmd_new->add_option("--lambda", lambda);
  cmd_new->add_option("--width", width);
  cmd_new->add_option("--height", height);
  cmd_new->add_option("--cap", cap);
  cmd_new->add_option("--d", d);
  cmd_new->add_option("--p", p);
  cmd_new->add_option("--q", q);
  cmd_new->add_option("--cut-side", cut_side);
  cmd_new->add_flag("--prepare", new_prepare, "Trade every Delzant vertex and shrink the cuts");
  cmd_new->add_option("-o,--output", new_out);
  cmd_new->callback([&] {
    json params = json::object();
    if (!lambda.empty()) params["lambda"] = lambda;
    if (!width.empty()) params["width"] = width;
    if (!height.empty()) params["height"] = height;
    if (!cap.empty()) params["cap"] = cap;
    if (!d.empty()) params["d"] = d;
    if (!p.empty()) params["p"] = p;
    if (!q.empty()) params["q"] = q;
    if (!cut_side.empty()) params["cut_side"] = cut_side;
    Diagram dg = preset_from_json(preset_name, params);
    if (new_prepare) dg = prepare(dg);
    require_valid(dg);
    save(dg, new_out);
  });

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "Check a diagram file");
  std::string validate_in;
  cmd_validate->add_option("file", validate_in)->required();
  cmd_validate->callback([&] {
    Diagram dg = load(validate_in);
    auto vs = validate(dg);
    std::string text = vs.empty() ? "valid" : "";
    for (const auto& v : vs) text += std::string(to_string(v.code)) + ": " + v.message + "\n";
    emit({{"valid", vs.empty()}, {"violations", violations_to_json(vs)}, {"corner_types", corner_types_json(dg)}}, text);
    if (!vs.empty()) code = kExitError;
  });

  // move
  auto* cmd_move = app.add_subcommand("move", "Apply one move");
  std::string move_kind, move_in, move_out, move_to, move_eps, move_side;
  long move_corner = -1, move_vertex = -1, move_node = -1;
  bool move_merge = false, move_clear = false;
  cmd_move->add_option("kind", move_kind, "trade, slide, cut-change, mutate, isolate or prepare")->required();
  cmd_move->add_option("--corner", move_corner);
  cmd_move->add_option("--vertex", move_vertex);
  cmd_move->add_option("--node", move_node);
  cmd_move->add_option("--to", move_to);
  cmd_move->add_option("--epsilon", move_eps);
  cmd_move->add_option("--side", move_side, "Fixed side: right (default) or left");
  cmd_move->add_flag("--allow-merge", move_merge);
  cmd_move->add_flag("--clear-path", move_clear, "Shrink cuts crossing the mutation path first");
  cmd_move->add_option("-i,--input", move_in)->required();
  cmd_move->add_option("-o,--output", move_out);
  cmd_move->callback([&] {
    json req{{"kind", move_kind}};
    if (move_corner >= 0) req["corner"] = move_corner;
    if (move_vertex >= 0) req["vertex"] = move_vertex;
    if (move_node >= 0) req["node"] = move_node;
    if (!move_to.empty()) req["to"] = move_to;
    if (!move_eps.empty()) req["epsilon"] = move_eps;
    if (!move_side.empty()) req["side"] = move_side;
    if (move_merge) req["allow_merge"] = true;
    if (move_clear) req["clear_path"] = true;
    if (move_kind == "trade" && move_vertex < 0 && move_corner >= 0) req["vertex"] = move_corner;
    auto [dg, rec] = apply_move_request(load(move_in), req);
    save(dg, move_out);
    if (!move_out.empty() && move_out != "-") emit(to_json(rec), std::string(to_string(rec.kind)) + " ok");
  });

  // germ
  auto* cmd_germ = app.add_subcommand("germ", "Fibre germ a + min{b1, b1(1 - kpq) + b2 kp^2}");
  std::string germ_p = "1", germ_q = "1", germ_a = "1";
  long germ_k = 0;
  bool germ_nf = false;
  cmd_germ->add_option("--p", germ_p);
  cmd_germ->add_option("--q", germ_q);
  cmd_germ->add_option("--k", germ_k);
  cmd_germ->add_option("--a", germ_a);
  cmd_germ->add_flag("--normal-form", germ_nf);
  cmd_germ->callback([&] {
    PLGerm g = germ_of_fibre(parse_int(germ_p), parse_int(germ_q), germ_k, Rat::parse(germ_a));
    json j = to_json(g);
    std::string text = germ_to_string(g);
    if (germ_nf) {
      GermClass c = germ_normal_form(g);
      j["class"] = to_json(c);
      text += "\nnormal form: a=" + c.a.str() + " k=" + std::to_string(c.k);
      if (c.k > 0) text += " p=" + c.p.get_str() + " q=" + c.q_class.get_str();
    }
    emit(j, text);
  });

  // equiv
  auto* cmd_equiv = app.add_subcommand("equiv", "Decide GL(2,Z) equivalence of two germs");
  std::string eq_left, eq_right;
  long eq_bound = kDefaultBruteBound;
  cmd_equiv->add_option("--left", eq_left)->required();
  cmd_equiv->add_option("--right", eq_right)->required();
  cmd_equiv->add_option("--brute-bound", eq_bound);
  cmd_equiv->callback([&] {
    auto r = germ_equivalent(load_germ(eq_left), load_germ(eq_right), eq_bound);
    json j{{"equivalent", r.equivalent}};
    std::string text = r.equivalent ? "equivalent" : "inequivalent";
    if (r.witness) {
      j["witness"] = to_json(*r.witness);
      text += "\nwitness: " + j["witness"].dump();
    }
    emit(j, text);
    if (!r.equivalent) code = kExitInequivalent;
  });

  // energy
  auto* cmd_energy = app.add_subcommand("energy", "Displacement energy on the half-plane model");
  std::string en_model, en_at;
  long en_k = -1;
  cmd_energy->add_option("--model", en_model)->required();
  cmd_energy->add_option("--at", en_at)->required();
  cmd_energy->add_option("--flipped", en_k);
  cmd_energy->callback([&] {
    Diagram dg = load(en_model);
    EnergyValue e = energy_at(dg, parse_pair(en_at), en_k >= 0 ? en_k : default_flips(dg));
    emit(to_json(e), to_string(e));
  });

  // probe
  auto* cmd_probe = app.add_subcommand("probe", "Probe bound on the energy");
  std::string pr_at, pr_dir, pr_in;
  long pr_search = 0;
  cmd_probe->add_option("--at", pr_at)->required();
  cmd_probe->add_option("--dir", pr_dir);
  cmd_probe->add_option("--search", pr_search);
  cmd_probe->add_option("-i,--input", pr_in)->required();
  cmd_probe->callback([&] {
    Diagram dg = load(pr_in);
    QVec2 x = parse_pair(pr_at);
    std::optional<Rat> b;
    if (!pr_dir.empty()) {
      b = probe_bound(dg, x, parse_int_pair(pr_dir));
    } else {
      b = best_probe_bound(dg, x, pr_search > 0 ? pr_search : 3);
    }
    emit({{"bound", b ? json(b->str()) : json(nullptr)}}, b ? b->str() : "none");
  });

  // walk
  auto* cmd_walk = app.add_subcommand("walk", "Deterministic mutation walk");
  std::string walk_in, walk_csv, walk_out;
  std::size_t walk_steps = 10, walk_edge = 0;
  cmd_walk->add_option("--steps", walk_steps);
  cmd_walk->add_option("--edge", walk_edge);
  cmd_walk->add_option("-i,--input", walk_in)->required();
  cmd_walk->add_option("--csv", walk_csv);
  cmd_walk->add_option("-o,--output", walk_out, "Trace JSON");
  cmd_walk->callback([&] {
    Diagram dg = load(walk_in);
    if (has_delzant_vertex(dg)) dg = prepare(dg);
    WalkTrace tr = walk(dg, walk_edge, walk_steps);
    std::string csv = trace_csv(tr);
    if (!walk_csv.empty()) write_file(walk_csv, csv);
    if (!walk_out.empty()) write_file(walk_out, to_json(tr).dump(2) + "\n");
    emit(to_json(tr), csv);
  });

  // markov
  auto* cmd_markov = app.add_subcommand("markov", "Mutation tree of cp2 and its corner triples");
  std::size_t mk_depth = 2;
  std::string mk_lambda = "3";
  cmd_markov->add_option("--depth", mk_depth);
  cmd_markov->add_option("--lambda", mk_lambda);
  cmd_markov->callback([&] {
    MarkovNode root = markov_tree(Rat::parse(mk_lambda), mk_depth);
    std::string text;
    auto levels = triples_by_depth(root);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      text += "depth " + std::to_string(i) + ":";
      for (const auto& t : levels[i]) text += " (" + t[0].get_str() + "," + t[1].get_str() + "," + t[2].get_str() + ")";
      text += "\n";
    }
    emit(to_json(root), text);
  });

  // render
  auto* cmd_render = app.add_subcommand("render", "Render a diagram as SVG");
  std::string rd_in, rd_out, rd_levels;
  long rd_k = -1;
  cmd_render->add_option("-i,--input", rd_in)->required();
  cmd_render->add_option("-o,--output", rd_out);
  cmd_render->add_option("--levels", rd_levels);
  cmd_render->add_option("--flipped", rd_k);
  cmd_render->callback([&] {
    RenderSpec spec;
    spec.levels = parse_rat_list(rd_levels);
    if (rd_k >= 0) spec.flipped_k = rd_k;
    std::string svg = render_svg(load(rd_in), spec);
    if (rd_out.empty() || rd_out == "-") {
      out << svg;
    } else {
      write_file(rd_out, svg);
    }
  });

  // serve
  auto* cmd_serve = app.add_subcommand("serve", "Run the HTTP service");
  int sv_port = 8080;
  std::string sv_state, sv_host = "127.0.0.1";
  cmd_serve->add_option("--port", sv_port);
  cmd_serve->add_option("--host", sv_host);
  cmd_serve->add_option("--state", sv_state);
  cmd_serve->callback([&] {
    std::optional<std::filesystem::path> dir;
    if (!sv_state.empty()) dir = sv_state;
    if (const char* env = std::getenv("ATF_STATE_DIR"); env && *env) dir = env;
    SessionStore store(dir);
    Service service(store);
    err << "listening on " << sv_host << ":" << sv_port << "\n";
    if (!service.listen(sv_host, sv_port)) throw Error(ErrorCode::BadParams, "cannot listen on port " + std::to_string(sv_port));
  });

  auto report = [&](const std::string& name, const std::string& message) {
    if (as_json) {
      err << json{{"error", name}, {"message", message}}.dump() << "\n";
    } else {
      err << "error: " << name << ": " << message << "\n";
    }
  };

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report("Usage", e.what());
    return kExitError;
  } catch (const Error& e) {
    report(std::string(to_string(e.code())), e.message());
    return e.code() == ErrorCode::CornerMerge ? kExitCornerMerge : kExitError;
  } catch (const json::exception& e) {
    report("Parse", e.what());
    return kExitError;
  }
  return code;
}

}  // namespace atf::shell
