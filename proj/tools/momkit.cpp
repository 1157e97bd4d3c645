// momkit: command-line front end.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "momkit/error.hpp"
#include "momkit/mom.hpp"
#include "momkit/protomom.hpp"
#include "momkit/solid.hpp"
#include "momkit/surface.hpp"
#include "momkit/text.hpp"

using namespace momkit;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::uint64_t seed = 0;
  int jobs = 1;
  bool json = false;
  std::string trace_out;
  std::string output;
  int max_size = 24;
};

// Plain lines, or one JSON document when --json is given.
struct Report {
  const Options& opt;
  json doc = json::object();
  bool ok = true;

  void line(const std::string& s) const {
    if (!opt.json) std::cout << s << "\n";
  }
  int finish() {
    if (opt.json) {
      doc["ok"] = ok;
      std::cout << doc.dump(2) << "\n";
    }
    return ok ? 0 : 1;
  }
};

// Relative paths are tried as given, then against MOMKIT_FIXTURES.
std::string locate(const std::string& path, const fs::path& base = {}) {
  std::vector<fs::path> tries{path};
  if (!base.empty()) tries.push_back(base / path);
  if (const char* dir = std::getenv("MOMKIT_FIXTURES")) tries.push_back(fs::path(dir) / path);
  for (const auto& p : tries)
    if (fs::exists(p)) return p.string();
  return path;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) fail_pre("cannot write " + path);
  out << content;
}

IdealTriangulation load_triangulation(const std::string& path) { return parse_triangulation(text::read_file(locate(path))); }

InducedProtoMom load_structure(const std::string& path, ContextPtr* ctx_out = nullptr) {
  const std::string where = locate(path);
  auto f = parse_structure(text::read_file(where));
  auto ctx = make_context(parse_triangulation(text::read_file(locate(f.triangulation, fs::path(where).parent_path()))));
  if (ctx_out) *ctx_out = ctx;
  return structure_from_file(ctx, f);
}

std::string genus_text(const std::vector<int>& genera) {
  std::ostringstream s;
  s << (genera.size() == 1 ? "boundary genus" : "boundary genera");
  for (int g : genera) s << " " << g;
  return s.str();
}

json structure_json(const InducedProtoMom& s) {
  json j;
  j["key"] = s.key();
  j["kept_edges"] = from_mask(s.kept_edges());
  j["kept_faces"] = from_mask(s.kept_faces());
  j["tori"] = s.torus_count();
  j["full"] = is_full(s);
  return j;
}

void emit_trace(const Options& opt, Report& r, const std::string& text) {
  r.doc["trace"] = text;
  if (!opt.trace_out.empty()) write_file(opt.trace_out, text);
  else if (!opt.json) std::cout << text;
}

int cmd_validate(const Options& opt, const std::string& path) {
  Report r{opt};
  auto tri = load_triangulation(path);
  auto v = validate(tri);
  auto genera = boundary_genera(tri);
  r.doc["tets"] = v.tets;
  r.doc["edge_classes"] = v.edge_classes;
  r.doc["face_classes"] = v.face_classes;
  r.doc["boundary_genera"] = genera;
  r.doc["problems"] = v.problems;
  r.ok = v.valid;
  r.line(std::to_string(v.tets) + " tets, " + std::to_string(v.edge_classes) + " edge classes, " + genus_text(genera));
  for (const auto& p : v.problems) r.line("problem: " + p);
  return r.finish();
}

int cmd_dual(const Options& opt, const std::string& path, const std::string& structure) {
  Report r{opt};
  if (structure.empty()) {
    auto ctx = make_context(load_triangulation(path));
    r.doc["graph"] = format_graph(*ctx->graph);
    if (!opt.json) std::cout << format_graph(*ctx->graph);
    return r.finish();
  }
  auto s = load_structure(structure);
  auto cs = dual_colorings(s);
  r.doc["colorings"] = json::array();
  for (const auto& m : cs) {
    r.doc["colorings"].push_back(format_coloring(m));
    if (!opt.json) std::cout << format_coloring(m) << "\n";
  }
  r.line(std::to_string(cs.size()) + " dual colorings, k = " + std::to_string(cs.front().k()));
  return r.finish();
}

int cmd_enumerate(const Options& opt, const std::string& path, bool maximal) {
  Report r{opt};
  auto ctx = make_context(load_triangulation(path));
  const int size = ctx->tri.edge_count() + ctx->tri.face_count();
  require(size <= opt.max_size, "enumerate: " + std::to_string(size) + " simplices exceed --max-size");
  auto list = maximal ? enumerate_maximal(ctx) : enumerate_internal(ctx);
  r.doc["structures"] = json::array();
  int colorings = 0, full = 0;
  for (const auto& s : list) {
    auto j = structure_json(s);
    std::string extra;
    if (maximal) {
      int n = static_cast<int>(dual_colorings(s).size());
      j["colorings"] = n;
      colorings += n;
      extra = " colorings " + std::to_string(n);
    }
    full += is_full(s) ? 1 : 0;
    r.doc["structures"].push_back(j);
    r.line(s.key() + " tori " + std::to_string(s.torus_count()) + (is_full(s) ? " full" : " not-full") + extra);
  }
  std::string summary = std::to_string(list.size()) + (maximal ? " maximal" : " internal") + " structures";
  if (maximal) summary += " (" + std::to_string(colorings) + " dual colorings)";
  r.line(summary + ", " + std::to_string(full) + " full");
  return r.finish();
}

int cmd_remove(const Options& opt, const std::string& path, bool random) {
  Report r{opt};
  auto ctx = make_context(load_triangulation(path));
  auto res = greedy_removal(full_footprint(ctx), {random, opt.seed});
  MoveTrace trace;
  r.doc["steps"] = json::array();
  for (const auto& st : res.steps) {
    trace.push("remove", {st.face});
    r.doc["steps"].push_back({{"face", st.face}, {"rule", std::string(1, st.rule)}});
    r.line("remove face " + std::to_string(st.face) + " (" + st.rule + ")");
  }
  if (!opt.trace_out.empty()) write_file(opt.trace_out, format_trace(trace));
  r.doc["structure"] = structure_json(res.structure);
  r.ok = is_tau_maximal(res.structure);
  r.line(std::to_string(res.steps.size()) + " faces removed, " + std::to_string(res.structure.torus_count()) + " lateral tori, " +
         (r.ok ? "maximal" : "not maximal"));
  const std::string out = format_structure(res.structure, fs::absolute(locate(path)).string());
  if (!opt.output.empty()) write_file(opt.output, out);
  else if (!opt.json) std::cout << out;
  return r.finish();
}

int cmd_relate(const Options& opt, const std::string& a_path, const std::string& b_path) {
  Report r{opt};
  ContextPtr ctx;
  auto a = load_structure(a_path, &ctx);
  auto other = load_structure(b_path);
  require(other.tri() == a.tri(), "relate: the structures live on different triangulations");
  InducedProtoMom b(ctx, other.kept_edges(), other.kept_faces());
  auto trace = relate(a, b);
  const std::string text = format_trace(trace);
  // The emitted text replays to the target.
  r.ok = replay_structure(a, parse_trace(text)).key() == b.key();
  int c = 0;
  for (const auto& m : trace.moves) c += m.kind[0] == 'c' ? 1 : 0;
  emit_trace(opt, r, text);
  r.line(std::to_string(trace.size()) + " moves (" + std::to_string(c) + " C, " + std::to_string(trace.size() - c) + " M), " +
         (r.ok ? "replay ends at the target" : "replay mismatch"));
  return r.finish();
}

int cmd_simplify(const Options& opt, const std::string& path) {
  Report r{opt};
  auto s = parse_surface(text::read_file(locate(path)));
  auto rep = simplify_torus_report(s);
  const std::string text = format_trace(rep.trace);
  auto end = replay(s, parse_trace(text));
  r.ok = end.triangle_count() == 2 && end.vertex_count() == 1;
  emit_trace(opt, r, text);
  r.doc["moves"] = rep.trace.size();
  r.doc["bound_violations"] = rep.bound_violations;
  r.doc["end"] = format_surface(end);
  r.line(std::to_string(rep.trace.size()) + " moves, " + std::to_string(end.triangle_count()) + " triangles");
  return r.finish();
}

int cmd_fill(const Options& opt, const std::string& path, long a, long b) {
  Report r{opt};
  auto s = parse_surface(text::read_file(locate(path)));
  auto m = surface_cocycle(s, a, b);
  auto f = fill_solid_torus(s, m);
  verify_fill(s, m, f);
  const std::string text = format_fill_trace(f.trace);
  r.ok = assemble_fill(s, m, parse_fill_trace(text)).complex == f.complex;
  emit_trace(opt, r, text);
  if (!opt.output.empty()) write_file(opt.output, format_triangulation(f.complex));
  r.doc["tets"] = f.complex.tet_count();
  r.line(std::to_string(f.complex.tet_count()) + " tets, " + std::to_string(f.trace.steps.size()) + " steps, cap of " +
         std::to_string(f.trace.cap.layerings.size() + 1) + " tets");
  return r.finish();
}

int cmd_assemble(const Options& opt, const std::string& path) {
  Report r{opt};
  auto s = load_structure(path);
  auto a = assemble_ideal_triangulation(s);
  r.ok = a.ok();
  auto genera = boundary_genera(a.tri);
  r.doc["tets"] = a.tri.tet_count();
  r.doc["boundary_genera"] = genera;
  r.doc["problems"] = a.problems;
  r.doc["image"] = structure_json(a.image);
  if (!opt.output.empty()) write_file(opt.output, format_triangulation(a.tri));
  r.line(std::to_string(a.tri.tet_count()) + " tets, " + genus_text(genera) + ", " +
         std::to_string(a.fills.size()) + " solid tori");
  for (const auto& p : a.problems) r.line("problem: " + p);
  r.line(r.ok ? "certificate ok: structure is induced by the new triangulation" : "certificate failed");
  return r.finish();
}

int cmd_connectivity(const Options& opt, const std::vector<std::string>& paths) {
  Report r{opt};
  std::vector<Multigraph> graphs;
  if (paths.empty())
    for (int n = 1; n <= std::min(opt.max_size, 3); ++n)
      for (auto& g : four_valent_graphs(n)) graphs.push_back(std::move(g));
  for (const auto& p : paths) graphs.push_back(parse_graph(text::read_file(locate(p))));
  struct Row {
    ConnectivityCertificate minimal, general;
  };
  std::vector<Row> rows(graphs.size());
  std::vector<std::future<void>> running;
  const int jobs = std::max(1, opt.jobs);
  for (int w = 0; w < jobs; ++w)
    running.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < graphs.size(); i += jobs) {
        auto g = std::make_shared<const Multigraph>(graphs[i]);
        rows[i] = {verify_move_connectivity(g, true), verify_move_connectivity(g, false)};
      }
    }));
  for (auto& f : running) f.get();
  r.doc["graphs"] = json::array();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& [mn, gn] = rows[i];
    r.ok = r.ok && mn.components == 1 && gn.components == 1;
    r.doc["graphs"].push_back({{"vertices", graphs[i].vertex_count()},
                               {"minimal", {{"states", mn.states}, {"components", mn.components}}},
                               {"general", {{"states", gn.states}, {"components", gn.components}}}});
    r.line("graph " + std::to_string(i) + " (" + std::to_string(graphs[i].vertex_count()) + " vertices): minimal " +
           std::to_string(mn.states) + " states in " + std::to_string(mn.components) + " component(s), general " +
           std::to_string(gn.states) + " states in " + std::to_string(gn.components) + " component(s)");
  }
  r.line(std::to_string(graphs.size()) + " graphs, " + (r.ok ? "all connected" : "some state graph is disconnected"));
  return r.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangulations, Mom-subgraphs and protoMom-structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--seed", opt.seed, "Seed for randomized commands");
  app.add_option("--jobs", opt.jobs, "Worker threads for independent instances");
  app.add_flag("--json", opt.json, "Print one JSON document");
  app.add_option("--trace-out", opt.trace_out, "Write the trace here instead of stdout");
  app.add_option("-o,--output", opt.output, "Write the resulting triangulation or structure here");
  app.add_option("--max-size", opt.max_size, "Enumeration bound");

  std::string path, path2;
  bool maximal = false, random = false;
  long a = 1, b = 0;
  std::vector<std::string> paths;
  int code = 0;

  auto* v = app.add_subcommand("validate", "Check an ideal triangulation");
  v->add_option("triangulation", path)->required();
  v->callback([&] { code = cmd_validate(opt, path); });

  auto* d = app.add_subcommand("dual", "Dual graph, or the dual colorings of a structure");
  d->add_option("triangulation", path);
  d->add_option("--structure", path2);
  d->callback([&] {
    require(!path.empty() || !path2.empty(), "dual: give a triangulation or --structure");
    code = cmd_dual(opt, path, path2);
  });

  auto* e = app.add_subcommand("enumerate", "Internal or maximal structures");
  e->add_option("triangulation", path)->required();
  e->add_flag("--maximal", maximal);
  e->callback([&] { code = cmd_enumerate(opt, path, maximal); });

  auto* rm = app.add_subcommand("remove", "Greedy face removal from the whole footprint");
  rm->add_option("triangulation", path)->required();
  rm->add_flag("--random", random, "Pick applicable faces at random");
  rm->callback([&] { code = cmd_remove(opt, path, random); });

  auto* rel = app.add_subcommand("relate", "Trace of M- and C-moves between two structures");
  rel->add_option("from", path)->required();
  rel->add_option("to", path2)->required();
  rel->callback([&] { code = cmd_relate(opt, path, path2); });

  auto* sim = app.add_subcommand("simplify", "Reduce a torus triangulation to two triangles");
  sim->add_option("surface", path)->required();
  sim->callback([&] { code = cmd_simplify(opt, path); });

  auto* fill = app.add_subcommand("fill", "Fill a torus triangulation with a solid torus");
  fill->add_option("surface", path)->required();
  fill->add_option("--meridian", a, "Meridian value on the first generator edge")->default_val(1);
  fill->add_option("--meridian2", b, "Meridian value on the second generator edge")->default_val(0);
  fill->callback([&] { code = cmd_fill(opt, path, a, b); });

  auto* as = app.add_subcommand("assemble", "Rebuild an ideal triangulation inducing a full structure");
  as->add_option("structure", path)->required();
  as->callback([&] { code = cmd_assemble(opt, path); });

  auto* vc = app.add_subcommand("verify-connectivity", "Move connectivity of Mom-subgraph state graphs");
  vc->add_option("graphs", paths, "Graph files; the 4-valent corpus up to --max-size vertices when omitted");
  vc->callback([&] { code = cmd_connectivity(opt, paths); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.kind() == ErrorKind::parse ? 2 : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return code;
}
