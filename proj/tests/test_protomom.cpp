#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "momkit/error.hpp"
#include "momkit/protomom.hpp"
#include "momkit/text.hpp"
#include "oracle.hpp"

using namespace momkit;

namespace {

const std::vector<std::string> kFixtures{"fig8.tri", "fig8_sister.tri", "genus2.tri", "fig8_3tet.tri"};

ContextPtr load(const std::string& name) {
  return make_context(parse_triangulation(text::read_file(std::string(MOMKIT_FIXTURE_DIR) + "/" + name)));
}

InducedProtoMom structure(const ContextPtr& ctx, const std::vector<int>& edges, const std::vector<int>& faces) {
  return {ctx, to_mask(ctx->tri.edge_count(), edges), to_mask(ctx->tri.face_count(), faces)};
}

InducedProtoMom all_edges(const ContextPtr& ctx, const std::vector<int>& faces) {
  std::vector<int> e(ctx->tri.edge_count());
  std::iota(e.begin(), e.end(), 0);
  return structure(ctx, e, faces);
}

// Tetrahedra reachable through unkept faces, by flood fill.
std::set<std::set<int>> tet_groups(const InducedProtoMom& s) {
  const auto& tri = s.tri();
  std::vector<int> seen(tri.tet_count(), -1);
  std::set<std::set<int>> out;
  for (int t0 = 0; t0 < tri.tet_count(); ++t0) {
    if (seen[t0] >= 0) continue;
    std::set<int> group;
    std::vector<int> stack{t0};
    seen[t0] = t0;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      group.insert(t);
      for (int f = 0; f < 4; ++f) {
        if (s.face_kept(tri.face_class(t, f))) continue;
        int u = tri.gluing(t, f).tet;
        if (seen[u] < 0) {
          seen[u] = t0;
          stack.push_back(u);
        }
      }
    }
    out.insert(group);
  }
  return out;
}

using oracle::count_general_colorings;

std::set<std::string> keys(const std::vector<InducedProtoMom>& v) {
  std::set<std::string> out;
  for (const auto& s : v) out.insert(s.key());
  return out;
}

}  // namespace

TEST_CASE("footprint of the whole triangulation") {
  auto ctx = load("fig8.tri");
  auto s = full_footprint(ctx);
  CHECK(s.kept_edge_count() == 2);
  CHECK(s.kept_face_count() == 4);
  REQUIRE(s.lateral().size() == 2);
  for (const auto& l : s.lateral()) CHECK(l.kind == LateralKind::sphere);
  CHECK(s.valence(0) == 6);
  CHECK(s.valence(1) == 6);
  CHECK(s.genuine());
  CHECK_FALSE(s.internal_valid());
  auto ls = lakes(s);
  CHECK(ls.size() == 8);
  CHECK(is_full(s));
  CHECK_THROWS_AS(structure(ctx, {0}, {0, 1, 2, 3}), Error);
}

TEST_CASE("lateral components match a flood fill") {
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    const int F = ctx->tri.face_count();
    for (int mask = 0; mask < (1 << F); ++mask) {
      std::vector<int> faces;
      for (int c = 0; c < F; ++c)
        if (mask >> c & 1) faces.push_back(c);
      auto s = all_edges(ctx, faces);
      std::set<std::set<int>> groups;
      for (const auto& l : s.lateral()) groups.insert({l.tets.begin(), l.tets.end()});
      CHECK(groups == tet_groups(s));
    }
  }
  // Nothing kept but the edges: one component whose boundary has genus 3.
  auto fig8 = load("fig8.tri");
  auto open = all_edges(fig8, {});
  REQUIRE(open.lateral().size() == 1);
  CHECK(open.lateral()[0].euler == -4);
  CHECK(open.lateral()[0].kind == LateralKind::other);
}

TEST_CASE("greedy removal on the figure-eight") {
  auto ctx = load("fig8.tri");
  auto r = greedy_removal(full_footprint(ctx));
  REQUIRE(r.steps.size() == 2);
  CHECK(r.steps[0].rule == 'a');
  CHECK(r.steps[1].rule == 'c');
  CHECK(r.structure.internal_valid());
  CHECK(r.structure.torus_count() == 1);
  CHECK(is_tau_maximal(r.structure));
}

TEST_CASE("randomized removal always ends maximal") {
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto r = greedy_removal(full_footprint(ctx), {true, seed});
      CAPTURE(name);
      CAPTURE(seed);
      CHECK(r.structure.internal_valid());
      CHECK(is_tau_maximal(r.structure));
      // Every deletion lowers the sphere count or closes one up; each tet is used once.
      CHECK(static_cast<int>(r.steps.size()) == ctx->tri.tet_count());
    }
  }
}

TEST_CASE("maximal structures: brute force against the duality") {
  std::map<std::string, int> maximal_count;
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    auto internal = enumerate_internal(ctx);
    auto brute = oracle::maximal_by_containment(internal);
    auto brute_keys = keys(brute);
    for (const auto& s : internal) CHECK(is_tau_maximal(s) == (brute_keys.count(s.key()) == 1));
    auto dual = enumerate_maximal(ctx);
    CAPTURE(name);
    CHECK(keys(brute) == keys(dual));
    maximal_count[name] = static_cast<int>(brute.size());
    // The colorings split by structure.
    const int colorings = count_general_colorings(*ctx->graph);
    int sum = 0;
    for (const auto& s : dual) {
      auto ds = dual_colorings(s);
      sum += static_cast<int>(ds.size());
      for (const auto& m : ds) CHECK(from_mom_coloring(ctx, m) == s);
      CHECK(from_mom_coloring(ctx, to_mom_coloring(s)) == s);
      CHECK(s.kept_edge_count() == ctx->tri.edge_count());
    }
    CHECK(sum == colorings);
    CHECK(static_cast<int>(enumerate_moms(ctx->graph, MomKind::general).size()) == colorings);
    if (name == "fig8.tri") CHECK(colorings == 12);
  }
  CHECK(maximal_count["fig8.tri"] == 6);
  CHECK(maximal_count["fig8_sister.tri"] == 6);
  CHECK(maximal_count["genus2.tri"] == 6);
  CHECK(maximal_count["fig8_3tet.tri"] == 20);
}

TEST_CASE("dual coloring needs a maximal structure") {
  auto ctx = load("fig8.tri");
  CHECK_THROWS_AS(to_mom_coloring(full_footprint(ctx)), Error);
  CHECK_THROWS_AS(to_mom_coloring(structure(ctx, {}, {})), Error);
}

TEST_CASE("handle count on maximal structures") {
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    auto genera = boundary_genera(ctx->tri);
    const int g = std::accumulate(genera.begin(), genera.end(), 0);
    const int cusps = static_cast<int>(genera.size());
    for (const auto& s : enumerate_maximal(ctx)) CHECK(s.kept_edge_count() == s.kept_face_count() + cusps - g);
  }
  auto fig8 = load("fig8.tri");
  for (const auto& s : enumerate_maximal(fig8)) {
    CHECK(s.kept_face_count() == 2);
    CHECK(s.kept_edge_count() == 2);
  }
}

TEST_CASE("lakes and fullness") {
  auto ctx = load("fig8.tri");
  auto full = all_edges(ctx, {1, 3});
  auto annular = all_edges(ctx, {2, 3});
  CHECK(is_tau_maximal(full));
  CHECK(is_tau_maximal(annular));
  CHECK(is_full(full));
  CHECK_FALSE(is_full(annular));
  auto ls = lakes(annular);
  int rings = 0;
  for (const auto& l : ls)
    if (l.euler == 0) {
      ++rings;
      CHECK(l.triangles.size() == 2);
    }
  CHECK(rings == 1);
  CHECK(annular.valence(0) == 3);
  CHECK(annular.valence(1) == 3);
  int full_count = 0;
  for (const auto& s : enumerate_maximal(ctx)) full_count += is_full(s) ? 1 : 0;
  CHECK(full_count == 2);
}

TEST_CASE("C-moves") {
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    for (const auto& s : enumerate_internal(ctx)) {
      for (int e : c_collapses(s)) {
        auto d = c_collapse(s, e);
        CHECK(d.kept_edge_count() == s.kept_edge_count() - 1);
        CHECK(d.kept_face_count() == s.kept_face_count() - 1);
        bool back = false;
        for (auto [e2, f2] : c_expansions(d))
          if (e2 == e && c_expand(d, e2, f2) == s) back = true;
        CHECK(back);
      }
      for (auto [e, f] : c_expansions(s)) {
        auto u = c_expand(s, e, f);
        CHECK(u.internal_valid());
        CHECK(u.valence(e) == 1);
        CHECK(c_collapse(u, e) == s);
      }
    }
  }
  auto fig8 = load("fig8.tri");
  auto m = all_edges(fig8, {1, 3});
  CHECK(c_collapses(m).empty());
  CHECK_THROWS_AS(c_collapse(m, 0), Error);
  CHECK_THROWS_AS(c_expand(m, 0, 0), Error);
}

TEST_CASE("M-moves act through the dual coloring") {
  std::map<std::string, int> seen;
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    for (const auto& s : enumerate_maximal(ctx)) {
      for (const auto& m : dual_colorings(s))
        for (const auto& [mv, next] : admissible_moves(m, {"m1", "m2", "m2prime", "m3", "m3bar"})) {
          auto n = from_mom_coloring(ctx, next);
          CHECK(n.internal_valid());
          CHECK(is_tau_maximal(n));
          CHECK(n.torus_count() == next.k());
          if (mv.kind == "m1" || mv.kind == "m2") {
            // Swapping two non-f edges leaves the kept faces alone; moving f trades one face.
            const bool f1 = m.color(mv.params[1]) == Color::f, f2 = m.color(mv.params[2]) == Color::f;
            int diff = 0;
            for (int c = 0; c < ctx->tri.face_count(); ++c) diff += n.face_kept(c) != s.face_kept(c) ? 1 : 0;
            CHECK(diff == (f1 != f2 ? 2 : 0));
            if (f1 == f2) CHECK(n == s);
            CHECK(n.kept_face_count() == s.kept_face_count());
          }
          if (mv.kind == "m3") CHECK(n.torus_count() == s.torus_count() - 1);
          ++seen[mv.kind];
        }
      auto canon = to_mom_coloring(s);
      for (const auto& [mv, next] : admissible_moves(canon, {"m1", "m2"})) CHECK(m_move(s, mv) == from_mom_coloring(ctx, next));
    }
  }
  CHECK(seen["m1"] > 0);
  CHECK(seen["m2"] > 0);
}

TEST_CASE("relating full structures") {
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    std::vector<InducedProtoMom> full;
    for (const auto& s : enumerate_internal(ctx))
      if (is_full(s)) full.push_back(s);
    CAPTURE(name);
    CHECK(!full.empty());
    for (const auto& a : full)
      for (const auto& b : full) {
        auto trace = relate(a, b);
        std::vector<InducedProtoMom> states;
        CHECK(replay_structure(a, trace, &states) == b);
        for (const auto& x : states) CHECK(x.internal_valid());
        auto again = replay_structure(a, parse_trace(format_trace(trace)));
        CHECK(again == b);
      }
  }
  auto fig8 = load("fig8.tri");
  CHECK(relate(all_edges(fig8, {1, 3}), all_edges(fig8, {1, 3})).empty());
  CHECK_THROWS_AS(relate(all_edges(fig8, {1, 3}), full_footprint(fig8)), Error);
}

TEST_CASE("2-3 move bridge") {
  auto ctx = load("fig8.tri");
  const auto& tri = ctx->tri;
  int bridged = 0;
  for (int c = 0; c < tri.face_count(); ++c) {
    auto [t, f] = tri.face_rep(c);
    if (tri.gluing(t, f).tet == t) continue;
    for (const auto& s : enumerate_maximal(ctx)) {
      if (s.face_kept(c)) continue;
      auto b = pachner_bridge(s, c);
      CHECK(validate(b.context->tri).valid);
      CHECK(b.structure.internal_valid());
      CHECK_FALSE(is_tau_maximal(b.structure));
      REQUIRE(b.expansions.size() == 3);
      std::vector<InducedProtoMom> grown;
      for (auto [e, f2] : b.expansions) {
        auto g = c_expand(b.structure, e, f2);
        CHECK(is_tau_maximal(g));
        CHECK(g.torus_count() == s.torus_count());
        grown.push_back(g);
      }
      for (const auto& x : grown)
        for (const auto& y : grown) CHECK(replay_structure(x, relate(x, y)) == y);
      ++bridged;
    }
  }
  CHECK(bridged > 0);
  auto m = enumerate_maximal(ctx).front();
  for (int c = 0; c < tri.face_count(); ++c)
    if (m.face_kept(c)) CHECK_THROWS_AS(pachner_bridge(m, c), Error);
}

TEST_CASE("lateral tori of full structures") {
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    for (const auto& s : enumerate_internal(ctx)) {
      if (!is_full(s)) continue;
      auto ls = lakes(s);
      for (int i = 0; i < static_cast<int>(s.lateral().size()); ++i) {
        auto lt = induced_lateral_triangulation(s, i);
        const auto& surf = lt.surface;
        CAPTURE(name);
        CAPTURE(s.key());
        CHECK(surf.vertex_count() - surf.edge_count() + surf.triangle_count() == 0);
        CHECK(surf.triangle_count() % 2 == 0);
        int sides = 0;
        for (int t : s.lateral()[i].tets)
          for (int f = 0; f < 4; ++f) sides += s.face_kept(ctx->tri.face_class(t, f)) ? 1 : 0;
        CHECK(surf.triangle_count() == sides);
        int facing = 0;
        for (const auto& l : ls) facing += l.lateral == i ? 1 : 0;
        CHECK(surf.vertex_count() == facing);
        CHECK(is_surface_cocycle(surf, lt.meridian));
        long g = 0;
        for (long x : lt.meridian) g = std::gcd(g, x);
        CHECK(g == 1);
      }
    }
  }
  auto fig8 = load("fig8.tri");
  CHECK_THROWS_AS(induced_lateral_triangulation(all_edges(fig8, {2, 3}), 0), Error);
}

TEST_CASE("assembling full structures") {
  int assembled = 0;
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    auto h = oracle::first_homology(ctx->tri);
    for (const auto& s : enumerate_internal(ctx)) {
      if (!is_full(s)) continue;
      auto a = assemble_ideal_triangulation(s);
      CAPTURE(name);
      CAPTURE(s.key());
      for (const auto& p : a.problems) MESSAGE(p);
      CHECK(a.ok());
      CHECK(validate(a.tri).valid);
      CHECK(boundary_genera(a.tri) == boundary_genera(ctx->tri));
      // Filling the lateral tori back in rebuilds the same manifold.
      CHECK(oracle::first_homology(a.tri) == h);
      REQUIRE(a.fills.size() == a.laterals.size());
      for (std::size_t i = 0; i < a.fills.size(); ++i)
        CHECK(a.fills[i].complex.vertex_count() == a.laterals[i].surface.vertex_count());
      CHECK(a.image.kept_face_count() == s.kept_face_count());
      CHECK(a.image.kept_edge_count() == s.kept_edge_count());
      CHECK(a.image.torus_count() == s.torus_count());
      ++assembled;
    }
  }
  CHECK(assembled > 0);
  auto fig8 = load("fig8.tri");
  auto a = assemble_ideal_triangulation(all_edges(fig8, {1, 3}));
  CHECK(a.tri.tet_count() == 5);
  CHECK_THROWS_AS(assemble_ideal_triangulation(all_edges(fig8, {2, 3})), Error);
}

TEST_CASE("normalizing to a genuine structure") {
  std::map<std::size_t, int> lengths;
  for (const auto& name : kFixtures) {
    auto ctx = load(name);
    const int E = ctx->tri.edge_count(), F = ctx->tri.face_count();
    for (int mask = 0; mask < (1 << (E + F)); ++mask) {
      std::vector<int> edges, faces;
      for (int i = 0; i < E; ++i)
        if (mask >> i & 1) edges.push_back(i);
      for (int i = 0; i < F; ++i)
        if (mask >> (E + i) & 1) faces.push_back(i);
      bool closed = true;
      for (int c : faces)
        for (int e : ctx->tri.face_edges(c)) closed = closed && std::count(edges.begin(), edges.end(), e);
      if (!closed) continue;
      auto s = structure(ctx, edges, faces);
      auto n = normalize_to_genuine(s);
      CHECK(c_collapses(n.structure).empty());
      CHECK(n.structure.torus_count() == s.torus_count());
      CHECK(n.structure.lateral().size() == s.lateral().size());
      if (n.stuck.empty()) CHECK(n.structure.genuine());
      for (int e : n.stuck) CHECK(n.structure.valence(e) == 0);
      ++lengths[n.trace.size()];
    }
  }
  CHECK(lengths[1] > 0);
  CHECK(lengths[2] > 0);
  auto fig8 = load("fig8.tri");
  auto m = all_edges(fig8, {1, 3});
  CHECK(normalize_to_genuine(m).trace.empty());
}

TEST_CASE("structure files") {
  auto ctx = load("fig8.tri");
  auto f = parse_structure(text::read_file(std::string(MOMKIT_FIXTURE_DIR) + "/fig8_full.struct"));
  CHECK(f.triangulation == "fig8.tri");
  auto s = structure_from_file(ctx, f);
  CHECK(s == all_edges(ctx, {1, 3}));
  auto again = structure_from_file(ctx, parse_structure(format_structure(s, "fig8.tri")));
  CHECK(again == s);
  CHECK_THROWS_AS(parse_structure("keep-edges 0\n"), Error);
  CHECK_THROWS_AS(parse_structure("triangulation a b\n"), Error);
  CHECK_THROWS_AS(parse_structure("triangulation a\nkeep-loops 1\n"), Error);
  CHECK_THROWS_AS(structure_from_file(ctx, parse_structure("triangulation a\nkeep-edges 7\n")), Error);
  CHECK_THROWS_AS(structure_from_file(ctx, parse_structure("triangulation a\nkeep-faces 1\n")), Error);
}
