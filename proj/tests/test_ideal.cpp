#include <algorithm>
#include <set>

#include "doctest.h"
#include "momkit/error.hpp"
#include "momkit/ideal.hpp"
#include "momkit/text.hpp"
#include "oracle.hpp"

using namespace momkit;

namespace {

IdealTriangulation fixture(const std::string& name) {
  return parse_triangulation(text::read_file(std::string(MOMKIT_FIXTURE_DIR) + "/" + name));
}

// Edge classes by repeated closure over the face identifications, without
// union-find: returns the partition of the 6T tetrahedron edges.
std::set<std::set<int>> edge_classes_by_closure(const IdealTriangulation& tri) {
  const int n = 6 * tri.tet_count();
  std::vector<std::set<int>> cls(n);
  for (int i = 0; i < n; ++i) cls[i] = {i};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < tri.tet_count(); ++t)
      for (int f = 0; f < 4; ++f) {
        const auto& g = tri.gluing(t, f);
        if (!g.glued()) continue;
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) {
            if (a == f || b == f) continue;
            int x = 6 * t + edge_number(a, b), y = 6 * g.tet + edge_number(g.perm[a], g.perm[b]);
            if (cls[x] == cls[y]) continue;
            std::set<int> u = cls[x];
            u.insert(cls[y].begin(), cls[y].end());
            for (int m : u) cls[m] = u;
            changed = true;
          }
      }
  }
  return {cls.begin(), cls.end()};
}

std::set<std::set<int>> edge_classes_of(const IdealTriangulation& tri) {
  std::vector<std::set<int>> out(tri.edge_count());
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int e = 0; e < 6; ++e) {
      auto [a, b] = edge_vertices(e);
      out[tri.edge_class(t, a, b)].insert(6 * t + e);
    }
  return {out.begin(), out.end()};
}

const std::vector<std::string> kFixtures{"fig8.tri", "fig8_sister.tri", "genus2.tri", "fig8_3tet.tri"};

}  // namespace

TEST_CASE("figure-eight fixture") {
  auto tri = fixture("fig8.tri");
  auto r = validate(tri);
  CHECK(r.valid);
  CHECK(tri.tet_count() == 2);
  CHECK(tri.edge_count() == 2);
  CHECK(tri.edge(0).degree() == 6);
  CHECK(tri.edge(1).degree() == 6);
  CHECK(r.genera() == std::vector<int>{1});
  auto h = oracle::first_homology(tri);
  CHECK(h.rank == 1);
  CHECK(h.torsion.empty());
  auto d = dual_graph(tri);
  CHECK(d.graph.vertex_count() == 2);
  CHECK(d.graph.edge_count() == 4);
  CHECK(d.graph.is_four_valent());
}

TEST_CASE("sister and genus-2 fixtures") {
  auto sister = fixture("fig8_sister.tri");
  CHECK(validate(sister).valid);
  auto h = oracle::first_homology(sister);
  CHECK(h.rank == 1);
  CHECK(h.torsion == std::vector<long>{5});
  auto g2 = fixture("genus2.tri");
  auto r = validate(g2);
  CHECK(r.valid);
  CHECK(g2.edge_count() == 1);
  CHECK(g2.edge(0).degree() == 12);
  CHECK(r.genera() == std::vector<int>{2});
  CHECK(oracle::first_homology(g2).rank == 2);
}

TEST_CASE("edge classes match the closure oracle") {
  for (const auto& name : kFixtures) {
    auto tri = fixture(name);
    CHECK(edge_classes_of(tri) == edge_classes_by_closure(tri));
    int total = 0;
    for (int c = 0; c < tri.edge_count(); ++c) total += tri.edge(c).degree();
    CHECK(total == 6 * tri.tet_count());
  }
}

TEST_CASE("one-tetrahedron gluings") {
  // Every way to pair the faces of one tetrahedron; count the valid ones.
  std::vector<Perm4> perms;
  Perm4 p{0, 1, 2, 3};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  int total = 0, valid = 0, orientable = 0, klein = 0;
  for (auto [f1, f2, f3, f4] : {std::array<int, 4>{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}})
    for (const auto& p1 : perms)
      for (const auto& p2 : perms) {
        if (p1[f1] != f2 || p2[f3] != f4) continue;
        std::vector<std::array<FaceGluing, 4>> g(1);
        g[0][f1] = {0, f2, p1};
        g[0][f2] = {0, f1, perm_inverse(p1)};
        g[0][f3] = {0, f4, p2};
        g[0][f4] = {0, f3, perm_inverse(p2)};
        IdealTriangulation tri(g);
        ++total;
        if (tri.orientation()) ++orientable;
        auto r = validate(tri);
        if (r.valid) ++valid;
        if (!tri.orientation() && tri.edges_valid() && r.links.size() == 1 && r.links[0].euler == 0) ++klein;
        // Orientable one-tetrahedron gluings only ever produce sphere links.
        if (tri.orientation())
          for (const auto& l : r.links) CHECK(l.euler == 2);
      }
  CHECK(total == 108);
  CHECK(orientable == 27);
  CHECK(valid == 0);
  CHECK(klein == 12);  // Gieseking-type gluings, cusp a Klein bottle
}

TEST_CASE("one tetrahedron with both pairs self-glued has two dual loops") {
  auto tri = parse_triangulation("tets 1\nglue 0.0 0.1 perm=023\nglue 0.2 0.3 perm=012\n");
  auto d = dual_graph(tri);
  CHECK(d.graph.vertex_count() == 1);
  CHECK(d.graph.edge_count() == 2);
  CHECK(d.graph.edge(0).is_loop());
  CHECK(d.graph.edge(1).is_loop());
  CHECK(d.dual_edge == std::vector<int>{0, 1});
}

TEST_CASE("boundary euler characteristic is twice that of the manifold") {
  for (const auto& name : kFixtures) {
    auto tri = fixture(name);
    int chi = 0;
    for (const auto& l : vertex_links(tri)) chi += l.euler;
    CHECK(chi == 2 * (tri.edge_count() - tri.tet_count()));
  }
}

TEST_CASE("disjoint union has a disconnected dual") {
  auto a = fixture("fig8.tri");
  auto b = fixture("fig8_sister.tri");
  auto g = a.gluings();
  for (auto tet : b.gluings()) {
    for (auto& x : tet) x.tet += a.tet_count();
    g.push_back(tet);
  }
  IdealTriangulation both(g);
  auto r = validate(both);
  CHECK(r.valid);
  CHECK(r.genera() == std::vector<int>{1, 1});
  auto d = dual_graph(both);
  CHECK_FALSE(d.graph.is_connected());
  CHECK(components(d.graph).count() == 2);
}

TEST_CASE("orientation-reversing pairing is rejected") {
  // Same face pairing as the figure-eight but one odd permutation.
  auto tri = parse_triangulation("tets 2\nglue 0.0 1.0 perm=132\nglue 0.1 1.1 perm=230\nglue 0.2 1.2 perm=130\nglue 0.3 1.3 perm=120\n");
  auto r = validate(tri);
  CHECK_FALSE(r.valid);
  CHECK(std::find(r.problems.begin(), r.problems.end(), "not orientable") != r.problems.end());
}

TEST_CASE("text round trip and parse errors") {
  for (const auto& name : kFixtures) {
    auto tri = fixture(name);
    CHECK(parse_triangulation(format_triangulation(tri)) == tri);
  }
  CHECK_THROWS_AS(parse_triangulation("glue 0.0 1.0 perm=123\n"), Error);
  CHECK_THROWS_AS(parse_triangulation("tets 1\nglue 0.0 0.0 perm=123\n"), Error);
  CHECK_THROWS_AS(parse_triangulation("tets 1\nglue 0.0 0.1 perm=112\n"), Error);
  CHECK_THROWS_AS(parse_triangulation("tets 1\nglue 0.0 0.1 perm=123\n"), Error);  // image contains 1
  CHECK_THROWS_AS(parse_triangulation("tets 1\nglue 0.0 0.1 perm=023\nglue 0.0 0.2 perm=013\n"), Error);
  try {
    parse_triangulation("tets x\n");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
}

TEST_CASE("validation reports problems") {
  auto open = parse_triangulation("tets 1\nglue 0.0 0.1 perm=023\n");
  auto r = validate(open);
  CHECK_FALSE(r.valid);
  CHECK(r.problems.size() == 2);
  CHECK_FALSE(open.fully_glued());
}

TEST_CASE("2-3 move on every face of every fixture") {
  for (const auto& name : kFixtures) {
    auto tri = fixture(name);
    auto h = oracle::first_homology(tri);
    auto genera = validate(tri).genera();
    for (int c = 0; c < tri.face_count(); ++c) {
      auto [t, f] = tri.face_rep(c);
      if (tri.gluing(t, f).tet == t) {
        CHECK_THROWS_AS(pachner23(tri, c), Error);
        continue;
      }
      auto r = pachner23(tri, c);
      CAPTURE(name);
      CAPTURE(c);
      auto v = validate(r.tri);
      CHECK(v.valid);
      CHECK(v.genera() == genera);
      CHECK(r.tri.tet_count() == tri.tet_count() + 1);
      CHECK(r.tri.edge_count() == tri.edge_count() + 1);
      CHECK(r.tri.face_count() == tri.face_count() + 2);
      CHECK(oracle::first_homology(r.tri) == h);
      CHECK(edge_classes_of(r.tri) == edge_classes_by_closure(r.tri));
      std::set<int> edges(r.edge_map.begin(), r.edge_map.end());
      CHECK(edges.size() == r.edge_map.size());
      CHECK_FALSE(edges.count(r.new_edge));
      std::set<int> faces;
      for (int x : r.face_map)
        if (x >= 0) faces.insert(x);
      for (int x : r.new_faces) faces.insert(x);
      CHECK(static_cast<int>(faces.size()) == r.tri.face_count());
      for (int x : r.new_faces) {
        auto fe = r.tri.face_edges(x);
        CHECK(std::count(fe.begin(), fe.end(), r.new_edge) == 1);
      }
      // Old faces keep their edges under the maps.
      for (int old = 0; old < tri.face_count(); ++old) {
        if (old == c) continue;
        auto a = tri.face_edges(old), b = r.tri.face_edges(r.face_map[old]);
        std::multiset<int> ma, mb(b.begin(), b.end());
        for (int e : a) ma.insert(r.edge_map[e]);
        CHECK(ma == mb);
      }
    }
  }
}

TEST_CASE("boundary surface of a single tetrahedron") {
  std::vector<std::array<FaceGluing, 4>> g(1);
  IdealTriangulation tri(g);
  auto b = boundary_surface(tri);
  CHECK(b.surface.triangle_count() == 4);
  CHECK(b.surface.euler() == 2);
  auto links = vertex_links(tri);
  CHECK(links.size() == 4);
  for (const auto& l : links) {
    CHECK(l.euler == 1);
    CHECK(l.boundary_circles == 1);
  }
  CHECK_THROWS_AS(boundary_surface(fixture("fig8.tri")), Error);
}
