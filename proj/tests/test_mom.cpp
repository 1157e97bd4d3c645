#include <map>
#include <set>

#include "doctest.h"
#include "momkit/error.hpp"
#include "momkit/mom.hpp"

using namespace momkit;

namespace {

GraphPtr make(const std::string& text) { return std::make_shared<const Multigraph>(parse_graph(text)); }

GraphPtr bouquet() { return make("vertices 1\nedge 0.0 0.1\nedge 0.2 0.3\n"); }
GraphPtr four_parallel() { return make("vertices 2\nedge 0.0 1.0\nedge 0.1 1.1\nedge 0.2 1.2\nedge 0.3 1.3\n"); }
// Edges 0, 1 are loops at vertices 0, 1; edges 2, 3 join them.
GraphPtr loops_and_joins() { return make("vertices 2\nedge 0.0 0.1\nedge 1.0 1.1\nedge 0.2 1.2\nedge 0.3 1.3\n"); }

std::vector<GraphPtr> corpus() {
  std::vector<GraphPtr> out;
  for (int n = 1; n <= 3; ++n)
    for (auto& g : four_valent_graphs(n)) out.push_back(std::make_shared<const Multigraph>(std::move(g)));
  return out;
}

std::vector<Color> parse_colors(const std::string& s) {
  std::vector<Color> cs;
  for (char ch : s) cs.push_back(ch == 't' ? Color::t : ch == 'c' ? Color::c : Color::f);
  return cs;
}

MomColoring col(const GraphPtr& g, const std::string& s) { return MomColoring(g, parse_colors(s)); }

// Independent oracle: label propagation over t-edges, then per-class counts.
// Returns the number of t-classes, or 0 when the coloring is not a Mom-subgraph.
int oracle_k(const Multigraph& g, const std::vector<Color>& cs) {
  const int n = g.vertex_count();
  std::vector<int> label(n);
  for (int v = 0; v < n; ++v) label[v] = v;
  for (bool changed = true; changed;) {
    changed = false;
    for (int e = 0; e < g.edge_count(); ++e) {
      if (cs[e] != Color::t) continue;
      int a = g.edge(e).a.vertex, b = g.edge(e).b.vertex;
      int m = std::min(label[a], label[b]);
      if (label[a] != m || label[b] != m) {
        label[a] = label[b] = m;
        changed = true;
      }
    }
  }
  std::map<int, int> verts, tedges, cedges;
  for (int v = 0; v < n; ++v) ++verts[label[v]];
  for (int e = 0; e < g.edge_count(); ++e) {
    int a = label[g.edge(e).a.vertex], b = label[g.edge(e).b.vertex];
    if (cs[e] == Color::t) ++tedges[a];
    if (cs[e] == Color::c) {
      if (a != b) return 0;
      ++cedges[a];
    }
  }
  for (auto [l, nv] : verts)
    if (tedges[l] != nv - 1 || cedges[l] != 1) return 0;
  return static_cast<int>(verts.size());
}

std::vector<std::vector<Color>> all_colorings(int E) {
  std::vector<std::vector<Color>> out;
  int total = 1;
  for (int i = 0; i < E; ++i) total *= 3;
  for (int x = 0; x < total; ++x) {
    std::vector<Color> cs;
    for (int i = 0, y = x; i < E; ++i, y /= 3) cs.push_back(static_cast<Color>(y % 3));
    out.push_back(cs);
  }
  return out;
}

}  // namespace

TEST_CASE("classify examples") {
  CHECK(classify(col(bouquet(), "cf")) == MomKind::minimal);
  CHECK(classify(col(four_parallel(), "tcff")) == MomKind::minimal);
  CHECK(classify(col(four_parallel(), "ttcf")) == MomKind::invalid);
  CHECK(classify(col(loops_and_joins(), "ccff")) == MomKind::general);
  CHECK(classify(col(loops_and_joins(), "cctf")) == MomKind::invalid);
}

TEST_CASE("classification agrees with the label-propagation oracle") {
  for (const auto& g : corpus())
    for (const auto& cs : all_colorings(g->edge_count())) {
      MomColoring m(g, cs);
      int k = oracle_k(*g, cs);
      if (k == 0) {
        CHECK(m.kind() == MomKind::invalid);
      } else {
        CHECK(m.kind() == (k == 1 ? MomKind::minimal : MomKind::general));
        CHECK(m.k() == k);
      }
      if (m.kind() == MomKind::minimal) {
        const int V = g->vertex_count();
        CHECK(static_cast<int>(m.edges_of(Color::t).size()) == V - 1);
        CHECK(m.edges_of(Color::c).size() == 1);
        CHECK(static_cast<int>(m.edges_of(Color::f).size()) == V);
      }
    }
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_moms(bouquet(), MomKind::minimal).size() == 2);
  CHECK(enumerate_moms(four_parallel(), MomKind::minimal).size() == 12);
  auto lj = enumerate_moms(loops_and_joins(), MomKind::general);
  int k2 = 0;
  for (const auto& m : lj)
    if (m.k() == 2) {
      ++k2;
      CHECK(m.key() == "ccff");
    }
  CHECK(k2 == 1);
  auto bad = make("vertices 2\nedge 0.0 1.0\nedge 0.1 1.1\n");
  CHECK_THROWS_AS(enumerate_moms(bad, MomKind::minimal), Error);
}

TEST_CASE("m1") {
  CHECK(apply_m1(col(bouquet(), "cf"), 0, 0, 1).key() == "fc");
  auto m = apply_m1(col(four_parallel(), "tcff"), 0, 1, 2);
  CHECK(m.key() == "tfcf");
  CHECK(m.kind() == MomKind::minimal);
  CHECK_THROWS_AS(apply_m1(col(four_parallel(), "tcff"), 0, 0, 2), Error);
  // Disjoint edges: joins 2 and 3 never touch the loop at the other end... use a 3-vertex path.
  auto path = make("vertices 3\nedge 0.0 0.1\nedge 2.0 2.1\nedge 0.2 1.0\nedge 0.3 1.1\nedge 1.2 2.2\nedge 1.3 2.3\n");
  CHECK_THROWS_AS(apply_m1(col(path, "cfttff"), 2, 0, 1), Error);
}

TEST_CASE("m2") {
  auto m = apply_m2(col(four_parallel(), "tcff"), 0, 0, 2);
  CHECK(m.key() == "fctf");
  // e' is the c-edge: accepted, the c role moves to e.
  CHECK(apply_m2(col(four_parallel(), "tcff"), 0, 0, 1).key() == "ctff");
  // A loop at a leaf of a bigger tree is never on the tree path of e.
  auto path = make("vertices 3\nedge 0.0 0.1\nedge 2.0 2.1\nedge 0.2 1.0\nedge 0.3 1.1\nedge 1.2 2.2\nedge 1.3 2.3\n");
  CHECK_THROWS_AS(apply_m2(col(path, "cfftft"), 0, 2, 1), Error);
  CHECK_THROWS_AS(apply_m2(col(path, "cfftft"), 0, 3, 0), Error);
}

TEST_CASE("m2 legal applications all yield valid colorings") {
  int accepted_c = 0;
  for (const auto& g : corpus())
    for (const auto& m : enumerate_moms(g, MomKind::general))
      for (auto& [mv, r] : admissible_moves(m, {"m2"})) {
        CHECK(oracle_k(*g, r.colors()) == m.k());
        if (m.color(mv.params[2]) == Color::c) ++accepted_c;
      }
  CHECK(accepted_c > 0);
}

TEST_CASE("m2tilde expansions replay to the direct swap") {
  auto m = col(four_parallel(), "tcff");
  auto r = apply_m2tilde(m, 0, 2);
  CHECK(r.expansion.size() == 1);
  CHECK(replay(m, r.expansion) == r.result);

  // Square with doubled sides; tree is the path 0-1-2-3 and the chord closes it.
  auto sq = make(
      "vertices 4\nedge 0.0 1.0\nedge 0.1 1.1\nedge 1.2 2.0\nedge 1.3 2.1\n"
      "edge 2.2 3.0\nedge 2.3 3.1\nedge 0.2 3.2\nedge 0.3 3.3\n");
  auto ms = col(sq, "tftftfcf");
  REQUIRE(ms.kind() == MomKind::minimal);
  auto mid = apply_m2tilde(ms, 2, 6);
  CHECK(mid.expansion.size() == 2);
  CHECK(replay(ms, mid.expansion) == mid.result);
  CHECK(mid.result.key() == "tfcftftf");
  CHECK_THROWS_AS(apply_m2tilde(ms, 4, 1), Error);

  for (const auto& g : corpus())
    for (const auto& mm : enumerate_moms(g, MomKind::general))
      for (auto& [mv, res] : admissible_moves(mm, {"m2tilde"})) {
        auto ex = apply_m2tilde(mm, mv.params[0], mv.params[1]).expansion;
        CHECK(replay(mm, ex) == res);
        for (const auto& step : ex.moves) CHECK(step.kind == "m2");
      }
}

TEST_CASE("m2prime") {
  // Path v0 = v1 = v2 with end loops (edges 0, 1).
  auto path = make("vertices 3\nedge 0.0 0.1\nedge 2.0 2.1\nedge 0.2 1.0\nedge 0.3 1.1\nedge 1.2 2.2\nedge 1.3 2.3\n");
  auto m = col(path, "ccfftf");
  REQUIRE(m.k() == 2);
  auto r = apply_m2prime(m, 2, 4);
  CHECK(r.key() == "cctfff");
  CHECK(r.k() == 2);
  CHECK_THROWS_AS(apply_m2prime(m, 5, 4), Error);  // both ends already on T_j
  CHECK(apply_m2prime(r, 4, 2) == m);                 // its own inverse
  // Triangle with a loop at every vertex: v0 lies on C_j.
  auto tri = make("vertices 3\nedge 0.0 0.1\nedge 1.0 1.1\nedge 2.0 2.1\nedge 0.2 1.2\nedge 0.3 2.2\nedge 1.3 2.3\n");
  auto t = col(tri, "cfctff");
  REQUIRE(t.k() == 2);
  CHECK_THROWS_AS(apply_m2prime(t, 4, 3), Error);
}

TEST_CASE("m2prime has legal instances on the corpus and keeps k") {
  int found = 0;
  for (const auto& g : corpus())
    for (const auto& m : enumerate_moms(g, MomKind::general))
      for (auto& [mv, r] : admissible_moves(m, {"m2prime"})) {
        ++found;
        CHECK(oracle_k(*g, r.colors()) == m.k());
        CHECK(apply_move(r, inverse_move(mv)) == m);
      }
  CHECK(found > 0);
}

TEST_CASE("m3 and m3bar") {
  auto lj = loops_and_joins();
  auto m = col(lj, "ccff");
  auto r = apply_m3(m, 2, 1);
  CHECK(r.key() == "cftf");
  CHECK(r.kind() == MomKind::minimal);
  CHECK(apply_m3bar(r, 2, 1) == m);
  auto path = make("vertices 3\nedge 0.0 0.1\nedge 2.0 2.1\nedge 0.2 1.0\nedge 0.3 1.1\nedge 1.2 2.2\nedge 1.3 2.3\n");
  auto p = col(path, "ccfftf");
  CHECK_THROWS_AS(apply_m3(p, 5, 1), Error);  // same component
  CHECK_THROWS_AS(apply_m3(p, 2, 1), Error);  // not incident to e_j
  auto q = col(path, "cctfff");
  CHECK_THROWS_AS(apply_m3bar(q, 2, 3), Error);  // e' split by cutting e
  auto w = col(path, "fcftft");
  CHECK(apply_m3bar(w, 3, 0).k() == 2);
  CHECK_THROWS_AS(apply_m3bar(w, 3, 4), Error);  // piece of e' holds the c-edge
}

TEST_CASE("m3 and m3bar invert each other on the corpus") {
  int pairs = 0;
  for (const auto& g : corpus())
    for (const auto& m : enumerate_moms(g, MomKind::general)) {
      for (auto& [mv, r] : admissible_moves(m, {"m3"})) {
        CHECK(r.k() == m.k() - 1);
        CHECK(apply_m3bar(r, mv.params[0], mv.params[1]) == m);
        ++pairs;
      }
      for (auto& [mv, r] : admissible_moves(m, {"m3bar"})) {
        CHECK(r.k() == m.k() + 1);
        CHECK(apply_m3(r, mv.params[0], mv.params[1]) == m);
      }
    }
  CHECK(pairs > 0);
}

TEST_CASE("reduction to minimal") {
  auto lj = loops_and_joins();
  auto m = col(lj, "ccff");
  auto trace = reduce_to_minimal(m);
  CHECK(replay(m, trace).kind() == MomKind::minimal);
  CHECK(trace.moves.back().kind == "m3");
  CHECK(reduce_to_minimal(col(four_parallel(), "tcff")).empty());

  for (const auto& g : corpus())
    for (const auto& start : enumerate_moms(g, MomKind::general)) {
      auto tr = reduce_to_minimal(start);
      MomColoring cur = start;
      int last_prime = -1;
      for (const auto& mv : tr.moves) {
        auto next = apply_move(cur, mv);
        CHECK(next.k() <= cur.k());
        if (mv.kind == "m3") {
          CHECK(next.k() == cur.k() - 1);
          last_prime = -1;
        }
        if (mv.kind == "m2prime") {
          int measure = reduction_measure(cur);
          if (last_prime >= 0) CHECK(measure < last_prime);
          last_prime = measure;
        }
        cur = next;
      }
      CHECK(cur.kind() == MomKind::minimal);
    }
}

TEST_CASE("relating minimal colorings") {
  auto g = four_parallel();
  auto a = col(g, "tcff");
  CHECK(relate_minimal(a, a).empty());
  // Same T-hat, different c-edge: one m2tilde, expanded to m2 moves.
  auto b = col(g, "ctff");
  auto tr = relate_minimal(a, b);
  CHECK(replay(a, tr) == b);
  for (const auto& mv : tr.moves) CHECK(mv.kind == "m2");

  for (const auto& gg : corpus()) {
    auto ms = enumerate_moms(gg, MomKind::minimal);
    for (const auto& x : ms)
      for (const auto& y : ms) {
        auto t = relate_minimal(x, y);
        CHECK(replay(x, t) == y);
        for (const auto& mv : t.moves) CHECK((mv.kind == "m1" || mv.kind == "m2"));
      }
  }
}

TEST_CASE("relating general colorings") {
  for (const auto& g : corpus()) {
    auto ms = enumerate_moms(g, MomKind::general);
    for (const auto& x : ms)
      for (const auto& y : ms) CHECK(replay(x, relate_general(x, y)) == y);
  }
}

TEST_CASE("state graph connectivity") {
  CHECK(verify_move_connectivity(bouquet()).components == 1);
  CHECK(verify_move_connectivity(four_parallel()).components == 1);
  for (const auto& g : corpus()) {
    auto full = verify_move_connectivity(g);
    auto minimal = verify_move_connectivity(g, true);
    CHECK(full.components == 1);
    CHECK(minimal.components == 1);
    CHECK(full.states >= minimal.states);
  }
  auto cert = verify_move_connectivity(four_parallel(), true);
  CHECK(cert.states == 12);
}

TEST_CASE("coloring and trace text") {
  auto g = four_parallel();
  auto m = col(g, "tcff");
  CHECK(parse_coloring(g, format_coloring(m)) == m);
  CHECK_THROWS_AS(parse_coloring(g, "edge 0 t\n"), Error);
  CHECK_THROWS_AS(parse_coloring(g, "edge 0 q\nedge 1 c\nedge 2 f\nedge 3 f\n"), Error);
  auto tr = relate_minimal(m, col(g, "fftc"));
  CHECK(parse_trace(format_trace(tr)) == tr);
}
