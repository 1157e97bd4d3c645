#include "momkit/mom.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "momkit/error.hpp"
#include "momkit/text.hpp"

namespace momkit {

char color_char(Color c) { return c == Color::t ? 't' : c == Color::c ? 'c' : 'f'; }

const char* kind_name(MomKind k) {
  switch (k) {
    case MomKind::minimal: return "minimal";
    case MomKind::general: return "general";
    default: return "invalid";
  }
}

MomColoring::MomColoring(GraphPtr g, std::vector<Color> colors) : g_(std::move(g)), colors_(std::move(colors)) {
  require(g_ != nullptr, "coloring without a graph");
  require(static_cast<int>(colors_.size()) == g_->edge_count(), "coloring size does not match edge count");
  require(g_->is_four_valent(), "coloring requires a 4-valent graph");
  require(g_->is_connected(), "coloring requires a connected graph");
  analyze();
}

void MomColoring::analyze() {
  const Multigraph& g = *g_;
  std::vector<bool> tmask(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) tmask[e] = colors_[e] == Color::t;
  tree_ = components(g, tmask);
  c_of_comp_.assign(tree_.count(), -1);
  kind_ = MomKind::invalid;
  for (int c = 0; c < tree_.count(); ++c) {
    if (betti1(tree_, c) != 0) {
      problem_ = "t-edges contain a cycle";
      return;
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    if (colors_[e] != Color::c) continue;
    int ca = tree_.component_of[g.edge(e).a.vertex], cb = tree_.component_of[g.edge(e).b.vertex];
    if (ca != cb) {
      problem_ = "c-edge " + std::to_string(e) + " joins two t-components";
      return;
    }
    if (c_of_comp_[ca] >= 0) {
      problem_ = "t-component carries two c-edges";
      return;
    }
    c_of_comp_[ca] = e;
  }
  for (int c = 0; c < tree_.count(); ++c) {
    if (c_of_comp_[c] < 0) {
      problem_ = "t-component without c-edge";
      return;
    }
  }
  problem_.clear();
  kind_ = tree_.count() == 1 ? MomKind::minimal : MomKind::general;
}

std::string MomColoring::key() const {
  std::string s(colors_.size(), ' ');
  for (size_t i = 0; i < colors_.size(); ++i) s[i] = color_char(colors_[i]);
  return s;
}

std::vector<int> MomColoring::edges_of(Color c) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(colors_.size()); ++e)
    if (colors_[e] == c) out.push_back(e);
  return out;
}

std::vector<int> MomColoring::cycle(int comp) const {
  return fundamental_cycle(*g_, edges_of(Color::t), c_of_comp_.at(comp));
}

std::vector<int> MomColoring::cycle_vertices(int comp) const {
  std::vector<int> vs;
  for (int e : cycle(comp)) {
    vs.push_back(g_->edge(e).a.vertex);
    vs.push_back(g_->edge(e).b.vertex);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

MomColoring MomColoring::with_swap(int e1, int e2) const {
  auto cs = colors_;
  std::swap(cs.at(e1), cs.at(e2));
  return MomColoring(g_, std::move(cs));
}

MomKind classify(const MomColoring& m) { return m.kind(); }

namespace {

std::string eid(int e) { return std::to_string(e); }

void require_valid(const MomColoring& m, const char* move) {
  require(m.kind() != MomKind::invalid, std::string(move) + ": input is not a Mom-subgraph (" + m.problem() + ")");
}

void require_edge(const MomColoring& m, int e, const char* move) {
  require(e >= 0 && e < m.graph().edge_count(), std::string(move) + ": edge " + eid(e) + " out of range");
}

bool shares(const Multigraph& g, int e, int f, int v) { return g.edge(e).touches(v) && g.edge(f).touches(v); }

// A vertex common to both edges, or -1.
int common_vertex(const Multigraph& g, int e, int f) {
  for (int v : {g.edge(e).a.vertex, g.edge(e).b.vertex})
    if (g.edge(f).touches(v)) return v;
  return -1;
}

bool contains(const std::vector<int>& xs, int x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

// Vertex sets of the two sides of the tree component holding e once e is cut.
std::vector<bool> side_without(const MomColoring& m, int e, int start) {
  const Multigraph& g = m.graph();
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<int> q;
  q.push(start);
  seen[start] = true;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int f : g.incident(x)) {
      if (f == e || m.color(f) != Color::t) continue;
      int y = g.edge(f).other(x);
      if (!seen[y]) {
        seen[y] = true;
        q.push(y);
      }
    }
  }
  return seen;
}

// Tree distance from every vertex to the cycle of its component.
std::vector<int> distance_to_cycles(const MomColoring& m) {
  const Multigraph& g = m.graph();
  std::vector<int> dist(g.vertex_count(), -1);
  std::queue<int> q;
  for (int c = 0; c < m.k(); ++c)
    for (int v : m.cycle_vertices(c)) {
      dist[v] = 0;
      q.push(v);
    }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int f : g.incident(x)) {
      if (m.color(f) != Color::t) continue;
      int y = g.edge(f).other(x);
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  return dist;
}

MomColoring checked_result(MomColoring r, const char* move, int expect_k) {
  require(r.kind() != MomKind::invalid, std::string(move) + ": result is not a Mom-subgraph (" + r.problem() + ")");
  if (expect_k >= 0 && r.k() != expect_k)
    fail_invariant(std::string(move) + ": component count changed unexpectedly");
  return r;
}

}  // namespace

MomColoring apply_m1(const MomColoring& m, int v, int e, int e2) {
  require_valid(m, "m1");
  require_edge(m, e, "m1");
  require_edge(m, e2, "m1");
  require(m.color(e) == Color::c, "m1: edge " + eid(e) + " is not a c-edge");
  require(m.color(e2) == Color::f, "m1: edge " + eid(e2) + " is not an f-edge");
  require(shares(m.graph(), e, e2, v), "m1: edges do not share vertex " + eid(v));
  return checked_result(m.with_swap(e, e2), "m1", m.k());
}

MomColoring apply_m2(const MomColoring& m, int v, int e, int e2) {
  require_valid(m, "m2");
  require_edge(m, e, "m2");
  require_edge(m, e2, "m2");
  require(m.color(e) == Color::t, "m2: edge " + eid(e) + " is not a t-edge");
  require(m.color(e2) != Color::t, "m2: edge " + eid(e2) + " is a t-edge");
  const Multigraph& g = m.graph();
  require(shares(g, e, e2, v), "m2: edges do not share vertex " + eid(v));
  require(m.component_of(g.edge(e2).a.vertex) == m.component_of(g.edge(e2).b.vertex),
          "m2: endpoints of edge " + eid(e2) + " lie in different t-components");
  // (T \ e) + e2 stays connected exactly when e separates the endpoints of e2.
  auto side = side_without(m, e, g.edge(e2).a.vertex);
  require(!side[g.edge(e2).b.vertex], "m2: removing edge " + eid(e) + " and adding " + eid(e2) + " disconnects the tree");
  // When e2 is the c-edge the c role passes to e; accepted only if the result is a Mom-subgraph.
  return checked_result(m.with_swap(e, e2), "m2", m.k());
}

M2TildeResult apply_m2tilde(const MomColoring& m, int e, int e2) {
  require_valid(m, "m2tilde");
  require_edge(m, e, "m2tilde");
  require_edge(m, e2, "m2tilde");
  require(m.color(e) == Color::t, "m2tilde: edge " + eid(e) + " is not a t-edge");
  require(m.color(e2) != Color::t, "m2tilde: edge " + eid(e2) + " is a t-edge");
  const Multigraph& g = m.graph();
  int a = g.edge(e2).a.vertex, b = g.edge(e2).b.vertex;
  require(m.component_of(a) == m.component_of(b), "m2tilde: endpoints of edge " + eid(e2) + " in different t-components");
  auto path = forest_path(g, m.edges_of(Color::t), a, b);
  auto at = std::find(path.begin(), path.end(), e);
  require(at != path.end(), "m2tilde: edge " + eid(e) + " is not on the tree path of edge " + eid(e2));

  // Walk the part of the path between a and e, pushing the non-t color one edge
  // at a time towards e.
  MoveTrace expansion;
  MomColoring cur = m;
  int chord = e2, vertex = a;
  for (auto it = path.begin();; ++it) {
    int next = *it;
    expansion.push("m2", {vertex, next, chord});
    cur = apply_m2(cur, vertex, next, chord);
    if (next == e) break;
    vertex = g.edge(next).other(vertex);
    chord = next;
  }
  if (!(cur == m.with_swap(e, e2))) fail_invariant("m2tilde: expansion disagrees with the direct swap");
  return {cur, expansion};
}

MomColoring apply_m2prime(const MomColoring& m, int e, int e2) {
  require_valid(m, "m2prime");
  require_edge(m, e, "m2prime");
  require_edge(m, e2, "m2prime");
  const Multigraph& g = m.graph();
  require(m.color(e) == Color::f, "m2prime: edge " + eid(e) + " is not an f-edge");
  require(m.color(e2) == Color::t, "m2prime: edge " + eid(e2) + " is not a t-edge");
  int v = common_vertex(g, e, e2);
  require(v >= 0, "m2prime: edges are not incident");
  int u = g.edge(e).other(v);
  int j = m.component_of(v), i = m.component_of(u);
  require(i != j, "m2prime: both endpoints of edge " + eid(e) + " lie on one t-component");
  require(m.component_of(g.edge(e2).a.vertex) == j, "m2prime: edge " + eid(e2) + " not in T_j");
  auto cyc = m.cycle(j);
  auto cyc_v = m.cycle_vertices(j);
  require(!contains(cyc_v, v), "m2prime: vertex " + eid(v) + " lies on C_j");
  require(!contains(cyc, e2), "m2prime: edge " + eid(e2) + " lies on C_j");
  auto side = side_without(m, e2, v);
  require(!side[cyc_v.front()], "m2prime: cutting edge " + eid(e2) + " does not separate vertex " + eid(v) + " from C_j");
  return checked_result(m.with_swap(e, e2), "m2prime", m.k());
}

MomColoring apply_m3(const MomColoring& m, int e, int ej) {
  require_valid(m, "m3");
  require_edge(m, e, "m3");
  require_edge(m, ej, "m3");
  const Multigraph& g = m.graph();
  require(m.color(e) == Color::f, "m3: edge " + eid(e) + " is not an f-edge");
  require(m.color(ej) == Color::c, "m3: edge " + eid(ej) + " is not a c-edge");
  int v = common_vertex(g, e, ej);
  require(v >= 0, "m3: edge " + eid(e) + " is not incident to c-edge " + eid(ej));
  int j = m.component_of(g.edge(ej).a.vertex);
  int i = m.component_of(g.edge(e).other(v));
  require(i != j, "m3: edge " + eid(e) + " does not reach another t-component");
  auto cs = m.colors();
  cs[e] = Color::t;
  cs[ej] = Color::f;
  return checked_result(m.with_colors(std::move(cs)), "m3", m.k() - 1);
}

MomColoring apply_m3bar(const MomColoring& m, int e, int e2) {
  require_valid(m, "m3bar");
  require_edge(m, e, "m3bar");
  require_edge(m, e2, "m3bar");
  const Multigraph& g = m.graph();
  require(m.color(e) == Color::t, "m3bar: edge " + eid(e) + " is not a t-edge");
  require(m.color(e2) == Color::f, "m3bar: edge " + eid(e2) + " is not an f-edge");
  require(common_vertex(g, e, e2) >= 0, "m3bar: edges are not incident");
  auto side = side_without(m, e, g.edge(e2).a.vertex);
  require(side[g.edge(e2).b.vertex], "m3bar: endpoints of edge " + eid(e2) + " split by cutting edge " + eid(e));
  int ci = m.c_edge(m.component_of(g.edge(e).a.vertex));
  require(!side[g.edge(ci).a.vertex] && !side[g.edge(ci).b.vertex],
          "m3bar: the piece holding edge " + eid(e2) + " touches the c-edge " + eid(ci));
  auto cs = m.colors();
  cs[e] = Color::f;
  cs[e2] = Color::c;
  return checked_result(m.with_colors(std::move(cs)), "m3bar", m.k() + 1);
}

MomColoring apply_move(const MomColoring& m, const Move& mv) {
  auto need = [&](size_t n) {
    require(mv.params.size() == n, "move " + mv.kind + ": expected " + std::to_string(n) + " parameters");
  };
  const auto& p = mv.params;
  if (mv.kind == "m1") return need(3), apply_m1(m, p[0], p[1], p[2]);
  if (mv.kind == "m2") return need(3), apply_m2(m, p[0], p[1], p[2]);
  if (mv.kind == "m2tilde") return need(2), apply_m2tilde(m, p[0], p[1]).result;
  if (mv.kind == "m2prime") return need(2), apply_m2prime(m, p[0], p[1]);
  if (mv.kind == "m3") return need(2), apply_m3(m, p[0], p[1]);
  if (mv.kind == "m3bar") return need(2), apply_m3bar(m, p[0], p[1]);
  fail_pre("unknown graph move '" + mv.kind + "'");
}

MomColoring replay(const MomColoring& m, const MoveTrace& trace) {
  MomColoring cur = m;
  for (const auto& mv : trace.moves) cur = apply_move(cur, mv);
  return cur;
}

Move inverse_move(const Move& mv) {
  const auto& p = mv.params;
  if (mv.kind == "m1" || mv.kind == "m2") return {mv.kind, {p.at(0), p.at(2), p.at(1)}};
  if (mv.kind == "m2tilde" || mv.kind == "m2prime") return {mv.kind, {p.at(1), p.at(0)}};
  if (mv.kind == "m3") return {"m3bar", {p.at(0), p.at(1)}};
  if (mv.kind == "m3bar") return {"m3", {p.at(0), p.at(1)}};
  fail_pre("no inverse for move '" + mv.kind + "'");
}

MoveTrace inverse_trace(const MoveTrace& trace) {
  MoveTrace out;
  for (auto it = trace.moves.rbegin(); it != trace.moves.rend(); ++it) out.moves.push_back(inverse_move(*it));
  return out;
}

std::vector<std::pair<Move, MomColoring>> admissible_moves(const MomColoring& m, const std::vector<std::string>& kinds) {
  std::vector<std::pair<Move, MomColoring>> out;
  if (m.kind() == MomKind::invalid) return out;
  const Multigraph& g = m.graph();
  const int E = g.edge_count();
  auto attempt = [&](Move mv) {
    try {
      MomColoring r = apply_move(m, mv);
      out.emplace_back(std::move(mv), std::move(r));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::precondition) throw;
    }
  };
  for (const auto& kind : kinds) {
    for (int e = 0; e < E; ++e)
      for (int e2 = 0; e2 < E; ++e2) {
        if (e == e2) continue;
        int v = common_vertex(g, e, e2);
        if (v < 0) continue;
        if (kind == "m1" || kind == "m2")
          attempt({kind, {v, e, e2}});
        else
          attempt({kind, {e, e2}});
      }
  }
  return out;
}

int reduction_measure(const MomColoring& m) {
  if (m.kind() == MomKind::invalid || m.k() == 1) return -1;
  const Multigraph& g = m.graph();
  auto dist = distance_to_cycles(m);
  int best = -1;
  for (int e = 0; e < g.edge_count(); ++e) {
    int a = g.edge(e).a.vertex, b = g.edge(e).b.vertex;
    if (m.component_of(a) == m.component_of(b)) continue;
    int d = std::min(dist[a], dist[b]);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

namespace {

// Applies moves to a running coloring and records them, expanding m2tilde into
// its single m2 steps.
struct Recorder {
  MomColoring cur;
  MoveTrace trace;

  void apply(Move mv) {
    cur = apply_move(cur, mv);
    trace.moves.push_back(std::move(mv));
  }
  void m2tilde(int e, int e2) {
    auto r = apply_m2tilde(cur, e, e2);
    cur = r.result;
    trace.append(r.expansion);
  }
};

}  // namespace

MoveTrace reduce_to_minimal(const MomColoring& m) {
  require(m.kind() != MomKind::invalid, "reduce_to_minimal: input is not a Mom-subgraph (" + m.problem() + ")");
  const Multigraph& g = m.graph();
  Recorder r{m, {}};
  int guard = 4 * g.edge_count() * (g.edge_count() + 1) + 8;
  while (r.cur.k() > 1) {
    if (--guard < 0) fail_invariant("reduce_to_minimal did not terminate");
    const MomColoring& cur = r.cur;
    auto dist = distance_to_cycles(cur);
    // Edge joining two components that realizes m_G, lowest index first.
    int best = -1, near = -1, best_d = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
      int a = g.edge(e).a.vertex, b = g.edge(e).b.vertex;
      if (cur.component_of(a) == cur.component_of(b)) continue;
      int d = std::min(dist[a], dist[b]);
      if (best < 0 || d < best_d) {
        best = e;
        best_d = d;
        near = dist[a] <= dist[b] ? a : b;
      }
    }
    int e = best, w = near, j = cur.component_of(w);
    int ej = cur.c_edge(j);
    if (best_d == 0) {
      if (g.edge(ej).touches(w)) {
        r.apply({"m3", {e, ej}});
      } else {
        int e1 = -1;
        for (int f : cur.cycle(j))
          if (f != ej && g.edge(f).touches(w) && (e1 < 0 || f < e1)) e1 = f;
        r.m2tilde(e1, ej);
        r.apply({"m3", {e, e1}});
      }
    } else {
      // First edge of the shortest tree path from w towards C_j.
      int e1 = -1;
      for (int f : g.incident(w))
        if (cur.color(f) == Color::t && dist[g.edge(f).other(w)] == dist[w] - 1 && (e1 < 0 || f < e1)) e1 = f;
      r.apply({"m2prime", {e, e1}});
    }
  }
  return r.trace;
}

namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (!contains(b, x)) out.push_back(x);
  return out;
}

int lowest_touching(const Multigraph& g, const std::vector<int>& edges, int v) {
  int best = -1;
  for (int e : edges)
    if (g.edge(e).touches(v) && (best < 0 || e < best)) best = e;
  return best;
}

// Case T(a) = T(b) with different c-edges: one round of the five-move exchange.
void same_tree_round(Recorder& r, const MomColoring& target) {
  const Multigraph& g = r.cur.graph();
  const MomColoring& cur = r.cur;
  int c1 = cur.c_edge(0), c2 = target.c_edge(0);
  auto C1 = cur.cycle(0), C2 = target.cycle(0);
  auto V1 = cur.cycle_vertices(0), V2 = target.cycle_vertices(0);
  auto tree = cur.edges_of(Color::t);

  std::vector<int> shared_edges;
  for (int e : C1)
    if (contains(C2, e)) shared_edges.push_back(e);
  std::vector<int> shared_vertices;
  for (int v : V1)
    if (contains(V2, v)) shared_vertices.push_back(v);

  if (!shared_vertices.empty()) {
    // Base: pick an end vertex of the common path.
    int v = -1;
    if (shared_edges.empty()) {
      v = shared_vertices.front();
    } else {
      for (int x : shared_vertices) {
        int deg = 0;
        for (int e : shared_edges) deg += g.edge(e).touches(x) ? 1 : 0;
        if (deg == 1) {
          v = x;
          break;
        }
      }
    }
    int x1 = lowest_touching(g, minus(C1, C2), v);
    int x2 = lowest_touching(g, minus(C2, C1), v);
    if (v < 0 || x1 < 0 || x2 < 0) fail_invariant("relate_minimal: degenerate cycle intersection");
    if (x1 != c1) r.m2tilde(x1, c1);
    if (x2 != c2) r.m2tilde(x2, c2);
    r.apply({"m1", {v, x1, x2}});
    if (x2 != c2) r.m2tilde(c2, x2);
    if (x1 != c1) r.m2tilde(c1, x1);
    return;
  }

  // Inductive step: shortest tree path l from C1 to C2.
  std::vector<int> via(g.vertex_count(), -2);
  std::queue<int> q;
  for (int v : V1) {
    via[v] = -1;
    q.push(v);
  }
  int hit = -1;
  while (!q.empty() && hit < 0) {
    int x = q.front();
    q.pop();
    for (int f : g.incident(x)) {
      if (cur.color(f) != Color::t) continue;
      int y = g.edge(f).other(x);
      if (via[y] != -2) continue;
      via[y] = f;
      if (contains(V2, y)) {
        hit = y;
        break;
      }
      q.push(y);
    }
  }
  if (hit < 0) fail_invariant("relate_minimal: cycles not joined in the tree");
  std::vector<int> l;
  int w = hit;
  while (via[w] != -1) {
    l.push_back(via[w]);
    w = g.edge(via[w]).other(w);
  }
  int x2 = l.back();  // edge of l at w
  int inner = g.edge(x2).other(w);
  // T': the part of T \ w containing l.
  std::vector<bool> in_tp(g.vertex_count(), false);
  std::queue<int> q2;
  in_tp[inner] = true;
  q2.push(inner);
  while (!q2.empty()) {
    int x = q2.front();
    q2.pop();
    for (int f : g.incident(x)) {
      if (cur.color(f) != Color::t) continue;
      int y = g.edge(f).other(x);
      if (y == w || in_tp[y]) continue;
      in_tp[y] = true;
      q2.push(y);
    }
  }
  int e = -1;
  for (int f = 0; f < g.edge_count(); ++f) {
    if (cur.color(f) != Color::f) continue;
    if (in_tp[g.edge(f).a.vertex] != in_tp[g.edge(f).b.vertex]) {
      e = f;
      break;
    }
  }
  if (e < 0) fail_invariant("relate_minimal: no f-edge leaves the branch");
  auto lp = forest_path(g, tree, g.edge(e).a.vertex, g.edge(e).b.vertex);
  int x1 = -1;
  for (int f : C1)
    if (g.edge(f).touches(w) && !contains(lp, f) && (x1 < 0 || f < x1)) x1 = f;
  if (x1 < 0) fail_invariant("relate_minimal: no cycle edge at the junction");
  if (x1 != c1) r.m2tilde(x1, c1);
  r.m2tilde(x2, e);
  r.apply({"m1", {w, x1, x2}});
  r.m2tilde(e, x2);
  if (x1 != c1) r.m2tilde(c1, x1);
}

}  // namespace

MoveTrace relate_minimal(const MomColoring& a, const MomColoring& b) {
  require(a.graph_ptr() == b.graph_ptr() || a.graph() == b.graph(), "relate_minimal: colorings on different graphs");
  require(a.kind() == MomKind::minimal && b.kind() == MomKind::minimal, "relate_minimal: both colorings must be minimal");
  const Multigraph& g = a.graph();
  MomColoring target(a.graph_ptr(), b.colors());
  Recorder r{a, {}};
  int guard = 8 * g.edge_count() * g.edge_count() + 16;
  while (!(r.cur == target)) {
    if (--guard < 0) fail_invariant("relate_minimal did not terminate");
    const MomColoring& cur = r.cur;
    auto T1 = cur.edges_of(Color::t), T2 = target.edges_of(Color::t);
    int c1 = cur.c_edge(0), c2 = target.c_edge(0);
    auto H1 = T1, H2 = T2;
    H1.push_back(c1);
    H2.push_back(c2);
    if (sorted(H1) == sorted(H2)) {
      r.m2tilde(c2, c1);
    } else if (T1 != T2) {
      int e2 = -1;
      for (int e : T2)
        if (!contains(H1, e)) {
          e2 = e;
          break;
        }
      if (e2 >= 0) {
        auto path = forest_path(g, T1, g.edge(e2).a.vertex, g.edge(e2).b.vertex);
        int e1 = -1;
        for (int e : path)
          if (target.color(e) != Color::t && (e1 < 0 || e < e1)) e1 = e;
        r.m2tilde(e1, e2);
      } else {
        // T2 = T1 - x + c1: move x out of the tree in exchange for c1.
        int x = minus(T1, T2).front();
        r.m2tilde(x, c1);
      }
    } else {
      same_tree_round(r, target);
    }
  }
  return r.trace;
}

MoveTrace relate_general(const MomColoring& a, const MomColoring& b) {
  auto ra = reduce_to_minimal(a);
  auto rb = reduce_to_minimal(b);
  auto ma = replay(a, ra);
  MomColoring mb(a.graph_ptr(), replay(b, rb).colors());
  MoveTrace out = ra;
  out.append(relate_minimal(ma, mb));
  out.append(inverse_trace(rb));
  return out;
}

std::vector<MomColoring> enumerate_moms(const GraphPtr& g, MomKind kind) {
  require(g->is_four_valent(), "enumerate_moms: graph is not 4-valent");
  require(g->is_connected(), "enumerate_moms: graph is not connected");
  const int E = g->edge_count();
  std::vector<MomColoring> out;
  std::vector<Color> cs(E, Color::t);
  // Odometer over 3^E colorings.
  while (true) {
    MomColoring m(g, cs);
    if (m.kind() == MomKind::minimal || (kind == MomKind::general && m.kind() == MomKind::general))
      out.push_back(std::move(m));
    int i = 0;
    while (i < E && cs[i] == Color::f) cs[i++] = Color::t;
    if (i == E) break;
    cs[i] = cs[i] == Color::t ? Color::c : Color::f;
  }
  return out;
}

ConnectivityCertificate verify_move_connectivity(const GraphPtr& g, bool minimal_only) {
  auto states = enumerate_moms(g, minimal_only ? MomKind::minimal : MomKind::general);
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(states.size()); ++i) index[states[i].key()] = i;
  std::vector<std::string> kinds = minimal_only ? std::vector<std::string>{"m1", "m2"}
                                                : std::vector<std::string>{"m1", "m2", "m2prime", "m3", "m3bar"};
  const int n = static_cast<int>(states.size());
  std::vector<std::vector<int>> adj(n);
  ConnectivityCertificate cert;
  cert.states = n;
  for (int i = 0; i < n; ++i) {
    for (auto& [mv, next] : admissible_moves(states[i], kinds)) {
      auto it = index.find(next.key());
      if (it == index.end()) fail_invariant("move " + format_move(mv) + " left the state space");
      if (it->second != i) adj[i].push_back(it->second);
    }
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
  }
  for (int i = 0; i < n; ++i)
    for (int j : adj[i])
      if (i < j) ++cert.transitions;
  std::vector<int> comp(n, -1);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = cert.components++;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : adj[x])
        if (comp[y] < 0) {
          comp[y] = comp[s];
          q.push(y);
        }
    }
  }
  for (int s = 0; s < n; ++s) {
    std::vector<int> d(n, -1);
    std::queue<int> q;
    q.push(s);
    d[s] = 0;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      cert.diameter = std::max(cert.diameter, d[x]);
      for (int y : adj[x])
        if (d[y] < 0) {
          d[y] = d[x] + 1;
          q.push(y);
        }
    }
  }
  return cert;
}

MomColoring parse_coloring(const GraphPtr& g, std::string_view input) {
  std::vector<int> seen(g->edge_count(), 0);
  std::vector<Color> cs(g->edge_count(), Color::f);
  for (const auto& l : text::tokenize(input)) {
    if (l.tokens.size() != 3 || l.tokens[0] != "edge")
      fail_parse("coloring line " + std::to_string(l.number) + ": expected 'edge <id> <t|c|f>'");
    int e = text::to_int(l.tokens[1], l);
    if (e < 0 || e >= g->edge_count()) fail_parse("coloring line " + std::to_string(l.number) + ": edge out of range");
    const auto& c = l.tokens[2];
    if (c == "t") cs[e] = Color::t;
    else if (c == "c") cs[e] = Color::c;
    else if (c == "f") cs[e] = Color::f;
    else fail_parse("coloring line " + std::to_string(l.number) + ": unknown color '" + c + "'");
    ++seen[e];
  }
  for (int e = 0; e < g->edge_count(); ++e)
    if (seen[e] != 1) fail_parse("coloring: edge " + std::to_string(e) + " must be colored exactly once");
  return MomColoring(g, cs);
}

std::string format_coloring(const MomColoring& m) {
  std::ostringstream out;
  for (int e = 0; e < m.graph().edge_count(); ++e) out << "edge " << e << " " << color_char(m.color(e)) << "\n";
  return out.str();
}

}  // namespace momkit
