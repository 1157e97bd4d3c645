#include "momkit/graph.hpp"

#include <algorithm>
#include <boost/pending/disjoint_sets.hpp>
#include <queue>
#include <sstream>

#include "momkit/error.hpp"
#include "momkit/text.hpp"

namespace momkit {

Multigraph::Multigraph(int vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)), slots_(vertex_count) {
  require(n_ >= 0, "negative vertex count");
  for (int e = 0; e < edge_count(); ++e) {
    for (const Dart& d : {edges_[e].a, edges_[e].b}) {
      require(d.vertex >= 0 && d.vertex < n_,
              "edge " + std::to_string(e) + " uses vertex " + std::to_string(d.vertex) + " out of range");
      require(d.slot >= 0, "negative dart slot on edge " + std::to_string(e));
      auto& s = slots_[d.vertex];
      if (static_cast<int>(s.size()) <= d.slot) s.resize(d.slot + 1, -1);
      require(s[d.slot] == -1, "dart " + std::to_string(d.vertex) + "." + std::to_string(d.slot) +
                                   " used twice");
      s[d.slot] = e;
    }
  }
}

int Multigraph::degree(int v) const {
  return static_cast<int>(std::count_if(slots_.at(v).begin(), slots_.at(v).end(), [](int e) { return e >= 0; }));
}

bool Multigraph::is_four_valent() const {
  for (int v = 0; v < n_; ++v)
    if (degree(v) != 4) return false;
  return true;
}

std::vector<int> Multigraph::incident(int v) const {
  std::vector<int> out;
  for (int e : slots_.at(v))
    if (e >= 0) out.push_back(e);
  return out;
}

int Multigraph::edge_at(int v, int slot) const {
  const auto& s = slots_.at(v);
  return slot >= 0 && slot < static_cast<int>(s.size()) ? s[slot] : -1;
}

bool Multigraph::is_connected() const { return n_ <= 1 || components(*this).count() == 1; }

bool operator==(const Multigraph& x, const Multigraph& y) {
  if (x.n_ != y.n_ || x.edges_.size() != y.edges_.size()) return false;
  for (size_t i = 0; i < x.edges_.size(); ++i)
    if (!(x.edges_[i].a == y.edges_[i].a && x.edges_[i].b == y.edges_[i].b)) return false;
  return true;
}

namespace {

using Dsu = boost::disjoint_sets_with_storage<>;

Partition build_partition(const Multigraph& g, const std::vector<bool>* mask) {
  const int n = g.vertex_count();
  Dsu dsu(n);
  for (int v = 0; v < n; ++v) dsu.make_set(v);
  for (int e = 0; e < g.edge_count(); ++e)
    if (!mask || (*mask)[e]) dsu.union_set(g.edge(e).a.vertex, g.edge(e).b.vertex);
  Partition p;
  p.component_of.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  for (int v = 0; v < n; ++v) {
    int r = static_cast<int>(dsu.find_set(v));
    if (id_of_root[r] < 0) {
      id_of_root[r] = p.count();
      p.vertices.emplace_back();
      p.edges.emplace_back();
    }
    p.component_of[v] = id_of_root[r];
    p.vertices[id_of_root[r]].push_back(v);
  }
  for (int e = 0; e < g.edge_count(); ++e)
    if (!mask || (*mask)[e]) p.edges[p.component_of[g.edge(e).a.vertex]].push_back(e);
  return p;
}

std::vector<int> greedy_forest(const Multigraph& g, const std::vector<bool>* mask) {
  Dsu dsu(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) dsu.make_set(v);
  std::vector<int> forest;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (mask && !(*mask)[e]) continue;
    auto a = dsu.find_set(g.edge(e).a.vertex), b = dsu.find_set(g.edge(e).b.vertex);
    if (a == b) continue;
    dsu.link(a, b);
    forest.push_back(e);
  }
  return forest;
}

}  // namespace

Partition components(const Multigraph& g) { return build_partition(g, nullptr); }

Partition components(const Multigraph& g, const std::vector<bool>& mask) {
  require(static_cast<int>(mask.size()) == g.edge_count(), "edge mask size mismatch");
  return build_partition(g, &mask);
}

int betti1(const Partition& p, int c) {
  return static_cast<int>(p.edges.at(c).size()) - static_cast<int>(p.vertices.at(c).size()) + 1;
}

std::vector<int> spanning_forest(const Multigraph& g) { return greedy_forest(g, nullptr); }

std::vector<int> spanning_forest(const Multigraph& g, const std::vector<bool>& mask) {
  require(static_cast<int>(mask.size()) == g.edge_count(), "edge mask size mismatch");
  return greedy_forest(g, &mask);
}

bool is_forest(const Multigraph& g, const std::vector<int>& edges) {
  Dsu dsu(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) dsu.make_set(v);
  for (int e : edges) {
    auto a = dsu.find_set(g.edge(e).a.vertex), b = dsu.find_set(g.edge(e).b.vertex);
    if (a == b) return false;
    dsu.link(a, b);
  }
  return true;
}

std::vector<int> forest_path(const Multigraph& g, const std::vector<int>& forest, int u, int v) {
  // BFS from u over forest edges, remembering the edge used to reach each vertex.
  std::vector<std::vector<int>> adj(g.vertex_count());
  for (int e : forest) {
    adj[g.edge(e).a.vertex].push_back(e);
    adj[g.edge(e).b.vertex].push_back(e);
  }
  std::vector<int> via(g.vertex_count(), -2);
  via[u] = -1;
  std::queue<int> q;
  q.push(u);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (x == v) break;
    for (int e : adj[x]) {
      int y = g.edge(e).other(x);
      if (via[y] != -2) continue;
      via[y] = e;
      q.push(y);
    }
  }
  require(via[v] != -2, "vertices " + std::to_string(u) + " and " + std::to_string(v) + " lie in different trees");
  std::vector<int> path;
  for (int x = v; x != u;) {
    int e = via[x];
    path.push_back(e);
    x = g.edge(e).other(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> fundamental_cycle(const Multigraph& g, const std::vector<int>& forest, int chord) {
  require(std::find(forest.begin(), forest.end(), chord) == forest.end(), "chord lies in the forest");
  const Edge& c = g.edge(chord);
  std::vector<int> cycle{chord};
  auto back = forest_path(g, forest, c.b.vertex, c.a.vertex);
  cycle.insert(cycle.end(), back.begin(), back.end());
  return cycle;
}

bool is_simple_cycle(const Multigraph& g, const std::vector<int>& cycle) {
  if (cycle.empty()) return false;
  if (cycle.size() == 1) return g.edge(cycle[0]).is_loop();
  // Orient the first edge so that its head meets the second edge.
  const Edge& first = g.edge(cycle[0]);
  int start = first.a.vertex, cur = first.b.vertex;
  if (!g.edge(cycle[1]).touches(cur)) std::swap(start, cur);
  std::vector<int> seen{start};
  for (size_t i = 1; i < cycle.size(); ++i) {
    const Edge& e = g.edge(cycle[i]);
    if (!e.touches(cur) || e.is_loop()) return false;
    if (std::find(seen.begin(), seen.end(), cur) != seen.end()) return false;
    seen.push_back(cur);
    cur = e.other(cur);
  }
  std::vector<int> sorted = cycle;
  std::sort(sorted.begin(), sorted.end());
  return cur == start && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

std::vector<bool> to_mask(int size, const std::vector<int>& ids) {
  std::vector<bool> m(size, false);
  for (int i : ids) m.at(i) = true;
  return m;
}

std::vector<int> from_mask(const std::vector<bool>& mask) {
  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i)
    if (mask[i]) ids.push_back(i);
  return ids;
}

namespace {

// loops[i] and mult[i][j] describe a multigraph up to slot choice.
struct Shape {
  std::vector<int> loops;
  std::vector<std::vector<int>> mult;
};

std::vector<int> encode(const Shape& s, const std::vector<int>& perm) {
  const int n = static_cast<int>(s.loops.size());
  std::vector<int> code;
  for (int i = 0; i < n; ++i) code.push_back(s.loops[perm[i]]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) code.push_back(s.mult[perm[i]][perm[j]]);
  return code;
}

std::vector<int> canonical_code(const Shape& s) {
  std::vector<int> perm(s.loops.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::vector<int> best = encode(s, perm);
  while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, encode(s, perm));
  return best;
}

Multigraph realize(const Shape& s) {
  const int n = static_cast<int>(s.loops.size());
  std::vector<int> next_slot(n, 0);
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    Dart da{a, next_slot[a]++};
    Dart db{b, next_slot[b]++};
    edges.push_back({da, db});
  };
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < s.loops[i]; ++k) add(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < s.mult[i][j]; ++k) add(i, j);
  return Multigraph(n, std::move(edges));
}

}  // namespace

std::vector<Multigraph> four_valent_graphs(int n) {
  require(n >= 1, "four_valent_graphs: need at least one vertex");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  Shape s{std::vector<int>(n, 0), std::vector<std::vector<int>>(n, std::vector<int>(n, 0))};
  std::vector<std::vector<int>> seen;
  std::vector<Multigraph> out;
  // Choose pair multiplicities; loops are then forced by the degree.
  std::vector<int> m(pairs.size(), 0);
  while (true) {
    std::vector<int> deg(n, 0);
    for (size_t p = 0; p < pairs.size(); ++p) {
      deg[pairs[p].first] += m[p];
      deg[pairs[p].second] += m[p];
      s.mult[pairs[p].first][pairs[p].second] = s.mult[pairs[p].second][pairs[p].first] = m[p];
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      int rest = 4 - deg[i];
      ok = rest >= 0 && rest % 2 == 0;
      if (ok) s.loops[i] = rest / 2;
    }
    if (ok) {
      Multigraph g = realize(s);
      auto code = canonical_code(s);
      if (g.is_connected() && std::find(seen.begin(), seen.end(), code) == seen.end()) {
        seen.push_back(code);
        out.push_back(std::move(g));
      }
    }
    size_t p = 0;
    while (p < m.size() && m[p] == 4) m[p++] = 0;
    if (p == m.size()) break;
    ++m[p];
  }
  return out;
}

Multigraph parse_graph(std::string_view input) {
  auto lines = text::tokenize(input);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "vertices")
    fail_parse("graph: first line must be 'vertices N'");
  int n = text::to_int(lines[0].tokens[1], lines[0]);
  if (n < 0) fail_parse("graph: negative vertex count");
  std::vector<Edge> edges;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() != 3 || l.tokens[0] != "edge")
      fail_parse("graph line " + std::to_string(l.number) + ": expected 'edge a.slot b.slot'");
    auto [av, as] = text::to_pair(l.tokens[1], l);
    auto [bv, bs] = text::to_pair(l.tokens[2], l);
    edges.push_back({{av, as}, {bv, bs}});
  }
  try {
    return Multigraph(n, std::move(edges));
  } catch (const Error& e) {
    fail_parse(std::string("graph: ") + e.what());
  }
}

std::string format_graph(const Multigraph& g) {
  std::ostringstream out;
  out << "vertices " << g.vertex_count() << "\n";
  for (const Edge& e : g.edges())
    out << "edge " << e.a.vertex << "." << e.a.slot << " " << e.b.vertex << "." << e.b.slot << "\n";
  return out.str();
}

}  // namespace momkit
