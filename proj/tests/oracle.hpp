#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "momkit/ideal.hpp"
#include "momkit/protomom.hpp"
#include "momkit/solid.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<long>>;

// Invariant factors of an integer matrix (nonzero diagonal of its Smith form).
inline std::vector<long> smith_diagonal(Matrix m) {
  std::vector<long> diag;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r0 = 0;
  for (int c0 = 0; r0 < rows && c0 < cols; ++c0) {
    for (;;) {
      int pr = -1, pc = -1;
      long best = 0;
      for (int i = r0; i < rows; ++i)
        for (int j = c0; j < cols; ++j)
          if (m[i][j] && (!best || std::labs(m[i][j]) < best)) {
            best = std::labs(m[i][j]);
            pr = i;
            pc = j;
          }
      if (pr < 0) return diag;
      std::swap(m[r0], m[pr]);
      for (auto& row : m) std::swap(row[c0], row[pc]);
      bool clean = true;
      for (int i = r0 + 1; i < rows; ++i) {
        long q = m[i][c0] / m[r0][c0];
        for (int j = c0; j < cols; ++j) m[i][j] -= q * m[r0][j];
        if (m[i][c0]) clean = false;
      }
      for (int j = c0 + 1; j < cols; ++j) {
        long q = m[r0][j] / m[r0][c0];
        for (int i = r0; i < rows; ++i) m[i][j] -= q * m[i][c0];
        if (m[r0][j]) clean = false;
      }
      if (!clean) continue;
      // Divisibility of the remaining block.
      bool divides = true;
      for (int i = r0 + 1; i < rows && divides; ++i)
        for (int j = c0 + 1; j < cols; ++j)
          if (m[i][j] % m[r0][c0]) {
            for (int k = c0; k < cols; ++k) m[r0][k] += m[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(std::labs(m[r0][c0]));
    ++r0;
  }
  return diag;
}

// First homology of the (ideal) triangulation as (rank, torsion factors > 1).
// Generators are the face classes, i.e. the edges of the dual cell structure;
// relations are the dual spanning tree and one cycle per edge class, obtained
// by walking around the edge and recording signed face crossings. Unglued
// faces and edges on them are dropped: the dual complex of the remaining cells
// is a deformation retract of a complex with boundary.
struct Homology {
  int rank = 0;
  std::vector<long> torsion;
  friend bool operator==(const Homology&, const Homology&) = default;
};

inline Homology first_homology(const momkit::IdealTriangulation& tri) {
  std::vector<int> col(tri.face_count(), -1);
  int F = 0;
  for (int c = 0; c < tri.face_count(); ++c) {
    auto [t, f] = tri.face_rep(c);
    if (tri.gluing(t, f).glued()) col[c] = F++;
  }
  Matrix rel;
  // Dual spanning tree by BFS over tetrahedra.
  std::vector<bool> reached(tri.tet_count(), false);
  std::vector<int> queue{0};
  reached[0] = true;
  for (size_t q = 0; q < queue.size(); ++q)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(queue[q], f);
      if (!g.glued() || reached[g.tet]) continue;
      reached[g.tet] = true;
      queue.push_back(g.tet);
      std::vector<long> row(F, 0);
      row[col[tri.face_class(queue[q], f)]] = 1;
      rel.push_back(row);
    }
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int e = 0; e < 6; ++e) {
      auto [a, b] = momkit::edge_vertices(e);
      // Use each edge class once, from its first member.
      const auto& cls = tri.edge(tri.edge_class(t, a, b));
      const auto& first = cls.members.front();
      if (cls.boundary || first.tet != t || momkit::edge_number(first.a, first.b) != e) continue;
      int from = -1, to = -1;
      for (int v = 0; v < 4; ++v)
        if (v != a && v != b) (to < 0 ? to : from) = v;
      const int from0 = from, to0 = to;
      std::vector<long> row(F, 0);
      int ct = t, ca = a, cb = b;
      do {
        const auto& g = tri.gluing(ct, to);
        auto rep = tri.face_rep(tri.face_class(ct, to));
        row[col[tri.face_class(ct, to)]] += (rep[0] == ct && rep[1] == to) ? 1 : -1;
        int na = g.perm[ca], nb = g.perm[cb], nfrom = g.perm[to], nto = g.perm[from];
        ct = g.tet;
        ca = na;
        cb = nb;
        from = nfrom;
        to = nto;
      } while (!(ct == t && ca == a && cb == b && from == from0 && to == to0));
      rel.push_back(row);
    }
  auto d = smith_diagonal(rel);
  Homology h;
  h.rank = F - static_cast<int>(d.size());
  for (long x : d)
    if (x > 1) h.torsion.push_back(x);
  return h;
}

// General colorings by brute force over all 3^E colorings: the t-edges form a
// forest, and each tree carries exactly one c-edge with both ends on it.
inline int count_general_colorings(const momkit::Multigraph& g) {
  const int E = g.edge_count(), V = g.vertex_count();
  long total = 1;
  for (int i = 0; i < E; ++i) total *= 3;
  int count = 0;
  std::vector<int> col(E, 0);
  for (long code = 0; code < total; ++code) {
    long x = code;
    for (int e = 0; e < E; ++e, x /= 3) col[e] = static_cast<int>(x % 3);  // 0 t, 1 c, 2 f
    std::vector<int> root(V);
    std::iota(root.begin(), root.end(), 0);
    std::function<int(int)> find = [&](int v) { return root[v] == v ? v : root[v] = find(root[v]); };
    bool ok = true;
    for (int e = 0; e < E && ok; ++e) {
      if (col[e] != 0) continue;
      int a = find(g.edge(e).a.vertex), b = find(g.edge(e).b.vertex);
      if (a == b) ok = false;
      root[a] = b;
    }
    std::map<int, int> c_on;
    for (int e = 0; e < E && ok; ++e) {
      if (col[e] != 1) continue;
      int a = find(g.edge(e).a.vertex), b = find(g.edge(e).b.vertex);
      if (a != b) ok = false;
      else ++c_on[a];
    }
    for (int v = 0; v < V && ok; ++v)
      if (c_on[find(v)] != 1) ok = false;
    count += ok ? 1 : 0;
  }
  return count;
}

inline bool contains(const momkit::InducedProtoMom& big, const momkit::InducedProtoMom& small) {
  for (int e = 0; e < big.tri().edge_count(); ++e)
    if (small.edge_kept(e) && !big.edge_kept(e)) return false;
  for (int c = 0; c < big.tri().face_count(); ++c)
    if (small.face_kept(c) && !big.face_kept(c)) return false;
  return true;
}

// Internal structures not properly contained in another one, by pairwise comparison.
inline std::vector<momkit::InducedProtoMom> maximal_by_containment(const std::vector<momkit::InducedProtoMom>& internal) {
  std::vector<momkit::InducedProtoMom> out;
  for (const auto& s : internal) {
    bool top = true;
    for (const auto& o : internal)
      if (!(o == s) && contains(o, s)) top = false;
    if (top) out.push_back(s);
  }
  return out;
}

using SlopeKey = std::array<long, 6>;
inline SlopeKey slope_key(const momkit::SlopeTriple& t) {
  auto n = momkit::normalized(t);
  return {n[0].p, n[0].q, n[1].p, n[1].q, n[2].p, n[2].q};
}

// Breadth-first search over slope triples: one step replaces a slope by the
// other sum or difference of the remaining two. Returns the distance of every
// triple whose slopes stay within the L1 bound.
inline std::map<SlopeKey, int> slope_distances(long bound) {
  using momkit::SlopeTriple;
  using momkit::Vec2;
  std::map<SlopeKey, int> dist;
  std::queue<SlopeTriple> q;
  SlopeTriple base{Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}};
  dist[slope_key(base)] = 0;
  q.push(momkit::normalized(base));
  while (!q.empty()) {
    auto t = q.front();
    q.pop();
    int d = dist[slope_key(t)];
    for (int i = 0; i < 3; ++i) {
      Vec2 x = t[(i + 1) % 3], y = t[(i + 2) % 3];
      for (Vec2 m : {Vec2{x.p + y.p, x.q + y.q}, Vec2{x.p - y.p, x.q - y.q}}) {
        if (std::labs(m.p) + std::labs(m.q) > bound) continue;
        SlopeTriple n{x, y, m};
        if (dist.emplace(slope_key(n), d + 1).second) q.push(momkit::normalized(n));
      }
    }
  }
  return dist;
}

}  // namespace oracle
