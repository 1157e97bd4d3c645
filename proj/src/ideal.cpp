#include "momkit/ideal.hpp"

#include <algorithm>
#include <boost/pending/disjoint_sets.hpp>
#include <queue>
#include <set>
#include <sstream>

#include "momkit/error.hpp"
#include "momkit/text.hpp"

namespace momkit {

namespace {

using Dsu = boost::disjoint_sets_with_storage<>;

Dsu make_dsu(int n) {
  Dsu d(n);
  for (int i = 0; i < n; ++i) d.make_set(i);
  return d;
}

int root(Dsu& d, int i) { return static_cast<int>(d.find_set(i)); }

int directed(int t, int a, int b) { return 16 * t + 4 * a + b; }

// Vertices of face f in increasing order.
std::array<int, 3> face_corners(int f) {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[k++] = v;
  return out;
}

int other_vertex(int a, int b, int c) { return 6 - a - b - c; }

bool is_perm(const Perm4& p) {
  std::array<bool, 4> seen{};
  for (int x : p) {
    if (x < 0 || x > 3 || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

std::array<int, 3> outward_corners(int f, int sign) {
  std::array<int, 3> c{};
  switch (f) {
    case 0: c = {1, 2, 3}; break;
    case 1: c = {0, 3, 2}; break;
    case 2: c = {0, 1, 3}; break;
    default: c = {0, 2, 1}; break;
  }
  if (sign < 0) std::swap(c[1], c[2]);
  return c;
}

Perm4 perm_inverse(const Perm4& p) {
  Perm4 q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

Perm4 perm_compose(const Perm4& outer, const Perm4& inner) {
  Perm4 r{};
  for (int i = 0; i < 4; ++i) r[i] = outer[inner[i]];
  return r;
}

int perm_sign(const Perm4& p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

int edge_number(int a, int b) {
  if (a > b) std::swap(a, b);
  require(a >= 0 && b <= 3 && a != b, "edge_number: bad vertex pair");
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[a][b];
}

std::array<int, 2> edge_vertices(int number) {
  static constexpr std::array<std::array<int, 2>, 6> v{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  return v.at(number);
}

std::vector<int> ValidationReport::genera() const {
  std::vector<int> g;
  for (const auto& l : links) g.push_back(l.genus());
  return g;
}

IdealTriangulation::IdealTriangulation(std::vector<std::array<FaceGluing, 4>> gluings) : gluings_(std::move(gluings)) {
  const int T = tet_count();
  require(T > 0, "triangulation: needs at least one tetrahedron");
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluings_[t][f];
      if (!g.glued()) continue;
      const std::string at = std::to_string(t) + "." + std::to_string(f);
      require(g.tet < T && g.face >= 0 && g.face < 4, "triangulation: face " + at + " glued out of range");
      require(is_perm(g.perm) && g.perm[f] == g.face, "triangulation: bad permutation on face " + at);
      require(!(g.tet == t && g.face == f), "triangulation: face " + at + " glued to itself");
      const auto& back = gluings_[g.tet][g.face];
      require(back.tet == t && back.face == f && back.perm == perm_inverse(g.perm),
              "triangulation: gluing of face " + at + " is not symmetric");
    }

  face_class_.assign(4 * T, -1);
  for (int i = 0; i < 4 * T; ++i) {
    if (face_class_[i] >= 0) continue;
    const int c = static_cast<int>(face_reps_.size());
    face_reps_.push_back({i / 4, i % 4});
    face_class_[i] = c;
    const auto& g = gluings_[i / 4][i % 4];
    if (g.glued()) face_class_[4 * g.tet + g.face] = c;
  }

  Dsu dir = make_dsu(16 * T);
  Dsu und = make_dsu(6 * T);
  Dsu ver = make_dsu(4 * T);
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluings_[t][f];
      if (!g.glued()) continue;
      const auto& p = g.perm;
      for (int v : face_corners(f)) ver.union_set(4 * t + v, 4 * g.tet + p[v]);
      for (int a : face_corners(f))
        for (int b : face_corners(f))
          if (a != b) dir.union_set(directed(t, a, b), directed(g.tet, p[a], p[b]));
      for (int a : face_corners(f))
        for (int b : face_corners(f))
          if (a < b) und.union_set(6 * t + edge_number(a, b), 6 * g.tet + edge_number(p[a], p[b]));
    }

  vertex_class_.assign(4 * T, -1);
  {
    std::vector<int> id(4 * T, -1);
    for (int i = 0; i < 4 * T; ++i) {
      int r = root(ver, i);
      if (id[r] < 0) id[r] = vertex_count_++;
      vertex_class_[i] = id[r];
    }
  }

  edge_class_.assign(6 * T, -1);
  std::vector<int> id(6 * T, -1);
  std::vector<int> size;
  for (int i = 0; i < 6 * T; ++i) {
    int r = root(und, i);
    if (id[r] < 0) {
      id[r] = static_cast<int>(size.size());
      size.push_back(0);
    }
    edge_class_[i] = id[r];
    ++size[id[r]];
    auto [a, b] = edge_vertices(i % 6);
    if (root(dir, directed(i / 6, a, b)) == root(dir, directed(i / 6, b, a))) edges_valid_ = false;
  }
  edges_.resize(size.size());

  // Walk around each edge; a state is a tet edge a-b and the face to cross next.
  struct State {
    int t, a, b, from, to;
  };
  auto step = [&](const State& s) -> std::optional<State> {
    const auto& g = gluings_[s.t][s.to];
    if (!g.glued()) return std::nullopt;
    const auto& p = g.perm;
    return State{g.tet, p[s.a], p[s.b], p[s.to], p[s.from]};
  };
  std::vector<bool> start_done(size.size(), false);
  for (int i = 0; i < 6 * T; ++i) {
    const int c = edge_class_[i];
    if (start_done[c]) continue;
    start_done[c] = true;
    auto [a, b] = edge_vertices(i % 6);
    int k1 = -1, k2 = -1;
    for (int v = 0; v < 4; ++v)
      if (v != a && v != b) (k1 < 0 ? k1 : k2) = v;
    State s{i / 6, a, b, k2, k1};
    // Run forward to a boundary end if there is one.
    std::vector<bool> seen(6 * T, false);
    seen[i] = true;
    bool boundary = false;
    for (;;) {
      auto n = step(s);
      if (!n) {
        boundary = true;
        break;
      }
      int key = 6 * n->t + edge_number(n->a, n->b);
      if (seen[key]) break;
      seen[key] = true;
      s = *n;
    }
    EdgeClass& ec = edges_[c];
    ec.boundary = boundary;
    if (boundary) std::swap(s.from, s.to);
    else s = State{i / 6, a, b, k2, k1};
    std::fill(seen.begin(), seen.end(), false);
    for (;;) {
      int key = 6 * s.t + edge_number(s.a, s.b);
      if (seen[key]) break;
      seen[key] = true;
      ec.members.push_back({s.t, s.a, s.b});
      auto n = step(s);
      if (!n) break;
      s = *n;
    }
    if (ec.degree() != size[c] && edges_valid_)
      fail_invariant("triangulation: edge walk missed tetrahedron edges of class " + std::to_string(c));
  }
  edge_sign_.assign(16 * T, 0);
  for (int t = 0; t < T; ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        const TetEdge& m = edges_[edge_class(t, a, b)].members.front();
        edge_sign_[directed(t, a, b)] = root(dir, directed(t, a, b)) == root(dir, directed(m.tet, m.a, m.b)) ? 1 : -1;
      }
}

bool IdealTriangulation::fully_glued() const {
  for (const auto& tet : gluings_)
    for (const auto& g : tet)
      if (!g.glued()) return false;
  return true;
}

std::array<int, 3> IdealTriangulation::face_edges(int c) const {
  auto [t, f] = face_rep(c);
  auto v = face_corners(f);
  return {edge_class(t, v[1], v[2]), edge_class(t, v[0], v[2]), edge_class(t, v[0], v[1])};
}

std::optional<std::vector<int>> IdealTriangulation::orientation() const {
  const int T = tet_count();
  std::vector<int> sign(T, 0);
  for (int s = 0; s < T; ++s) {
    if (sign[s]) continue;
    sign[s] = 1;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (const auto& g : gluings_[t]) {
        if (!g.glued()) continue;
        int want = -sign[t] * perm_sign(g.perm);
        if (!sign[g.tet]) {
          sign[g.tet] = want;
          q.push(g.tet);
        } else if (sign[g.tet] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return sign;
}

bool operator==(const IdealTriangulation& a, const IdealTriangulation& b) {
  if (a.tet_count() != b.tet_count()) return false;
  for (int t = 0; t < a.tet_count(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& x = a.gluing(t, f);
      const auto& y = b.gluing(t, f);
      if (x.tet != y.tet || (x.glued() && (x.face != y.face || x.perm != y.perm))) return false;
    }
  return true;
}

std::vector<LinkComponent> vertex_links(const IdealTriangulation& tri) {
  const int T = tri.tet_count();
  Dsu dir = make_dsu(16 * T);
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g.glued()) continue;
      for (int a : face_corners(f))
        for (int b : face_corners(f))
          if (a != b) dir.union_set(directed(t, a, b), directed(g.tet, g.perm[a], g.perm[b]));
    }
  const int V = tri.vertex_count();
  std::vector<int> faces(V, 0), glued_sides(V, 0), free_sides(V, 0);
  std::vector<std::set<int>> link_vertices(V);
  Dsu circles = make_dsu(16 * T);
  std::vector<std::set<int>> boundary_vertices(V);
  for (int t = 0; t < T; ++t)
    for (int v = 0; v < 4; ++v) {
      const int c = tri.vertex_class(t, v);
      ++faces[c];
      for (int w = 0; w < 4; ++w)
        if (w != v) link_vertices[c].insert(root(dir, directed(t, v, w)));
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        if (tri.gluing(t, f).glued()) {
          ++glued_sides[c];
          continue;
        }
        ++free_sides[c];
        int w1 = -1, w2 = -1;
        for (int w = 0; w < 4; ++w)
          if (w != v && w != f) (w1 < 0 ? w1 : w2) = w;
        int r1 = root(dir, directed(t, v, w1)), r2 = root(dir, directed(t, v, w2));
        circles.union_set(r1, r2);
        boundary_vertices[c].insert(r1);
        boundary_vertices[c].insert(r2);
      }
    }
  std::vector<LinkComponent> out(V);
  for (int c = 0; c < V; ++c) {
    const int E = glued_sides[c] / 2 + free_sides[c];
    out[c].euler = static_cast<int>(link_vertices[c].size()) - E + faces[c];
    std::set<int> roots;
    for (int r : boundary_vertices[c]) roots.insert(root(circles, r));
    out[c].boundary_circles = static_cast<int>(roots.size());
  }
  return out;
}

ValidationReport validate(const IdealTriangulation& tri) {
  ValidationReport r;
  r.tets = tri.tet_count();
  r.edge_classes = tri.edge_count();
  r.face_classes = tri.face_count();
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int f = 0; f < 4; ++f)
      if (!tri.gluing(t, f).glued()) r.problems.push_back("face " + std::to_string(t) + "." + std::to_string(f) + " is unglued");
  if (!tri.edges_valid()) r.problems.push_back("an edge is identified with itself in reverse");
  if (!tri.orientation()) r.problems.push_back("not orientable");
  r.links = vertex_links(tri);
  for (size_t c = 0; c < r.links.size(); ++c) {
    const auto& l = r.links[c];
    if (l.boundary_circles > 0) continue;  // already reported as unglued faces
    if (l.euler == 2) r.problems.push_back("vertex " + std::to_string(c) + " has a sphere link");
    else if (l.euler > 2 || l.euler % 2) r.problems.push_back("vertex " + std::to_string(c) + " link is not a closed orientable surface");
  }
  r.valid = r.problems.empty();
  return r;
}

std::vector<int> boundary_genera(const IdealTriangulation& tri) { return validate(tri).genera(); }

DualSpineGraph dual_graph(const IdealTriangulation& tri) {
  DualSpineGraph d;
  d.dual_edge.assign(tri.face_count(), -1);
  std::vector<Edge> edges;
  for (int c = 0; c < tri.face_count(); ++c) {
    auto [t, f] = tri.face_rep(c);
    const auto& g = tri.gluing(t, f);
    if (!g.glued()) continue;
    d.dual_edge[c] = static_cast<int>(edges.size());
    d.face_class.push_back(c);
    edges.push_back({{t, f}, {g.tet, g.face}});
  }
  d.graph = Multigraph(tri.tet_count(), std::move(edges));
  return d;
}

BoundarySurface boundary_surface(const IdealTriangulation& tri) {
  auto sign = tri.orientation();
  require(sign.has_value(), "boundary: triangulation is not orientable");
  const int T = tri.tet_count();
  BoundarySurface b;
  std::vector<int> tri_of(4 * T, -1);
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < 4; ++f) {
      if (tri.gluing(t, f).glued()) continue;
      tri_of[4 * t + f] = static_cast<int>(b.face.size());
      b.face.push_back({t, f});
      b.corners.push_back(outward_corners(f, (*sign)[t]));
    }
  require(!b.face.empty(), "boundary: every face is glued");
  const int F = static_cast<int>(b.face.size());
  std::vector<Side> partner(3 * F);
  for (int i = 0; i < F; ++i)
    for (int s = 0; s < 3; ++s) {
      auto [t, f] = b.face[i];
      int a = b.corners[i][s], bb = b.corners[i][(s + 1) % 3];
      int from = f, to = other_vertex(a, bb, f);
      int guard = 0;
      while (tri.gluing(t, to).glued()) {
        if (++guard > 4 * T + 1) fail_invariant("boundary: edge walk does not terminate");
        const auto& g = tri.gluing(t, to);
        int na = g.perm[a], nb = g.perm[bb], nfrom = g.perm[to], nto = g.perm[from];
        t = g.tet;
        a = na;
        bb = nb;
        from = nfrom;
        to = nto;
      }
      const int j = tri_of[4 * t + to];
      int r = -1;
      for (int q = 0; q < 3; ++q)
        if (b.corners[j][q] == bb && b.corners[j][(q + 1) % 3] == a) r = q;
      if (r < 0) fail_invariant("boundary: unglued faces meet with matching orientation");
      partner[3 * i + s] = {j, r};
    }
  b.surface = SurfaceTriangulation(std::move(partner));
  return b;
}

Pachner23Result pachner23(const IdealTriangulation& tri, int face_class) {
  require(face_class >= 0 && face_class < tri.face_count(), "2-3 move: face out of range");
  auto [t0, a0] = tri.face_rep(face_class);
  const FaceGluing across = tri.gluing(t0, a0);
  require(across.glued(), "2-3 move: face is unglued");
  const int t1 = across.tet, a1 = across.face;
  require(t1 != t0, "2-3 move: face joins a tetrahedron to itself");
  const int T = tri.tet_count();

  // Labels of the bipyramid: 0 and 1 the apexes, 2, 3, 4 the shared triangle.
  constexpr int A0 = 0, A1 = 1;
  std::array<int, 4> lab0{}, lab1{};
  lab0[a0] = A0;
  lab1[a1] = A1;
  auto shared = face_corners(a0);
  for (int i = 0; i < 3; ++i) {
    lab0[shared[i]] = 2 + i;
    lab1[across.perm[shared[i]]] = 2 + i;
  }
  // N_x for x in {2,3,4} holds the apexes and the two labels other than x,
  // in cyclic order after x.
  std::array<std::array<int, 4>, 3> nlab{};
  const std::array<int, 3> slot{t0, t1, T};
  for (int x = 0; x < 3; ++x) nlab[x] = {A0, A1, 2 + (x + 1) % 3, 2 + (x + 2) % 3};
  auto index_in = [&](int n, int label) {
    for (int k = 0; k < 4; ++k)
      if (nlab[n][k] == label) return k;
    return -1;
  };

  struct Image {
    int tet, face;
    Perm4 vm;  // old vertex -> new vertex
  };
  auto image = [&](int t, int f) -> Image {
    if (t != t0 && t != t1) return {t, f, {0, 1, 2, 3}};
    const auto& lab = t == t0 ? lab0 : lab1;
    const int n = lab[f] - 2;
    const int opp = t == t0 ? A1 : A0;
    Perm4 vm{};
    for (int w = 0; w < 4; ++w) vm[w] = w == f ? index_in(n, opp) : index_in(n, lab[w]);
    return {slot[n], index_in(n, opp), vm};
  };

  std::vector<std::array<FaceGluing, 4>> g(T + 1);
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < 4; ++f) {
      if ((t == t0 && f == a0) || (t == t1 && f == a1)) continue;
      const auto& old = tri.gluing(t, f);
      Image src = image(t, f);
      if (!old.glued()) {
        g[src.tet][src.face] = FaceGluing{};
        continue;
      }
      Image dst = image(old.tet, old.face);
      g[src.tet][src.face] = {dst.tet, dst.face, perm_compose(dst.vm, perm_compose(old.perm, perm_inverse(src.vm)))};
    }
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      if (x == y) continue;
      Perm4 p{};
      for (int k = 0; k < 4; ++k) p[k] = nlab[x][k] == 2 + y ? index_in(y, 2 + x) : index_in(y, nlab[x][k]);
      g[slot[x]][index_in(x, 2 + y)] = {slot[y], index_in(y, 2 + x), p};
    }

  Pachner23Result r;
  r.tri = IdealTriangulation(std::move(g));
  r.new_tets = slot;
  r.new_edge = r.tri.edge_class(slot[0], 0, 1);
  r.new_faces = {r.tri.face_class(slot[0], index_in(0, 3)), r.tri.face_class(slot[0], index_in(0, 4)),
                 r.tri.face_class(slot[1], index_in(1, 4))};

  r.edge_map.assign(tri.edge_count(), -1);
  for (int c = 0; c < tri.edge_count(); ++c) {
    const TetEdge m = tri.edge(c).members.front();
    if (m.tet != t0 && m.tet != t1) {
      r.edge_map[c] = r.tri.edge_class(m.tet, m.a, m.b);
      continue;
    }
    const auto& lab = m.tet == t0 ? lab0 : lab1;
    for (int n = 0; n < 3 && r.edge_map[c] < 0; ++n) {
      int ia = index_in(n, lab[m.a]), ib = index_in(n, lab[m.b]);
      if (ia >= 0 && ib >= 0) r.edge_map[c] = r.tri.edge_class(slot[n], ia, ib);
    }
  }
  r.face_map.assign(tri.face_count(), -1);
  for (int c = 0; c < tri.face_count(); ++c) {
    if (c == face_class) continue;
    auto [t, f] = tri.face_rep(c);
    Image im = image(t, f);
    r.face_map[c] = r.tri.face_class(im.tet, im.face);
  }

  if (r.tri.edge_count() != tri.edge_count() + 1)
    fail_invariant("2-3 move: edge count did not grow by one");
  if (r.tri.edge(r.new_edge).degree() != 3) fail_invariant("2-3 move: new edge does not have degree 3");
  if (tri.edges_valid() != r.tri.edges_valid() || tri.orientation().has_value() != r.tri.orientation().has_value())
    fail_invariant("2-3 move: validity changed");
  return r;
}

IdealTriangulation parse_triangulation(std::string_view input) {
  auto lines = text::tokenize(input);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "tets")
    fail_parse("triangulation: first line must be 'tets N'");
  const int T = text::to_int(lines[0].tokens[1], lines[0]);
  if (T <= 0) fail_parse("triangulation: tetrahedron count must be positive");
  std::vector<std::array<FaceGluing, 4>> g(T);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const std::string where = "triangulation line " + std::to_string(l.number) + ": ";
    if (l.tokens.size() != 4 || l.tokens[0] != "glue" || l.tokens[3].rfind("perm=", 0) != 0)
      fail_parse(where + "expected 'glue t1.f1 t2.f2 perm=abc'");
    auto [t1, f1] = text::to_pair(l.tokens[1], l);
    auto [t2, f2] = text::to_pair(l.tokens[2], l);
    for (auto [t, f] : {std::pair{t1, f1}, std::pair{t2, f2}}) {
      if (t < 0 || t >= T || f < 0 || f > 3) fail_parse(where + "face out of range");
      if (g[t][f].glued()) fail_parse(where + "face " + std::to_string(t) + "." + std::to_string(f) + " glued twice");
    }
    if (t1 == t2 && f1 == f2) fail_parse(where + "face glued to itself");
    const std::string digits = l.tokens[3].substr(5);
    if (digits.size() != 3) fail_parse(where + "perm needs three digits");
    Perm4 p{};
    p[f1] = f2;
    auto corners = face_corners(f1);
    for (int k = 0; k < 3; ++k) {
      if (digits[k] < '0' || digits[k] > '3') fail_parse(where + "perm digit out of range");
      p[corners[k]] = digits[k] - '0';
    }
    if (!is_perm(p)) fail_parse(where + "perm is not a bijection onto the other face");
    g[t1][f1] = {t2, f2, p};
    g[t2][f2] = {t1, f1, perm_inverse(p)};
  }
  return IdealTriangulation(std::move(g));
}

std::string format_triangulation(const IdealTriangulation& tri) {
  std::ostringstream out;
  out << "tets " << tri.tet_count() << "\n";
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g.glued() || 4 * g.tet + g.face < 4 * t + f) continue;
      out << "glue " << t << "." << f << " " << g.tet << "." << g.face << " perm=";
      for (int v : face_corners(f)) out << g.perm[v];
      out << "\n";
    }
  return out.str();
}

}  // namespace momkit
