#include "momkit/solid.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <sstream>

#include "momkit/error.hpp"
#include "momkit/text.hpp"

namespace momkit {

namespace {

std::array<int, 3> face_corners(int f) {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[k++] = v;
  return out;
}

Vec2 scaled(const Vec2& v, long k) { return {v.p * k, v.q * k}; }
Vec2 plus(const Vec2& a, const Vec2& b) { return {a.p + b.p, a.q + b.q}; }
Vec2 minus(const Vec2& a, const Vec2& b) { return {a.p - b.p, a.q - b.q}; }
long norm1(const Vec2& v) { return std::labs(v.p) + std::labs(v.q); }
Vec2 canonical(Vec2 v) { return (v.p < 0 || (v.p == 0 && v.q < 0)) ? scaled(v, -1) : v; }

Vec2 slope_along(const IdealTriangulation& tri, const std::vector<Vec2>& slope, int t, int a, int b) {
  return scaled(slope.at(tri.edge_class(t, a, b)), tri.edge_sign(t, a, b));
}

// Boundary edge e of an lst, as a directed tetrahedron edge along its lowest dart.
TetEdge boundary_edge(const BoundarySurface& b, int e) {
  Side d = b.surface.edge_darts(e)[0];
  return {b.face[d.tri][0], b.corners[d.tri][d.side], b.corners[d.tri][(d.side + 1) % 3]};
}

void check_lst(const LayeredSolidTorus& l) {
  const auto& s = l.boundary.surface;
  if (s.triangle_count() != 2 || s.vertex_count() != 1 || s.edge_count() != 3)
    fail_invariant("layered solid torus: boundary is not a one-vertex torus");
  if (!is_cocycle(l.complex, l.meridian)) fail_invariant("layered solid torus: meridian is not a cocycle");
  for (int i = 0; i < 2; ++i) {
    auto [t, f] = l.boundary.face[i];
    (void)f;
    const auto& c = l.boundary.corners[i];
    Vec2 sum{};
    for (int k = 0; k < 3; ++k) sum = plus(sum, slope_along(l.complex, l.slope, t, c[k], c[(k + 1) % 3]));
    if (!(sum == Vec2{})) fail_invariant("layered solid torus: boundary slopes do not close up");
  }
  auto sl = l.slopes();
  for (int i = 0; i < 3; ++i)
    if (std::labs(det(sl[i], sl[(i + 1) % 3])) != 1) fail_invariant("layered solid torus: slopes are not pairwise unimodular");
}

LayeredSolidTorus finish(IdealTriangulation complex, std::vector<std::optional<long>> known, std::vector<Vec2> slope,
                         LayeredTrace trace) {
  LayeredSolidTorus l;
  auto m = extend_cocycle(complex, std::move(known));
  if (!m) fail_invariant("layered solid torus: meridian does not extend");
  l.meridian = std::move(*m);
  l.boundary = boundary_surface(complex);
  l.complex = std::move(complex);
  l.slope = std::move(slope);
  l.trace = std::move(trace);
  check_lst(l);
  return l;
}

}  // namespace

long det(const Vec2& a, const Vec2& b) { return a.p * b.q - a.q * b.p; }

SlopeTriple normalized(SlopeTriple t) {
  for (auto& v : t) v = canonical(v);
  std::sort(t.begin(), t.end(), [](const Vec2& a, const Vec2& b) { return a.p != b.p ? a.p < b.p : a.q < b.q; });
  return t;
}

long along(const IdealTriangulation& tri, const EdgeCochain& c, int t, int a, int b) {
  return tri.edge_sign(t, a, b) * c.at(tri.edge_class(t, a, b));
}

bool is_cocycle(const IdealTriangulation& tri, const EdgeCochain& c) {
  if (static_cast<int>(c.size()) != tri.edge_count()) return false;
  for (int k = 0; k < tri.face_count(); ++k) {
    auto [t, f] = tri.face_rep(k);
    auto v = face_corners(f);
    if (along(tri, c, t, v[0], v[1]) + along(tri, c, t, v[1], v[2]) + along(tri, c, t, v[2], v[0]) != 0) return false;
  }
  return true;
}

std::optional<EdgeCochain> extend_cocycle(const IdealTriangulation& tri, std::vector<std::optional<long>> known) {
  require(static_cast<int>(known.size()) == tri.edge_count(), "cochain: one value per edge class expected");
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < tri.face_count(); ++k) {
      auto [t, f] = tri.face_rep(k);
      auto v = face_corners(f);
      int unknown = -1, count = 0;
      long sum = 0;
      for (int i = 0; i < 3; ++i) {
        int a = v[i], b = v[(i + 1) % 3];
        int c = tri.edge_class(t, a, b);
        if (known[c]) {
          sum += tri.edge_sign(t, a, b) * *known[c];
        } else {
          ++count;
          unknown = i;
        }
      }
      if (count != 1) continue;
      int a = v[unknown], b = v[(unknown + 1) % 3];
      // Another unknown slot may share the class (a folded face); then wait.
      int c = tri.edge_class(t, a, b);
      int same = 0;
      for (int i = 0; i < 3; ++i) same += tri.edge_class(t, v[i], v[(i + 1) % 3]) == c ? 1 : 0;
      if (same != 1) continue;
      known[c] = -sum * tri.edge_sign(t, a, b);
      changed = true;
    }
  }
  EdgeCochain out(known.size());
  for (size_t i = 0; i < known.size(); ++i) {
    if (!known[i]) return std::nullopt;
    out[i] = *known[i];
  }
  if (!is_cocycle(tri, out)) return std::nullopt;
  return out;
}

SlopeTriple LayeredSolidTorus::slopes() const {
  SlopeTriple out;
  for (int e = 0; e < 3; ++e) {
    TetEdge m = boundary_edge(boundary, e);
    out[e] = slope_along(complex, slope, m.tet, m.a, m.b);
  }
  return out;
}

std::array<long, 3> LayeredSolidTorus::weights() const {
  std::array<long, 3> out{};
  for (int e = 0; e < 3; ++e) {
    TetEdge m = boundary_edge(boundary, e);
    out[e] = along(complex, meridian, m.tet, m.a, m.b);
  }
  return out;
}

LayeredSolidTorus base_lst() {
  // Face 0-1-2 is folded onto face 1-2-3 by 0->1, 1->2, 2->3.
  std::vector<std::array<FaceGluing, 4>> g(1);
  g[0][3] = {0, 0, {1, 2, 3, 0}};
  g[0][0] = {0, 3, {3, 0, 1, 2}};
  IdealTriangulation tri(g);
  std::vector<std::optional<long>> known(tri.edge_count());
  known[tri.edge_class(0, 0, 1)] = tri.edge_sign(0, 0, 1);
  std::vector<Vec2> slope(tri.edge_count());
  slope[tri.edge_class(0, 0, 1)] = scaled({1, 0}, tri.edge_sign(0, 0, 1));
  slope[tri.edge_class(0, 0, 2)] = scaled({0, 1}, tri.edge_sign(0, 0, 2));
  slope[tri.edge_class(0, 0, 3)] = scaled({1, 1}, tri.edge_sign(0, 0, 3));
  return finish(std::move(tri), std::move(known), std::move(slope), {});
}

LayeredSolidTorus layer(const LayeredSolidTorus& lst, int boundary_edge_id) {
  const auto& b = lst.boundary;
  require(boundary_edge_id >= 0 && boundary_edge_id < b.surface.edge_count(), "layer: boundary edge out of range");
  auto site = s2_site(b.surface, boundary_edge_id);
  const int i1 = site.d1.tri, s1 = site.d1.side, i2 = site.d2.tri, s2 = site.d2.side;
  const auto& c1 = b.corners[i1];
  const auto& c2 = b.corners[i2];
  // New tetrahedron (a, b, c, r): face 3 on the first triangle, face 2 on the second.
  const int T = lst.complex.tet_count();
  auto g = lst.complex.gluings();
  g.emplace_back();
  auto [t1, f1] = b.face[i1];
  auto [t2, f2] = b.face[i2];
  Perm4 p1{c1[s1], c1[(s1 + 1) % 3], c1[(s1 + 2) % 3], f1};
  Perm4 p2{c2[(s2 + 1) % 3], c2[s2], f2, c2[(s2 + 2) % 3]};
  g[T][3] = {t1, f1, p1};
  g[t1][f1] = {T, 3, perm_inverse(p1)};
  g[T][2] = {t2, f2, p2};
  g[t2][f2] = {T, 2, perm_inverse(p2)};
  IdealTriangulation tri(std::move(g));

  std::vector<std::optional<long>> known(tri.edge_count());
  std::vector<Vec2> slope(tri.edge_count());
  for (int c = 0; c < lst.complex.edge_count(); ++c) {
    const TetEdge& m = lst.complex.edge(c).members.front();
    int nc = tri.edge_class(m.tet, m.a, m.b);
    long flip = tri.edge_sign(m.tet, m.a, m.b);
    known[nc] = lst.meridian[c] * flip;
    slope[nc] = scaled(lst.slope[c], flip);
  }
  // The new edge c -> r is homologous on the old boundary to c -> a -> r.
  int fresh = tri.edge_class(T, 2, 3);
  for (int c = 0; c < lst.complex.edge_count(); ++c) {
    const TetEdge& m = lst.complex.edge(c).members.front();
    if (tri.edge_class(m.tet, m.a, m.b) == fresh) fail_invariant("layer: new edge merged with an old one");
  }
  Vec2 cr = plus(slope_along(tri, slope, T, 2, 0), slope_along(tri, slope, T, 0, 3));
  slope[fresh] = scaled(cr, tri.edge_sign(T, 2, 3));
  LayeredTrace trace = lst.trace;
  trace.layerings.push_back(boundary_edge_id);
  return finish(std::move(tri), std::move(known), std::move(slope), std::move(trace));
}

LayeredSolidTorus build_lst(const LayeredTrace& trace) {
  LayeredSolidTorus l = base_lst();
  for (int e : trace.layerings) l = layer(l, e);
  return l;
}

LayeredSolidTorus realize_theta(const SlopeTriple& target) {
  for (const auto& v : target)
    require(std::gcd(v.p, v.q) == 1, "realize: slope (" + std::to_string(v.p) + "," + std::to_string(v.q) + ") is not primitive");
  for (int i = 0; i < 3; ++i)
    require(std::labs(det(target[i], target[(i + 1) % 3])) == 1, "realize: slopes are not pairwise unimodular");
  const SlopeTriple base = normalized({Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}});
  SlopeTriple cur = normalized(target);
  std::vector<Vec2> flips;  // slope to layer over, newest first
  while (!(cur == base)) {
    int n = 0;
    for (int i = 1; i < 3; ++i)
      if (norm1(cur[i]) > norm1(cur[n])) n = i;
    Vec2 x = cur[(n + 1) % 3], y = cur[(n + 2) % 3];
    Vec2 m = canonical(plus(x, y)) == canonical(cur[n]) ? minus(x, y) : plus(x, y);
    if (norm1(m) >= norm1(cur[n]) && !(normalized({x, y, m}) == base)) fail_invariant("realize: Farey descent did not shrink");
    flips.push_back(m);
    cur = normalized({x, y, m});
  }
  LayeredSolidTorus l = base_lst();
  for (auto it = flips.rbegin(); it != flips.rend(); ++it) {
    auto s = l.slopes();
    int e = -1;
    for (int i = 0; i < 3; ++i)
      if (canonical(s[i]) == canonical(*it)) e = i;
    if (e < 0) fail_invariant("realize: layering slope not on the boundary");
    l = layer(l, e);
  }
  if (!(normalized(l.slopes()) == normalized(target))) fail_invariant("realize: boundary slopes differ from the target");
  return l;
}

LayeredSolidTorus realize_weights(std::array<long, 3> w) {
  for (auto& x : w) x = std::labs(x);
  std::sort(w.begin(), w.end());
  require(w[2] == w[0] + w[1] && std::gcd(w[0], w[1]) == 1, "realize: weights do not come from a primitive meridian");
  std::vector<long> forward;  // weight of the edge to layer over, in order
  if (w == std::array<long, 3>{0, 1, 1}) {
    forward = {3, 2};
  } else if (w == std::array<long, 3>{1, 1, 2}) {
    forward = {3};
  } else {
    std::vector<long> back;
    while (w != std::array<long, 3>{1, 2, 3}) {
      long x = w[0], y = w[1];
      back.push_back(y - x);
      w = {x, y - x, y};
      std::sort(w.begin(), w.end());
    }
    forward.assign(back.rbegin(), back.rend());
  }
  LayeredSolidTorus l = base_lst();
  for (long target : forward) {
    auto ws = l.weights();
    int e = -1;
    for (int i = 0; i < 3; ++i)
      if (std::labs(ws[i]) == target) e = i;
    if (e < 0) fail_invariant("realize: no boundary edge of weight " + std::to_string(target));
    l = layer(l, e);
  }
  return l;
}

int FillTrace::tetrahedra() const {
  int n = static_cast<int>(cap.layerings.size()) + 1;
  for (const auto& m : steps.moves) n += (m.kind == "layer" || m.kind == "cap3") ? 1 : 0;
  return n;
}

long dart_value(const SurfaceTriangulation& s, const std::vector<long>& cochain, Side d) {
  int e = s.edge_at(d.tri, d.side);
  return s.edge_darts(e)[0] == d ? cochain.at(e) : -cochain.at(e);
}

bool is_surface_cocycle(const SurfaceTriangulation& s, const std::vector<long>& cochain) {
  if (static_cast<int>(cochain.size()) != s.edge_count()) return false;
  for (int t = 0; t < s.triangle_count(); ++t) {
    long sum = 0;
    for (int k = 0; k < 3; ++k) sum += dart_value(s, cochain, {t, k});
    if (sum != 0) return false;
  }
  return true;
}

namespace {

// Breadth-first spanning tree of the vertices, as a flag per edge.
std::vector<bool> spanning_tree(const SurfaceTriangulation& s) {
  std::vector<bool> tree(s.edge_count(), false), seen(s.vertex_count(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : s.incident_edges(v)) {
      auto [x, y] = s.edge_ends(e);
      int u = x == v ? y : x;
      if (seen[u]) continue;
      seen[u] = true;
      tree[e] = true;
      q.push(u);
    }
  }
  return tree;
}

}  // namespace

std::array<int, 2> cocycle_generators(const SurfaceTriangulation& s) {
  require_torus(s);
  std::vector<bool> tree = spanning_tree(s), cotree(s.edge_count(), false);
  std::vector<bool> reached(s.triangle_count(), false);
  std::queue<int> tq;
  tq.push(0);
  reached[0] = true;
  while (!tq.empty()) {
    int t = tq.front();
    tq.pop();
    for (int k = 0; k < 3; ++k) {
      int e = s.edge_at(t, k);
      Side p = s.partner(t, k);
      if (tree[e] || reached[p.tri]) continue;
      reached[p.tri] = true;
      cotree[e] = true;
      tq.push(p.tri);
    }
  }
  std::vector<int> rest;
  for (int e = 0; e < s.edge_count(); ++e)
    if (!tree[e] && !cotree[e]) rest.push_back(e);
  if (rest.size() != 2) fail_invariant("cocycle generators: tree and cotree leave " + std::to_string(rest.size()) + " edges");
  return {rest[0], rest[1]};
}

std::vector<long> surface_cocycle(const SurfaceTriangulation& s, long a, long b) {
  auto gen = cocycle_generators(s);
  std::vector<std::optional<long>> known(s.edge_count());
  known[gen[0]] = a;
  known[gen[1]] = b;
  auto tree = spanning_tree(s);
  for (int e = 0; e < s.edge_count(); ++e)
    if (tree[e]) known[e] = 0;
  // Peel cotree leaves: a triangle with a single unknown edge fixes it.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < s.triangle_count(); ++t) {
      int count = 0, slot = -1;
      long sum = 0;
      for (int k = 0; k < 3; ++k) {
        int e = s.edge_at(t, k);
        long sign = s.edge_darts(e)[0] == Side{t, k} ? 1 : -1;
        if (known[e]) sum += sign * *known[e];
        else ++count, slot = k;
      }
      if (count != 1) continue;
      int e = s.edge_at(t, slot);
      if (s.edge_at(t, (slot + 1) % 3) == e || s.edge_at(t, (slot + 2) % 3) == e) continue;
      long sign = s.edge_darts(e)[0] == Side{t, slot} ? 1 : -1;
      known[e] = -sum * sign;
      changed = true;
    }
  }
  std::vector<long> out(s.edge_count());
  for (int e = 0; e < s.edge_count(); ++e) {
    if (!known[e]) fail_invariant("surface cocycle: an edge stayed undetermined");
    out[e] = *known[e];
  }
  if (!is_surface_cocycle(s, out)) fail_invariant("surface cocycle: face sums do not vanish");
  return out;
}

FillTrace fill_steps(const SurfaceTriangulation& delta) {
  require_torus(delta);
  FillTrace out;
  SurfaceTriangulation s = delta;
  for (const auto& m : simplify_torus(delta).moves) {
    const auto& p = m.params;
    if (m.kind == "s1") {
      out.steps.push("fold", p);
      s = apply_s1(s, p[0], p[1], p[2]);
    } else if (m.kind == "s2") {
      out.steps.push("layer", p);
      s = apply_s2(s, p[0]);
    } else if (m.kind == "s3") {
      out.steps.push("cap3", p);
      s = apply_s3(s, p[0]);
    } else if (m.kind == "s1p") {
      auto es = s.incident_edges(p[0]);
      out.steps.push("fold", {p[0], es[0], es[1]});
      const int F = s.triangle_count();
      s = apply_s1(s, p[0], es[0], es[1]);
      const int e = s.edge_at(F, 2);
      out.steps.push("layer", {e});
      s = apply_s2(s, e);
    } else {
      fail_invariant("fill: unexpected surface move " + m.kind);
    }
  }
  if (s.triangle_count() != 2) fail_invariant("fill: simplification did not reach two triangles");
  return out;
}

namespace {

enum class Kind { boundary, face, fold, used };

// What the outer side of a triangle of the current inner surface is attached to.
struct Attach {
  Kind kind = Kind::boundary;
  int id = 0;    // original triangle, tetrahedron, or folded partner
  int face = -1;
  std::array<int, 3> map{0, 1, 2};  // corner -> original corner, tet vertex, or partner corner
};

struct FillBuilder {
  const SurfaceTriangulation& delta;
  SurfaceTriangulation s;
  std::vector<long> w;  // cochain per dart of s
  std::vector<Attach> at;
  std::vector<std::array<FaceGluing, 4>> g;
  std::vector<std::array<int, 2>> face;
  std::vector<std::array<int, 3>> corners;

  FillBuilder(const SurfaceTriangulation& d, const std::vector<long>& meridian) : delta(d), s(d) {
    const int F = d.triangle_count();
    w.resize(3 * F);
    for (int t = 0; t < F; ++t)
      for (int k = 0; k < 3; ++k) w[3 * t + k] = dart_value(d, meridian, {t, k});
    at.resize(F);
    for (int t = 0; t < F; ++t) at[t] = {Kind::boundary, t, -1, {0, 1, 2}};
    face.assign(F, {-1, -1});
    corners.assign(F, {-1, -1, -1});
  }

  int new_tet() {
    g.emplace_back();
    return static_cast<int>(g.size()) - 1;
  }

  void glue(int t, int f, int t2, int f2, const Perm4& p) {
    if (g[t][f].glued() || g[t2][f2].glued() || (t == t2 && f == f2)) fail_invariant("fill: face glued twice");
    g[t][f] = {t2, f2, p};
    g[t2][f2] = {t, f, perm_inverse(p)};
  }

  // The inner side of triangle j becomes face f of tetrahedron t.
  void consume(int j, int t, int f, const std::array<int, 3>& cm) {
    Attach a = at.at(j);
    at[j].kind = Kind::used;
    switch (a.kind) {
      case Kind::boundary:
        face[a.id] = {t, f};
        for (int c = 0; c < 3; ++c) corners[a.id][a.map[c]] = cm[c];
        break;
      case Kind::face: {
        Perm4 p{};
        p[f] = a.face;
        for (int c = 0; c < 3; ++c) p[cm[c]] = a.map[c];
        glue(t, f, a.id, a.face, p);
        break;
      }
      case Kind::fold: {
        Attach& other = at.at(a.id);
        if (other.kind != Kind::fold || other.id != j) fail_invariant("fill: fold partner lost");
        Attach next{Kind::face, t, f, {}};
        for (int c = 0; c < 3; ++c) next.map[a.map[c]] = cm[c];
        other = next;
        break;
      }
      case Kind::used:
        fail_invariant("fill: triangle consumed twice");
    }
  }

  void fold(int v, int e1, int e2) {
    auto site = s1_site(s, v, e1, e2);
    const int F = s.triangle_count();
    const long x = w[3 * site.d1.tri + site.d1.side], y = w[3 * site.d2.tri + site.d2.side];
    s = apply_s1_at(s, site);
    w.insert(w.end(), {-x, y, x - y, -y, x, y - x});
    at.push_back({Kind::fold, F + 1, -1, {2, 1, 0}});
    at.push_back({Kind::fold, F, -1, {2, 1, 0}});
  }

  void layer(int e) {
    auto site = s2_site(s, e);
    const int t1 = site.d1.tri, s1 = site.d1.side, t2 = site.d2.tri, s2 = site.d2.side;
    auto dw = [&](int t, int k) { return w[3 * t + (k % 3)]; };
    const long ab = dw(t1, s1), bc = dw(t1, s1 + 1), ca = dw(t1, s1 + 2);
    const long ar = dw(t2, s2 + 1), rb = dw(t2, s2 + 2);
    (void)ab;
    const int T = new_tet();
    std::array<int, 3> m1{}, m2{};
    for (int k = 0; k < 3; ++k) m1[(s1 + k) % 3] = k;
    m2[s2] = 1;
    m2[(s2 + 1) % 3] = 0;
    m2[(s2 + 2) % 3] = 3;
    consume(t1, T, 3, m1);
    consume(t2, T, 2, m2);
    s = apply_s2(s, e);
    at[t1] = {Kind::face, T, 1, {2, 0, 3}};
    at[t2] = {Kind::face, T, 0, {3, 1, 2}};
    // New t1 = (c, a, r), new t2 = (r, b, c).
    w[3 * t1 + 0] = ca;
    w[3 * t1 + 1] = ar;
    w[3 * t1 + 2] = -(ca + ar);
    w[3 * t2 + 0] = rb;
    w[3 * t2 + 1] = bc;
    w[3 * t2 + 2] = ca + ar;
  }

  void cap3(int v) {
    auto site = s3_site(s, v);
    const int T = new_tet();
    std::array<long, 3> outer{};
    for (int k = 0; k < 3; ++k) {
      auto [t, c] = site.around[k];
      outer[k] = w[3 * t + (c + 1) % 3];
      std::array<int, 3> cm{};
      cm[c] = 0;
      cm[(c + 1) % 3] = k + 1;
      cm[(c + 2) % 3] = (k + 1) % 3 + 1;
      consume(t, T, (k + 2) % 3 + 1, cm);
    }
    s = apply_s3(s, v);
    const int N = site.new_index[site.around[0].tri];
    std::vector<Attach> nat(s.triangle_count());
    std::vector<long> nw(3 * s.triangle_count());
    for (int t = 0; t < static_cast<int>(site.new_index.size()); ++t) {
      int nt = site.new_index[t];
      if (nt < 0 || nt == N) continue;
      nat[nt] = at[t];
      if (nat[nt].kind == Kind::fold) {
        nat[nt].id = site.new_index[nat[nt].id];
        if (nat[nt].id < 0) fail_invariant("fill: fold partner removed");
      }
      for (int k = 0; k < 3; ++k) nw[3 * nt + k] = w[3 * t + k];
    }
    nat[N] = {Kind::face, T, 0, {1, 2, 3}};
    for (int k = 0; k < 3; ++k) nw[3 * N + k] = outer[k];
    at = std::move(nat);
    w = std::move(nw);
  }

  // Value of the current cochain from corner x to corner y of triangle j.
  long directed(int j, int x, int y) const { return (x + 1) % 3 == y ? w[3 * j + x] : -w[3 * j + y]; }

  void cap(const LayeredTrace& trace) {
    if (s.triangle_count() != 2) fail_invariant("fill: inner surface is not two triangles before the cap");
    const LayeredSolidTorus l = build_lst(trace);
    const auto& ls = l.boundary;
    // Search the triangle and corner matchings between the cap boundary and
    // the inner surface for one that carries the meridian onto the cochain.
    static const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
    for (int swap = 0; swap < 2; ++swap)
      for (const auto& pa : perms)
        for (const auto& pb : perms) {
          const std::array<int, 2> tri{swap, 1 - swap};
          const std::array<std::array<int, 3>, 2> cor{pa, pb};
          auto image = [&](Side c) { return Side{tri[c.tri], cor[c.tri][c.side]}; };
          bool ok = true;
          int sigma = 0;
          for (int i = 0; i < 2 && ok; ++i)
            for (int k = 0; k < 3 && ok; ++k) {
              Side P = image({i, k}), Q = image({i, (k + 1) % 3});
              Side lp = ls.surface.partner(i, k);
              Side P2 = image({lp.tri, (lp.side + 1) % 3}), Q2 = image({lp.tri, lp.side});
              int r = (P.side + 1) % 3 == Q.side ? P.side : Q.side;
              Side dp = s.partner(P.tri, r);
              // Corners of the inner surface identified across side r.
              auto across = [&](Side c) { return c.side == r ? Side{dp.tri, (dp.side + 1) % 3} : Side{dp.tri, dp.side}; };
              if (!(across(P) == P2) || !(across(Q) == Q2)) {
                ok = false;
                break;
              }
              long mine = directed(P.tri, P.side, Q.side);
              auto [lt, lf] = ls.face[i];
              (void)lf;
              long theirs = along(l.complex, l.meridian, lt, ls.corners[i][k], ls.corners[i][(k + 1) % 3]);
              if (theirs == 0 && mine == 0) continue;
              if (sigma == 0 && (mine == theirs || mine == -theirs)) sigma = mine == theirs ? 1 : -1;
              if (mine != sigma * theirs) ok = false;
            }
          if (!ok) continue;
          const int offset = static_cast<int>(g.size());
          for (const auto& tet : l.complex.gluings()) {
            auto copy = tet;
            for (auto& x : copy)
              if (x.glued()) x.tet += offset;
            g.push_back(copy);
          }
          for (int i = 0; i < 2; ++i) {
            std::array<int, 3> cm{};
            for (int k = 0; k < 3; ++k) cm[cor[i][k]] = ls.corners[i][k];
            consume(tri[i], offset + ls.face[i][0], ls.face[i][1], cm);
          }
          return;
        }
    fail_pre("fill: the cap does not realize the meridian on the final torus");
  }

  std::array<long, 3> inner_weights() const {
    std::array<long, 3> out{};
    for (int e = 0; e < 3; ++e) {
      Side d = s.edge_darts(e)[0];
      out[e] = w[3 * d.tri + d.side];
    }
    return out;
  }
};

void run_steps(FillBuilder& b, const MoveTrace& steps) {
  for (const auto& m : steps.moves) {
    const auto& p = m.params;
    auto need = [&](size_t n) { require(p.size() == n, "fill step " + m.kind + ": wrong parameter count"); };
    if (m.kind == "fold") need(3), b.fold(p[0], p[1], p[2]);
    else if (m.kind == "layer") need(1), b.layer(p[0]);
    else if (m.kind == "cap3") need(1), b.cap3(p[0]);
    else fail_pre("unknown fill step '" + m.kind + "'");
  }
}

FilledSolidTorus finish_fill(FillBuilder& b, const std::vector<long>& meridian, const FillTrace& trace) {
  for (const auto& a : b.at)
    if (a.kind != Kind::used) fail_invariant("fill: a triangle was left unattached");
  FilledSolidTorus out;
  out.trace = trace;
  out.complex = IdealTriangulation(std::move(b.g));
  out.face = std::move(b.face);
  out.corners = std::move(b.corners);
  const auto& tri = out.complex;
  std::vector<std::optional<long>> known(tri.edge_count());
  for (int o = 0; o < b.delta.triangle_count(); ++o)
    for (int k = 0; k < 3; ++k) {
      const int t = out.face[o][0], x = out.corners[o][k], y = out.corners[o][(k + 1) % 3];
      const long v = tri.edge_sign(t, x, y) * dart_value(b.delta, meridian, {o, k});
      auto& slot = known[tri.edge_class(t, x, y)];
      if (slot && *slot != v) fail_invariant("fill: boundary edges carry conflicting meridian values");
      slot = v;
    }
  auto m = extend_cocycle(tri, std::move(known));
  if (!m) fail_invariant("fill: meridian does not extend over the filling");
  out.meridian = std::move(*m);
  verify_fill(b.delta, meridian, out);
  return out;
}

void check_meridian_input(const SurfaceTriangulation& delta, const std::vector<long>& meridian) {
  require_torus(delta);
  require(static_cast<int>(meridian.size()) == delta.edge_count(), "fill: meridian needs one value per edge");
  require(is_surface_cocycle(delta, meridian), "fill: meridian values do not sum to zero around every triangle");
}

}  // namespace

FilledSolidTorus assemble_fill(const SurfaceTriangulation& delta, const std::vector<long>& meridian, const FillTrace& trace) {
  check_meridian_input(delta, meridian);
  FillBuilder b(delta, meridian);
  run_steps(b, trace.steps);
  b.cap(trace.cap);
  return finish_fill(b, meridian, trace);
}

FilledSolidTorus fill_solid_torus(const SurfaceTriangulation& delta, const std::vector<long>& meridian) {
  check_meridian_input(delta, meridian);
  FillTrace trace = fill_steps(delta);
  FillBuilder b(delta, meridian);
  run_steps(b, trace.steps);
  auto w = b.inner_weights();
  require(std::gcd(w[0], w[1]) == 1, "fill: meridian class is not primitive");
  trace.cap = realize_weights(w).trace;
  b.cap(trace.cap);
  return finish_fill(b, meridian, trace);
}

void verify_fill(const SurfaceTriangulation& delta, const std::vector<long>& meridian, const FilledSolidTorus& fill) {
  const auto& tri = fill.complex;
  auto bad = [](const std::string& what) { fail_invariant("fill check: " + what); };
  if (!tri.edges_valid()) bad("an edge is reversed onto itself");
  if (!tri.orientation()) bad("complex is not orientable");
  if (tri.tet_count() != fill.trace.tetrahedra()) bad("tetrahedron count differs from the trace");
  const int F = delta.triangle_count();
  int unglued = 0;
  for (int t = 0; t < tri.tet_count(); ++t)
    for (int f = 0; f < 4; ++f) unglued += tri.gluing(t, f).glued() ? 0 : 1;
  if (unglued != F) bad("boundary face count differs from the surface");
  for (int o = 0; o < F; ++o) {
    auto [t, f] = fill.face[o];
    if (t < 0 || tri.gluing(t, f).glued()) bad("surface triangle is not a boundary face");
    std::array<int, 3> c = fill.corners[o];
    std::sort(c.begin(), c.end());
    if (c != face_corners(f)) bad("corner map is not onto the face");
  }
  // Gluings of the surface are the identifications of the complex.
  std::vector<int> vmap(delta.vertex_count(), -1), emap(delta.edge_count(), -1);
  for (int o = 0; o < F; ++o)
    for (int k = 0; k < 3; ++k) {
      const int t = fill.face[o][0], x = fill.corners[o][k], y = fill.corners[o][(k + 1) % 3];
      Side p = delta.partner(o, k);
      const int t2 = fill.face[p.tri][0], x2 = fill.corners[p.tri][(p.side + 1) % 3], y2 = fill.corners[p.tri][p.side];
      if (tri.edge_class(t, x, y) != tri.edge_class(t2, x2, y2) || tri.edge_sign(t, x, y) != tri.edge_sign(t2, x2, y2))
        bad("surface gluing does not match the complex");
      int& vm = vmap[delta.vertex_at(o, k)];
      if (vm >= 0 && vm != tri.vertex_class(t, x)) bad("surface vertex split in the complex");
      vm = tri.vertex_class(t, x);
      int& em = emap[delta.edge_at(o, k)];
      if (em >= 0 && em != tri.edge_class(t, x, y)) bad("surface edge split in the complex");
      em = tri.edge_class(t, x, y);
    }
  std::vector<int> sv(vmap), se(emap);
  std::sort(sv.begin(), sv.end());
  std::sort(se.begin(), se.end());
  if (std::adjacent_find(sv.begin(), sv.end()) != sv.end()) bad("two surface vertices meet in the complex");
  if (std::adjacent_find(se.begin(), se.end()) != se.end()) bad("two surface edges meet in the complex");
  if (tri.vertex_count() != delta.vertex_count()) bad("complex has vertices off the boundary");
  for (const auto& l : vertex_links(tri))
    if (l.euler != 1 || l.boundary_circles != 1) bad("a vertex link is not a disc");
  if (tri.vertex_count() - tri.edge_count() + tri.face_count() - tri.tet_count() != 0) bad("Euler characteristic is not 0");
  if (!is_cocycle(tri, fill.meridian)) bad("meridian is not a cocycle");
  for (int o = 0; o < F; ++o)
    for (int k = 0; k < 3; ++k) {
      const int t = fill.face[o][0], x = fill.corners[o][k], y = fill.corners[o][(k + 1) % 3];
      if (along(tri, fill.meridian, t, x, y) != dart_value(delta, meridian, {o, k})) bad("meridian does not restrict to the target");
    }
}

FillTrace parse_fill_trace(std::string_view input) {
  FillTrace out;
  bool capped = false;
  for (const auto& l : text::tokenize(input)) {
    const std::string where = "fill trace line " + std::to_string(l.number) + ": ";
    if (capped) fail_parse(where + "nothing may follow the lst line");
    const auto& k = l.tokens[0];
    std::vector<int> params;
    for (size_t i = 1; i < l.tokens.size(); ++i) params.push_back(text::to_int(l.tokens[i], l));
    if (k == "lst") {
      if (params.empty() || params[0] != static_cast<int>(params.size()) - 1)
        fail_parse(where + "expected 'lst k e1 .. ek'");
      out.cap.layerings.assign(params.begin() + 1, params.end());
      capped = true;
    } else if ((k == "fold" && params.size() == 3) || ((k == "layer" || k == "cap3") && params.size() == 1)) {
      out.steps.push(k, params);
    } else {
      fail_parse(where + "expected fold, layer, cap3 or lst");
    }
  }
  if (!capped) fail_parse("fill trace: missing final lst line");
  return out;
}

std::string format_fill_trace(const FillTrace& trace) {
  std::ostringstream out;
  out << format_trace(trace.steps);
  out << "lst " << trace.cap.layerings.size();
  for (int e : trace.cap.layerings) out << " " << e;
  out << "\n";
  return out.str();
}

}  // namespace momkit
