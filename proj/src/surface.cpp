#include "momkit/surface.hpp"

#include <algorithm>
#include <boost/pending/disjoint_sets.hpp>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <sstream>

#include "momkit/error.hpp"
#include "momkit/text.hpp"

namespace momkit {

namespace {

int idx(const Side& d) { return 3 * d.tri + d.side; }
Side at(int i) { return {i / 3, i % 3}; }
int nx(int s) { return (s + 1) % 3; }
int pv(int s) { return (s + 2) % 3; }

}  // namespace

SurfaceTriangulation::SurfaceTriangulation(std::vector<Side> partner) : partner_(std::move(partner)) {
  const int n = static_cast<int>(partner_.size());
  require(n > 0 && n % 3 == 0, "surface: side table must describe at least one triangle");
  const int F = n / 3;
  for (int i = 0; i < n; ++i) {
    const Side& p = partner_[i];
    require(p.tri >= 0 && p.tri < F && p.side >= 0 && p.side < 3, "surface: side glued out of range");
    require(idx(p) != i, "surface: side glued to itself");
    require(partner_[idx(p)] == at(i), "surface: gluing is not an involution");
  }
  boost::disjoint_sets_with_storage<> corners(n);
  boost::disjoint_sets_with_storage<> tris(F);
  for (int i = 0; i < n; ++i) corners.make_set(i);
  for (int t = 0; t < F; ++t) tris.make_set(t);
  for (int i = 0; i < n; ++i) {
    Side d = at(i), p = partner_[i];
    corners.union_set(3 * d.tri + d.side, 3 * p.tri + nx(p.side));
    corners.union_set(3 * d.tri + nx(d.side), 3 * p.tri + p.side);
    tris.union_set(d.tri, p.tri);
  }
  corner_vertex_.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = static_cast<int>(corners.find_set(i));
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<int>(vertex_corners_.size());
      vertex_corners_.emplace_back();
    }
    corner_vertex_[i] = id_of_root[r];
    vertex_corners_[id_of_root[r]].push_back(at(i));
  }
  dart_edge_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (dart_edge_[i] >= 0) continue;
    int j = idx(partner_[i]);
    dart_edge_[i] = dart_edge_[j] = static_cast<int>(edge_darts_.size());
    edge_darts_.push_back({at(i), at(j)});
  }
  for (int t = 0; t < F; ++t)
    if (tris.find_set(t) != tris.find_set(0)) connected_ = false;
}

std::array<int, 2> SurfaceTriangulation::edge_ends(int e) const {
  Side d = edge_darts(e)[0];
  return {vertex_at(d.tri, d.side), vertex_at(d.tri, nx(d.side))};
}

bool SurfaceTriangulation::is_loop(int e) const {
  auto ends = edge_ends(e);
  return ends[0] == ends[1];
}

std::vector<int> SurfaceTriangulation::incident_edges(int v) const {
  std::vector<int> out;
  for (const Side& c : corners(v)) out.push_back(edge_at(c.tri, c.side));
  return out;
}

bool SurfaceTriangulation::has_loop(int v) const {
  for (int e : incident_edges(v))
    if (is_loop(e)) return true;
  return false;
}

std::vector<int> SurfaceTriangulation::canonical_code() const {
  const int F = triangle_count();
  std::vector<int> best;
  for (int start = 0; start < 3 * F; ++start) {
    std::vector<int> label(F, -1), rot(F, 0), order;
    std::vector<int> code;
    label[start / 3] = 0;
    rot[start / 3] = start % 3;
    order.push_back(start / 3);
    for (size_t k = 0; k < order.size(); ++k) {
      int t = order[k];
      for (int i = 0; i < 3; ++i) {
        Side p = partner(t, (rot[t] + i) % 3);
        if (label[p.tri] < 0) {
          label[p.tri] = static_cast<int>(order.size());
          rot[p.tri] = p.side;
          order.push_back(p.tri);
        }
        code.push_back(3 * label[p.tri] + (p.side - rot[p.tri] + 3) % 3);
      }
    }
    if (best.empty() || code < best) best = code;
  }
  return best;
}

SurfaceTriangulation two_triangle_torus() {
  return SurfaceTriangulation({{1, 0}, {1, 1}, {1, 2}, {0, 0}, {0, 1}, {0, 2}});
}

namespace {

void glue(std::vector<Side>& p, Side a, Side b) {
  p[idx(a)] = b;
  p[idx(b)] = a;
}

// Outgoing dart following d counterclockwise around its tail vertex.
Side next_around(const SurfaceTriangulation& s, Side d) { return s.partner(d.tri, pv(d.side)); }

}  // namespace

S1Site s1_site(const SurfaceTriangulation& s, int v, int e1, int e2) {
  require(v >= 0 && v < s.vertex_count(), "s1: vertex out of range");
  require(e1 >= 0 && e1 < s.edge_count() && e2 >= 0 && e2 < s.edge_count(), "s1: edge out of range");
  require(e1 != e2, "s1: the two edges must be distinct");
  auto leaving = [&](int e) {
    for (const Side& d : s.edge_darts(e))
      if (s.vertex_at(d.tri, d.side) == v) return d;
    fail_pre("s1: edge " + std::to_string(e) + " is not incident to vertex " + std::to_string(v));
  };
  return {leaving(e1), leaving(e2)};
}

SurfaceTriangulation apply_s1_at(const SurfaceTriangulation& s, const S1Site& site) {
  const int F = s.triangle_count();
  Side p1 = s.partner(site.d1.tri, site.d1.side), p2 = s.partner(site.d2.tri, site.d2.side);
  std::vector<Side> p = s.partners();
  p.resize(3 * F + 6);
  Side A0{F, 0}, A1{F, 1}, A2{F, 2}, B0{F + 1, 0}, B1{F + 1, 1}, B2{F + 1, 2};
  glue(p, A0, site.d1);
  glue(p, A1, p2);
  glue(p, A2, B2);
  glue(p, B0, site.d2);
  glue(p, B1, p1);
  SurfaceTriangulation out(std::move(p));
  if (out.euler() != s.euler() || out.vertex_count() != s.vertex_count() + 1)
    fail_invariant("s1: cut did not split the vertex");
  return out;
}

SurfaceTriangulation apply_s1(const SurfaceTriangulation& s, int v, int e1, int e2) {
  return apply_s1_at(s, s1_site(s, v, e1, e2));
}

S2Site s2_site(const SurfaceTriangulation& s, int e) {
  require(e >= 0 && e < s.edge_count(), "s2: edge out of range");
  auto d = s.edge_darts(e);
  require(d[0].tri != d[1].tri, "s2: both sides of edge " + std::to_string(e) + " lie on one triangle");
  return {d[0], d[1]};
}

SurfaceTriangulation apply_s2(const SurfaceTriangulation& s, int e) {
  auto site = s2_site(s, e);
  const int t1 = site.d1.tri, s1 = site.d1.side, t2 = site.d2.tri, s2 = site.d2.side;
  // Outer sides and where they land.
  const std::array<Side, 4> from{Side{t1, pv(s1)}, Side{t2, nx(s2)}, Side{t2, pv(s2)}, Side{t1, nx(s1)}};
  const std::array<Side, 4> to{Side{t1, 0}, Side{t1, 1}, Side{t2, 0}, Side{t2, 1}};
  auto image = [&](Side d) {
    for (int i = 0; i < 4; ++i)
      if (from[i] == d) return to[i];
    return d;
  };
  std::vector<Side> p = s.partners();
  for (int i = 0; i < static_cast<int>(p.size()); ++i) p[i] = image(p[i]);
  std::array<Side, 4> outer;
  for (int i = 0; i < 4; ++i) outer[i] = image(s.partner(from[i].tri, from[i].side));
  for (int i = 0; i < 4; ++i) p[idx(to[i])] = outer[i];
  glue(p, {t1, 2}, {t2, 2});
  SurfaceTriangulation out(std::move(p));
  if (out.vertex_count() != s.vertex_count() || out.euler() != s.euler()) fail_invariant("s2: census changed");
  return out;
}

S3Site s3_site(const SurfaceTriangulation& s, int v) {
  require(v >= 0 && v < s.vertex_count(), "s3: vertex out of range");
  require(s.valence(v) == 3, "s3: vertex " + std::to_string(v) + " does not have valence 3");
  S3Site site;
  Side c = s.corners(v).front();
  for (int i = 0; i < 3; ++i) {
    site.around[i] = c;
    c = next_around(s, c);
  }
  require(c == site.around[0], "s3: corners at vertex do not close up");
  const auto& a = site.around;
  require(a[0].tri != a[1].tri && a[1].tri != a[2].tri && a[0].tri != a[2].tri,
          "s3: vertex " + std::to_string(v) + " is not incident to three distinct triangles");
  int x = s.edge_at(a[0].tri, a[0].side), y = s.edge_at(a[1].tri, a[1].side), z = s.edge_at(a[2].tri, a[2].side);
  require(x != y && y != z && x != z, "s3: vertex " + std::to_string(v) + " is not incident to three distinct edges");
  site.new_index.assign(s.triangle_count(), 0);
  int next = 0;
  for (int t = 0; t < s.triangle_count(); ++t)
    site.new_index[t] = (t == a[1].tri || t == a[2].tri) ? -1 : next++;
  return site;
}

SurfaceTriangulation apply_s3(const SurfaceTriangulation& s, int v) {
  auto site = s3_site(s, v);
  const int N = site.new_index[site.around[0].tri];
  std::array<Side, 3> outer;
  for (int i = 0; i < 3; ++i) outer[i] = {site.around[i].tri, nx(site.around[i].side)};
  auto image = [&](Side d) {
    for (int i = 0; i < 3; ++i)
      if (outer[i] == d) return Side{N, i};
    int t = site.new_index[d.tri];
    if (t < 0) fail_invariant("s3: outer side glued into the removed fan");
    return Side{t, d.side};
  };
  std::vector<Side> p(3 * (s.triangle_count() - 2));
  for (int t = 0; t < s.triangle_count(); ++t) {
    int nt = site.new_index[t];
    if (nt < 0 || t == site.around[0].tri) continue;
    for (int k = 0; k < 3; ++k) p[3 * nt + k] = image(s.partner(t, k));
  }
  for (int i = 0; i < 3; ++i) p[3 * N + i] = image(s.partner(outer[i].tri, outer[i].side));
  SurfaceTriangulation out(std::move(p));
  if (out.vertex_count() != s.vertex_count() - 1 || out.euler() != s.euler()) fail_invariant("s3: census changed");
  return out;
}

SurfaceTriangulation apply_s1prime(const SurfaceTriangulation& s, int v) {
  require(v >= 0 && v < s.vertex_count(), "s1p: vertex out of range");
  require(s.valence(v) == 2, "s1p: vertex " + std::to_string(v) + " does not have valence 2");
  auto es = s.incident_edges(v);
  require(es[0] != es[1], "s1p: vertex carries a loop");
  auto cut = apply_s1(s, v, es[0], es[1]);
  return apply_s2(cut, cut.edge_at(s.triangle_count(), 2));
}

SurfaceTriangulation split_triangle(const SurfaceTriangulation& s, int t) {
  const int F = s.triangle_count();
  require(t >= 0 && t < F, "split: triangle out of range");
  const std::array<Side, 3> to{Side{t, 0}, Side{F, 0}, Side{F + 1, 0}};
  auto image = [&](Side d) { return d.tri == t ? to[d.side] : d; };
  std::vector<Side> p = s.partners();
  p.resize(3 * F + 6);
  for (int i = 0; i < 3 * F; ++i) p[i] = image(p[i]);
  for (int k = 0; k < 3; ++k) p[idx(to[k])] = image(s.partner(t, k));
  glue(p, {t, 1}, {F, 2});
  glue(p, {F, 1}, {F + 1, 2});
  glue(p, {F + 1, 1}, {t, 2});
  return SurfaceTriangulation(std::move(p));
}

SurfaceTriangulation apply_surface_move(const SurfaceTriangulation& s, const Move& m) {
  auto need = [&](size_t n) { require(m.params.size() == n, "move " + m.kind + ": wrong parameter count"); };
  const auto& p = m.params;
  if (m.kind == "s1") return need(3), apply_s1(s, p[0], p[1], p[2]);
  if (m.kind == "s2") return need(1), apply_s2(s, p[0]);
  if (m.kind == "s3") return need(1), apply_s3(s, p[0]);
  if (m.kind == "s1p") return need(1), apply_s1prime(s, p[0]);
  fail_pre("unknown surface move '" + m.kind + "'");
}

SurfaceTriangulation replay(const SurfaceTriangulation& s, const MoveTrace& trace) {
  SurfaceTriangulation cur = s;
  for (const auto& m : trace.moves) cur = apply_surface_move(cur, m);
  return cur;
}

void require_torus(const SurfaceTriangulation& s) {
  require(s.is_connected(), "surface is not connected");
  require(s.euler() == 0, "surface is not a torus (Euler characteristic " + std::to_string(s.euler()) + ")");
}

namespace {

bool is_ladder(const SurfaceTriangulation& s) {
  for (int v = 0; v < s.vertex_count(); ++v)
    if (!s.has_loop(v)) return false;
  return true;
}

int loop_count(const SurfaceTriangulation& s) {
  int n = 0;
  for (int e = 0; e < s.edge_count(); ++e) n += s.is_loop(e) ? 1 : 0;
  return n;
}

int min_valence(const SurfaceTriangulation& s) {
  int m = 1 << 30;
  for (int v = 0; v < s.vertex_count(); ++v) m = std::min(m, s.valence(v));
  return m;
}

// Where an outgoing dart ends up after s2; the flipped diagonal has no image.
Side s2_image(const S2Site& site, Side d) {
  const int t1 = site.d1.tri, s1 = site.d1.side, t2 = site.d2.tri, s2 = site.d2.side;
  if (d == Side{t1, pv(s1)}) return {t1, 0};
  if (d == Side{t2, nx(s2)}) return {t1, 1};
  if (d == Side{t2, pv(s2)}) return {t2, 0};
  if (d == Side{t1, nx(s1)}) return {t2, 1};
  if (d == site.d1 || d == site.d2) fail_invariant("tracked dart was flipped");
  return d;
}

std::vector<int> neighbours(const SurfaceTriangulation& s, int v) {
  std::vector<int> out;
  for (const Side& c : s.corners(v)) out.push_back(s.vertex_at(c.tri, nx(c.side)));
  return out;
}

struct Simplifier {
  SurfaceTriangulation cur;
  SimplifyReport report;

  void apply(Move m) {
    cur = apply_surface_move(cur, m);
    report.trace.moves.push_back(std::move(m));
  }

  // s2 at the edge of dart d, carrying `track` along.
  void flip(Side d, Side& track) {
    int e = cur.edge_at(d.tri, d.side);
    auto site = s2_site(cur, e);
    apply({"s2", {e}});
    track = s2_image(site, track);
  }

  void step(const std::string& label, const std::function<void()>& body) {
    SimplifyStep st{label, static_cast<int>(report.trace.size()), simplify_measure(cur), {}};
    body();
    st.after = simplify_measure(cur);
    report.steps.push_back(st);
  }

  void case1(int v) {
    Side c = cur.corners(v).front();
    Side opposite{c.tri, nx(c.side)};
    Side track = c;
    flip(opposite, track);
    int w = cur.vertex_at(track.tri, track.side);
    if (cur.valence(w) != 2) fail_invariant("valence-1 removal: vertex did not reach valence 2");
    apply({"s1p", {w}});
  }

  bool guard_ok(const SurfaceTriangulation& s) { return s.vertex_count() == 1 || min_valence(s) >= 3; }

  void case31a(int v) {
    apply({"s3", {v}});
    if (!guard_ok(cur)) fail_invariant("case 3.1.a: a valence dropped below 3");
  }

  // The side of v1's triangle away from v that case 3.1.b flips, provided
  // its ends satisfy the valence bound of that case.
  std::optional<Side> case31b_side(int v, int v1) const {
    for (const Side& c : cur.corners(v1)) {
      int a = cur.vertex_at(c.tri, nx(c.side)), b = cur.vertex_at(c.tri, pv(c.side));
      if (a == v || b == v) continue;
      Side opposite{c.tri, nx(c.side)};
      int v2 = cur.vertex_at(opposite.tri, opposite.side), v3 = cur.vertex_at(opposite.tri, nx(opposite.side));
      bool bound = v2 == v3 ? cur.valence(v2) >= 6 : cur.valence(v2) >= 5 && cur.valence(v3) >= 5;
      if (bound) return opposite;
      return std::nullopt;
    }
    return std::nullopt;
  }

  void case31b(int v, Side opposite) {
    Side track = cur.corners(v).front();
    flip(opposite, track);
    int w = cur.vertex_at(track.tri, track.side);
    if (cur.valence(w) != 3) fail_invariant("case 3.1.b: v lost valence 3");
    apply({"s3", {w}});
    if (!guard_ok(cur)) fail_invariant("case 3.1.b: a valence dropped below 3");
  }

  // Removes one vertex through case 3.1.a or a bounded case 3.1.b site when
  // either exists. Returns false and leaves cur untouched otherwise.
  bool remove_valence3() {
    const int V = cur.vertex_count();
    for (int v = 0; v < V; ++v) {
      if (cur.valence(v) != 3) continue;
      bool high = true;
      for (int n : neighbours(cur, v)) high = high && cur.valence(n) >= 4;
      if (!high) continue;
      Simplifier trial{cur, {}};
      trial.apply({"s3", {v}});
      if (!guard_ok(trial.cur)) continue;
      cur = trial.cur;
      report.trace.append(trial.report.trace);
      return true;
    }
    for (int v = 0; v < V; ++v) {
      if (cur.valence(v) != 3) continue;
      for (int n : neighbours(cur, v)) {
        if (cur.valence(n) != 3) continue;
        if (auto side = case31b_side(v, n)) {
          case31b(v, *side);
          return true;
        }
      }
    }
    return false;
  }

  // No adjacent valence-3 pair meets the bound. Flip one edge so that a
  // removable valence-3 configuration appears, keeping all valences >= 3.
  void case31b_fallback() {
    ++report.bound_violations;
    for (int e = 0; e < cur.edge_count(); ++e) {
      auto d = cur.edge_darts(e);
      if (d[0].tri == d[1].tri) continue;
      Simplifier trial{cur, {}};
      trial.apply({"s2", {e}});
      if (min_valence(trial.cur) < 3) continue;
      if (!trial.remove_valence3()) continue;
      cur = trial.cur;
      report.trace.append(trial.report.trace);
      return;
    }
    fail_invariant("case 3.1.b: valence bound fails and no single flip makes a vertex removable");
  }

  // Flip the edges after `start` around its tail until the tail has valence 3,
  // then remove the tail by s3. Returns false when a move is illegal or the
  // guard fails; cur is left untouched in that case.
  bool fan_removal(Side start) {
    Simplifier trial{cur, {}};
    try {
      int v = trial.cur.vertex_at(start.tri, start.side);
      Side hv = start;
      while (trial.cur.valence(v) > 3) {
        trial.flip(next_around(trial.cur, hv), hv);
        v = trial.cur.vertex_at(hv.tri, hv.side);
      }
      trial.apply({"s3", {v}});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
      return false;
    }
    if (!guard_ok(trial.cur)) return false;
    cur = trial.cur;
    report.trace.append(trial.report.trace);
    return true;
  }

  void case32a(int v) {
    for (const Side& c : cur.corners(v))
      if (fan_removal(c)) return;
    fail_invariant("case 3.2.a: no starting edge keeps all valences at least 3");
  }

  void case32b() {
    for (int v = 0; v < cur.vertex_count(); ++v)
      if (cur.valence(v) != 6) fail_invariant("case 3.2.b: vertex of valence other than 6 in the loop ladder");
    if (loop_count(cur) != cur.vertex_count()) fail_invariant("case 3.2.b: loop count differs from vertex count");
    const int v = 0;
    int loop = -1;
    for (int e : cur.incident_edges(v))
      if (cur.is_loop(e)) loop = e;
    Side track{-1, -1};
    for (const Side& c : cur.corners(v))
      if (!cur.is_loop(cur.edge_at(c.tri, c.side))) track = c;
    auto site = s2_site(cur, loop);
    apply({"s2", {loop}});
    track = s2_image(site, track);
    // v has valence 4 and no loop now; remove it by one more flip and s3.
    Side c = track;
    for (int i = 0; i < 4; ++i, c = next_around(cur, c))
      if (fan_removal(c)) return;
    fail_invariant("case 3.2.b: no flip makes the ladder vertex removable");
  }

  void run() {
    require_torus(cur);
    int guard = 1000 + 50 * cur.triangle_count();
    while (true) {
      if (--guard < 0) fail_invariant("simplify_torus did not terminate");
      const int V = cur.vertex_count();
      int v1 = -1, v2 = -1;
      for (int v = 0; v < V; ++v) {
        if (cur.valence(v) == 1 && v1 < 0) v1 = v;
        if (cur.valence(v) == 2 && v2 < 0) v2 = v;
      }
      if (v1 >= 0) {
        step("1", [&] { case1(v1); });
        const auto& st = report.steps.back();
        if (st.after.valence1 != st.before.valence1 - 1 || st.after.valence2 > st.before.valence2)
          fail_invariant("case 1: valence-1 removal created low-valence vertices");
        continue;
      }
      if (v2 >= 0) {
        step("2", [&] { apply({"s1p", {v2}}); });
        const auto& st = report.steps.back();
        if (st.after.valence1 != 0 || st.after.valence2 != st.before.valence2 - 1)
          fail_invariant("case 2: s1p did not remove exactly one valence-2 vertex");
        continue;
      }
      if (V == 1) break;
      int a = -1, b = -1;
      Side b_side{-1, -1};
      bool any3 = false;
      for (int v = 0; v < V; ++v) {
        if (cur.valence(v) != 3) continue;
        any3 = true;
        bool high = true;
        for (int n : neighbours(cur, v)) {
          if (cur.valence(n) >= 4) continue;
          high = false;
          if (b < 0)
            if (auto side = case31b_side(v, n)) {
              b = v;
              b_side = *side;
            }
        }
        if (high && a < 0) a = v;
      }
      std::string label;
      if (a >= 0) {
        label = "3.1.a";
        step(label, [&] { case31a(a); });
      } else if (b >= 0) {
        label = "3.1.b";
        step(label, [&] { case31b(b, b_side); });
      } else if (any3) {
        label = "3.1.b";
        step(label, [&] { case31b_fallback(); });
      } else {
        int best = -1;
        for (int v = 0; v < V; ++v)
          if (!cur.has_loop(v) && (best < 0 || cur.valence(v) < cur.valence(best))) best = v;
        if (best >= 0) {
          label = "3.2.a";
          step(label, [&] { case32a(best); });
        } else {
          label = "3.2.b";
          step(label, [&] { case32b(); });
          const auto& st = report.steps.back();
          if (st.after.vertices > 1 && st.after.loops != st.before.loops - 1)
            fail_invariant("case 3.2.b: ladder length did not drop by one");
        }
      }
      const auto& st = report.steps.back();
      if (st.after.vertices != st.before.vertices - 1) fail_invariant("case " + label + ": vertex count did not drop");
    }
    if (cur.triangle_count() != 2) fail_invariant("simplify_torus: one-vertex torus without two triangles");
  }
};

}  // namespace

SimplifyMeasure simplify_measure(const SurfaceTriangulation& s) {
  SimplifyMeasure m;
  m.vertices = s.vertex_count();
  for (int v = 0; v < s.vertex_count(); ++v) {
    m.valence1 += s.valence(v) == 1 ? 1 : 0;
    m.valence2 += s.valence(v) == 2 ? 1 : 0;
  }
  m.loops = is_ladder(s) ? loop_count(s) : 0;
  return m;
}

SimplifyReport simplify_torus_report(const SurfaceTriangulation& s) {
  Simplifier run{s, {}};
  run.run();
  return run.report;
}

MoveTrace simplify_torus(const SurfaceTriangulation& s) { return simplify_torus_report(s).trace; }

ThetaDescriptor theta_dual(const SurfaceTriangulation& s) {
  require(s.vertex_count() == 1 && s.triangle_count() == 2, "theta_dual: needs a one-vertex two-triangle torus");
  ThetaDescriptor d;
  for (int t = 0; t < 2; ++t)
    for (int k = 0; k < 3; ++k) d.around[t][k] = s.edge_at(t, k);
  return d;
}

SurfaceTriangulation random_torus(std::mt19937_64& rng, int moves, int max_triangles) {
  SurfaceTriangulation cur = two_triangle_torus();
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int i = 0; i < moves; ++i) {
    int kind = pick(3);
    bool grow = cur.triangle_count() + 2 <= max_triangles;
    if (kind == 0 && grow) {
      cur = split_triangle(cur, pick(cur.triangle_count()));
    } else if (kind == 1 && grow) {
      int v = pick(cur.vertex_count());
      auto es = cur.incident_edges(v);
      std::sort(es.begin(), es.end());
      es.erase(std::unique(es.begin(), es.end()), es.end());
      if (es.size() < 2) continue;
      int a = pick(static_cast<int>(es.size())), b = pick(static_cast<int>(es.size()) - 1);
      if (b >= a) ++b;
      cur = apply_s1(cur, v, es[a], es[b]);
    } else {
      std::vector<int> ok;
      for (int e = 0; e < cur.edge_count(); ++e)
        if (cur.edge_darts(e)[0].tri != cur.edge_darts(e)[1].tri) ok.push_back(e);
      if (!ok.empty()) cur = apply_s2(cur, ok[pick(static_cast<int>(ok.size()))]);
    }
  }
  return cur;
}

SurfaceTriangulation parse_surface(std::string_view input) {
  auto lines = text::tokenize(input);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "triangles")
    fail_parse("surface: first line must be 'triangles N'");
  const int F = text::to_int(lines[0].tokens[1], lines[0]);
  if (F <= 0) fail_parse("surface: triangle count must be positive");
  struct Glue {
    Side a, b;
    bool flip;
  };
  std::vector<Glue> glues;
  std::vector<int> used(3 * F, 0);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    bool flip = l.tokens.size() == 4 && l.tokens[3] == "flip";
    if (l.tokens[0] != "glue" || (l.tokens.size() != 3 && !flip))
      fail_parse("surface line " + std::to_string(l.number) + ": expected 'glue t1.s1 t2.s2 [flip]'");
    auto [t1, s1] = text::to_pair(l.tokens[1], l);
    auto [t2, s2] = text::to_pair(l.tokens[2], l);
    for (auto [t, s] : {std::pair{t1, s1}, std::pair{t2, s2}}) {
      if (t < 0 || t >= F || s < 0 || s > 2) fail_parse("surface line " + std::to_string(l.number) + ": side out of range");
      ++used[3 * t + s];
    }
    glues.push_back({{t1, s1}, {t2, s2}, flip});
  }
  for (int i = 0; i < 3 * F; ++i)
    if (used[i] != 1) fail_parse("surface: side " + std::to_string(i / 3) + "." + std::to_string(i % 3) + " must be glued exactly once");
  // Choose a reversal bit per triangle so every gluing reverses orientation.
  std::vector<std::vector<std::pair<int, bool>>> adj(F);
  for (const auto& g : glues) {
    adj[g.a.tri].push_back({g.b.tri, g.flip});
    adj[g.b.tri].push_back({g.a.tri, g.flip});
  }
  std::vector<int> rev(F, -1);
  for (int s = 0; s < F; ++s) {
    if (rev[s] >= 0) continue;
    rev[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (auto [u, flip] : adj[t]) {
        int want = rev[t] ^ (flip ? 1 : 0);
        if (rev[u] < 0) {
          rev[u] = want;
          q.push(u);
        } else if (rev[u] != want) {
          fail_parse("surface: gluings are not orientable");
        }
      }
    }
  }
  auto relabel = [&](Side d) { return rev[d.tri] ? Side{d.tri, 2 - d.side} : d; };
  std::vector<Side> p(3 * F);
  for (const auto& g : glues) {
    Side a = relabel(g.a), b = relabel(g.b);
    p[idx(a)] = b;
    p[idx(b)] = a;
  }
  try {
    return SurfaceTriangulation(std::move(p));
  } catch (const Error& e) {
    fail_parse(std::string("surface: ") + e.what());
  }
}

std::string format_surface(const SurfaceTriangulation& s) {
  std::ostringstream out;
  out << "triangles " << s.triangle_count() << "\n";
  for (int e = 0; e < s.edge_count(); ++e) {
    auto d = s.edge_darts(e);
    out << "glue " << d[0].tri << "." << d[0].side << " " << d[1].tri << "." << d[1].side << "\n";
  }
  return out.str();
}

}  // namespace momkit
