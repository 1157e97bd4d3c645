#include "momkit/protomom.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/pending/disjoint_sets.hpp>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "momkit/error.hpp"
#include "momkit/text.hpp"

namespace momkit {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using Dsu = boost::disjoint_sets_with_storage<>;

const std::vector<std::string> kGraphMoves{"m1", "m2", "m2prime", "m3", "m3bar"};

bool is_graph_move(const std::string& kind) {
  return kind == "m1" || kind == "m2" || kind == "m2tilde" || kind == "m2prime" || kind == "m3" || kind == "m3bar";
}

// +1 when leaving tetrahedron t through face f crosses its face class forwards.
int crossing(const IdealTriangulation& tri, int t, int f) {
  auto rep = tri.face_rep(tri.face_class(t, f));
  return rep[0] == t && rep[1] == f ? 1 : -1;
}

// Calls visit(t, f) for each face crossed while walking once around edge class c.
void walk_around(const IdealTriangulation& tri, int c, const std::function<void(int, int)>& visit) {
  const TetEdge& m = tri.edge(c).members.front();
  int from = -1, to = -1;
  for (int v = 0; v < 4; ++v)
    if (v != m.a && v != m.b) (to < 0 ? to : from) = v;
  int t = m.tet, a = m.a, b = m.b;
  const int from0 = from, to0 = to;
  for (int guard = 0; guard <= 6 * tri.tet_count(); ++guard) {
    visit(t, to);
    const auto& g = tri.gluing(t, to);
    int na = g.perm[a], nb = g.perm[b], nfrom = g.perm[to], nto = g.perm[from];
    t = g.tet;
    a = na;
    b = nb;
    from = nfrom;
    to = nto;
    if (t == m.tet && a == m.a && b == m.b && from == from0 && to == to0) return;
  }
  fail_invariant("edge walk did not close up");
}

bool closed_under_faces(const IdealTriangulation& tri, const std::vector<bool>& edges, const std::vector<bool>& faces) {
  for (int c = 0; c < tri.face_count(); ++c) {
    if (!faces[c]) continue;
    for (int e : tri.face_edges(c))
      if (!edges[e]) return false;
  }
  return true;
}

std::string bits(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

// Primitive integer generator of the kernel of rows (m columns); nullopt
// unless the kernel has rank one.
std::optional<std::vector<long>> primitive_kernel(const std::vector<std::vector<long>>& rows, int m) {
  std::vector<std::vector<Rational>> a;
  for (const auto& r : rows) a.emplace_back(r.begin(), r.end());
  std::vector<int> pivot_col;
  int r0 = 0;
  for (int c = 0; c < m && r0 < static_cast<int>(a.size()); ++c) {
    int p = -1;
    for (int i = r0; i < static_cast<int>(a.size()); ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r0], a[p]);
    Rational lead = a[r0][c];
    for (auto& x : a[r0]) x /= lead;
    for (int i = 0; i < static_cast<int>(a.size()); ++i) {
      if (i == r0 || a[i][c] == 0) continue;
      Rational k = a[i][c];
      for (int j = 0; j < m; ++j) a[i][j] -= k * a[r0][j];
    }
    pivot_col.push_back(c);
    ++r0;
  }
  if (m - static_cast<int>(pivot_col.size()) != 1) return std::nullopt;
  int free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<Rational> x(m, 0);
  x[free_col] = 1;
  for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) x[pivot_col[i]] = -a[i][free_col];
  boost::multiprecision::cpp_int den = 1;
  for (const auto& v : x) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(v));
  std::vector<boost::multiprecision::cpp_int> z;
  boost::multiprecision::cpp_int g = 0;
  for (const auto& v : x) {
    z.push_back(boost::multiprecision::numerator(v) * (den / boost::multiprecision::denominator(v)));
    g = boost::multiprecision::gcd(g, z.back());
  }
  std::vector<long> out;
  for (const auto& v : z) out.push_back(static_cast<long>(v / g));
  return out;
}

}  // namespace

ContextPtr make_context(IdealTriangulation tri) {
  auto r = validate(tri);
  if (!r.valid) {
    std::string why;
    for (const auto& p : r.problems) why += (why.empty() ? "" : "; ") + p;
    fail_pre("structure: triangulation is not valid: " + why);
  }
  auto ctx = std::make_shared<ProtoContext>();
  ctx->dual = dual_graph(tri);
  ctx->graph = std::make_shared<const Multigraph>(ctx->dual.graph);
  ctx->tri = std::move(tri);
  return ctx;
}

const char* lateral_name(LateralKind k) {
  switch (k) {
    case LateralKind::sphere: return "sphere";
    case LateralKind::torus: return "torus";
    default: return "other";
  }
}

InducedProtoMom::InducedProtoMom(ContextPtr ctx, std::vector<bool> kept_edges, std::vector<bool> kept_faces)
    : ctx_(std::move(ctx)), kept_edges_(std::move(kept_edges)), kept_faces_(std::move(kept_faces)) {
  const auto& tri = ctx_->tri;
  require(static_cast<int>(kept_edges_.size()) == tri.edge_count(), "structure: one flag per edge class expected");
  require(static_cast<int>(kept_faces_.size()) == tri.face_count(), "structure: one flag per face class expected");
  require(closed_under_faces(tri, kept_edges_, kept_faces_), "structure: a kept face runs over an unkept edge");
  valence_.assign(tri.edge_count(), 0);
  for (int c = 0; c < tri.face_count(); ++c)
    if (kept_faces_[c])
      for (int e : tri.face_edges(c)) ++valence_[e];

  const auto& dual = ctx_->dual;
  std::vector<bool> mask(dual.graph.edge_count());
  for (int ge = 0; ge < dual.graph.edge_count(); ++ge) mask[ge] = !kept_faces_[dual.face_class[ge]];
  Partition p = components(dual.graph, mask);
  lateral_.resize(p.count());
  lateral_of_tet_ = p.component_of;
  for (int i = 0; i < p.count(); ++i) {
    lateral_[i].tets = p.vertices[i];
    for (int ge : p.edges[i]) lateral_[i].faces.push_back(dual.face_class[ge]);
    std::sort(lateral_[i].faces.begin(), lateral_[i].faces.end());
  }
  for (int e = 0; e < tri.edge_count(); ++e)
    if (!kept_edges_[e]) lateral_[lateral_of_tet_[tri.edge(e).members.front().tet]].edges.push_back(e);
  for (auto& l : lateral_) {
    l.euler = 2 * (static_cast<int>(l.tets.size()) - static_cast<int>(l.faces.size()) + static_cast<int>(l.edges.size()));
    l.kind = l.euler == 2 ? LateralKind::sphere : l.euler == 0 ? LateralKind::torus : LateralKind::other;
  }
}

int InducedProtoMom::kept_edge_count() const { return static_cast<int>(std::count(kept_edges_.begin(), kept_edges_.end(), true)); }
int InducedProtoMom::kept_face_count() const { return static_cast<int>(std::count(kept_faces_.begin(), kept_faces_.end(), true)); }

bool InducedProtoMom::genuine() const {
  for (int e = 0; e < static_cast<int>(kept_edges_.size()); ++e)
    if (kept_edges_[e] && valence_[e] < 2) return false;
  return true;
}

int InducedProtoMom::torus_count() const {
  return static_cast<int>(std::count_if(lateral_.begin(), lateral_.end(), [](const auto& l) { return l.kind == LateralKind::torus; }));
}

bool InducedProtoMom::internal_valid() const { return torus_count() == static_cast<int>(lateral_.size()); }

std::string InducedProtoMom::key() const { return "e:" + bits(kept_edges_) + " f:" + bits(kept_faces_); }

InducedProtoMom full_footprint(const ContextPtr& ctx) {
  return {ctx, std::vector<bool>(ctx->tri.edge_count(), true), std::vector<bool>(ctx->tri.face_count(), true)};
}

RemovalResult greedy_removal(const InducedProtoMom& raw, RemovalStrategy strategy) {
  const auto& tri = raw.tri();
  std::mt19937_64 rng(strategy.seed);
  RemovalResult out{raw, {}};
  auto has_sphere = [](const InducedProtoMom& s) {
    for (const auto& l : s.lateral())
      if (l.kind == LateralKind::sphere) return true;
    return false;
  };
  while (has_sphere(out.structure)) {
    const auto& s = out.structure;
    std::vector<RemovalStep> options;
    for (int c = 0; c < tri.face_count(); ++c) {
      if (!s.face_kept(c)) continue;
      auto [t, f] = tri.face_rep(c);
      int a = s.lateral_of_tet(t), b = s.lateral_of_tet(tri.gluing(t, f).tet);
      LateralKind ka = s.lateral()[a].kind, kb = s.lateral()[b].kind;
      const bool sa = ka == LateralKind::sphere, sb = kb == LateralKind::sphere;
      const bool ta = ka == LateralKind::torus, tb = kb == LateralKind::torus;
      if (a != b && sa && sb) options.push_back({c, 'a'});
      else if (a != b && ((sa && tb) || (ta && sb))) options.push_back({c, 'b'});
      else if (a == b && sa) options.push_back({c, 'c'});
    }
    if (options.empty()) fail_invariant("removal: a spherical component has no removable face");
    RemovalStep pick = options.front();
    if (strategy.randomized) pick = options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
    auto faces = s.kept_faces();
    faces[pick.face] = false;
    out.structure = InducedProtoMom(s.context(), s.kept_edges(), faces);
    out.steps.push_back(pick);
  }
  if (!out.structure.internal_valid()) fail_invariant("removal: a lateral component is neither a sphere nor a torus");
  return out;
}

std::vector<Lake> lakes(const InducedProtoMom& s) {
  const auto& tri = s.tri();
  const int n = 4 * tri.tet_count();
  Dsu dsu(n);
  for (int i = 0; i < n; ++i) dsu.make_set(i);
  std::vector<int> arc_at;   // one triangle per gluing arc
  std::vector<int> ends_at;  // one triangle per free edge end
  for (int c = 0; c < tri.face_count(); ++c) {
    if (s.face_kept(c)) continue;
    auto [t, f] = tri.face_rep(c);
    const auto& g = tri.gluing(t, f);
    for (int v = 0; v < 4; ++v) {
      if (v == f) continue;
      dsu.union_set(4 * t + v, 4 * g.tet + g.perm[v]);
      arc_at.push_back(4 * t + v);
    }
  }
  for (int e = 0; e < tri.edge_count(); ++e) {
    if (s.edge_kept(e)) continue;
    const TetEdge& m = tri.edge(e).members.front();
    ends_at.push_back(4 * m.tet + m.a);
    ends_at.push_back(4 * m.tet + m.b);
  }
  std::map<int, int> index;
  std::vector<Lake> out;
  for (int i = 0; i < n; ++i) {
    int r = static_cast<int>(dsu.find_set(i));
    auto [it, fresh] = index.emplace(r, static_cast<int>(out.size()));
    if (fresh) out.push_back({{}, 0, s.lateral_of_tet(i / 4)});
    out[it->second].triangles.push_back({i / 4, i % 4});
    ++out[it->second].euler;
  }
  for (int x : arc_at) --out[index.at(static_cast<int>(dsu.find_set(x)))].euler;
  for (int x : ends_at) ++out[index.at(static_cast<int>(dsu.find_set(x)))].euler;
  return out;
}

bool is_full(const InducedProtoMom& s) {
  for (const auto& l : lakes(s))
    if (!l.disc()) return false;
  return true;
}

bool is_tau_maximal(const InducedProtoMom& s) {
  if (!s.internal_valid()) return false;
  const auto& tri = s.tri();
  std::vector<int> free_edges, free_faces;
  for (int e = 0; e < tri.edge_count(); ++e)
    if (!s.edge_kept(e)) free_edges.push_back(e);
  // With every edge kept, adding a face cuts a unicyclic component open.
  if (free_edges.empty()) return true;
  for (int c = 0; c < tri.face_count(); ++c)
    if (!s.face_kept(c)) free_faces.push_back(c);
  const int n = static_cast<int>(free_edges.size() + free_faces.size());
  require(n <= 24, "maximality: too many unkept simplices for the exhaustive check");
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    auto edges = s.kept_edges();
    auto faces = s.kept_faces();
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      if (i < static_cast<int>(free_edges.size())) edges[free_edges[i]] = true;
      else faces[free_faces[i - free_edges.size()]] = true;
    }
    if (!closed_under_faces(tri, edges, faces)) continue;
    if (InducedProtoMom(s.context(), edges, faces).internal_valid()) return false;
  }
  return true;
}

namespace {

void require_dual_side(const InducedProtoMom& s) {
  require(s.internal_valid(), "duality: structure has a non-toral lateral component");
  require(s.kept_edge_count() == s.tri().edge_count(), "duality: structure is not maximal (an edge is unkept)");
}

}  // namespace

MomColoring to_mom_coloring(const InducedProtoMom& s) {
  require_dual_side(s);
  const auto& dual = s.context()->dual;
  const int E = dual.graph.edge_count();
  std::vector<bool> mask(E);
  for (int ge = 0; ge < E; ++ge) mask[ge] = !s.face_kept(dual.face_class[ge]);
  std::vector<Color> colors(E, Color::c);
  for (int ge = 0; ge < E; ++ge)
    if (!mask[ge]) colors[ge] = Color::f;
  for (int ge : spanning_forest(dual.graph, mask)) colors[ge] = Color::t;
  MomColoring m(s.context()->graph, colors);
  if (m.kind() == MomKind::invalid) fail_invariant("duality: dual coloring is not a Mom-subgraph: " + m.problem());
  return m;
}

InducedProtoMom from_mom_coloring(const ContextPtr& ctx, const MomColoring& m) {
  require(m.graph() == *ctx->graph, "duality: coloring lives on another graph");
  require(m.kind() != MomKind::invalid, "duality: coloring is not a Mom-subgraph: " + m.problem());
  const auto& dual = ctx->dual;
  std::vector<bool> faces(ctx->tri.face_count(), false);
  for (int ge = 0; ge < dual.graph.edge_count(); ++ge) faces[dual.face_class[ge]] = m.color(ge) == Color::f;
  return {ctx, std::vector<bool>(ctx->tri.edge_count(), true), faces};
}

std::vector<MomColoring> dual_colorings(const InducedProtoMom& s) {
  require_dual_side(s);
  const auto& dual = s.context()->dual;
  const int E = dual.graph.edge_count();
  std::vector<std::vector<int>> choices;
  for (const auto& l : s.lateral()) {
    std::vector<int> ges;
    for (int c : l.faces) ges.push_back(dual.dual_edge[c]);
    std::vector<int> cycle;
    for (int x : ges) {
      std::vector<int> rest;
      for (int y : ges)
        if (y != x) rest.push_back(y);
      if (is_forest(dual.graph, rest)) cycle.push_back(x);
    }
    choices.push_back(cycle);
  }
  std::vector<MomColoring> out;
  std::vector<Color> base(E, Color::t);
  for (int ge = 0; ge < E; ++ge)
    if (s.face_kept(dual.face_class[ge])) base[ge] = Color::f;
  std::function<void(size_t, std::vector<Color>&)> rec = [&](size_t i, std::vector<Color>& cs) {
    if (i == choices.size()) {
      out.emplace_back(s.context()->graph, cs);
      if (out.back().kind() == MomKind::invalid) fail_invariant("duality: dual coloring is not a Mom-subgraph");
      return;
    }
    for (int x : choices[i]) {
      cs[x] = Color::c;
      rec(i + 1, cs);
      cs[x] = Color::t;
    }
  };
  rec(0, base);
  return out;
}

namespace {

std::vector<LateralKind> kinds_of(const InducedProtoMom& s) {
  std::vector<LateralKind> k;
  for (const auto& l : s.lateral()) k.push_back(l.kind);
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace

InducedProtoMom c_collapse(const InducedProtoMom& s, int e) {
  const auto& tri = s.tri();
  require(e >= 0 && e < tri.edge_count(), "collapse: edge out of range");
  require(s.edge_kept(e), "collapse: edge is not kept");
  require(s.valence(e) == 1, "collapse: edge has valence " + std::to_string(s.valence(e)) + ", not 1");
  auto edges = s.kept_edges();
  auto faces = s.kept_faces();
  for (int c = 0; c < tri.face_count(); ++c) {
    if (!faces[c]) continue;
    auto fe = tri.face_edges(c);
    if (std::count(fe.begin(), fe.end(), e)) faces[c] = false;
  }
  edges[e] = false;
  InducedProtoMom out(s.context(), edges, faces);
  if (kinds_of(out) != kinds_of(s)) fail_invariant("collapse: lateral components changed");
  return out;
}

InducedProtoMom c_expand(const InducedProtoMom& s, int e, int f) {
  const auto& tri = s.tri();
  require(e >= 0 && e < tri.edge_count() && f >= 0 && f < tri.face_count(), "expand: index out of range");
  require(!s.edge_kept(e), "expand: edge is already kept");
  require(!s.face_kept(f), "expand: face is already kept");
  auto fe = tri.face_edges(f);
  require(std::count(fe.begin(), fe.end(), e) == 1, "expand: face does not run exactly once over the edge");
  for (int x : fe) require(x == e || s.edge_kept(x), "expand: another side of the face is unkept");
  auto edges = s.kept_edges();
  auto faces = s.kept_faces();
  edges[e] = true;
  faces[f] = true;
  InducedProtoMom out(s.context(), edges, faces);
  if (kinds_of(out) != kinds_of(s)) fail_invariant("expand: lateral components changed");
  return out;
}

std::vector<int> c_collapses(const InducedProtoMom& s) {
  std::vector<int> out;
  for (int e = 0; e < s.tri().edge_count(); ++e)
    if (s.edge_kept(e) && s.valence(e) == 1) out.push_back(e);
  return out;
}

std::vector<std::array<int, 2>> c_expansions(const InducedProtoMom& s) {
  const auto& tri = s.tri();
  std::vector<std::array<int, 2>> out;
  for (int f = 0; f < tri.face_count(); ++f) {
    if (s.face_kept(f)) continue;
    auto fe = tri.face_edges(f);
    for (int e = 0; e < tri.edge_count(); ++e) {
      if (s.edge_kept(e) || std::count(fe.begin(), fe.end(), e) != 1) continue;
      bool rest = true;
      for (int x : fe) rest = rest && (x == e || s.edge_kept(x));
      if (rest) out.push_back({e, f});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

InducedProtoMom m_move(const InducedProtoMom& s, const Move& g) {
  require(is_graph_move(g.kind), "M-move: unknown graph move '" + g.kind + "'");
  return from_mom_coloring(s.context(), apply_move(to_mom_coloring(s), g));
}

std::vector<InducedProtoMom> m_neighbors(const InducedProtoMom& s) {
  std::map<std::string, InducedProtoMom> found;
  for (const auto& m : dual_colorings(s))
    for (auto& [mv, next] : admissible_moves(m, kGraphMoves)) {
      auto n = from_mom_coloring(s.context(), next);
      if (!(n == s)) found.emplace(n.key(), n);
    }
  std::vector<InducedProtoMom> out;
  for (auto& [k, v] : found) out.push_back(v);
  return out;
}

InducedProtoMom replay_structure(const InducedProtoMom& s, const MoveTrace& trace, std::vector<InducedProtoMom>* states) {
  InducedProtoMom cur = s;
  std::optional<MomColoring> coloring;
  if (states) states->push_back(cur);
  for (const auto& mv : trace.moves) {
    const auto& p = mv.params;
    if (mv.kind == "cexpand") {
      require(p.size() == 2, "cexpand takes an edge and a face");
      cur = c_expand(cur, p[0], p[1]);
      coloring.reset();
    } else if (mv.kind == "ccollapse") {
      require(p.size() == 1, "ccollapse takes an edge");
      cur = c_collapse(cur, p[0]);
      coloring.reset();
    } else if (is_graph_move(mv.kind)) {
      if (!coloring) coloring = to_mom_coloring(cur);
      coloring = apply_move(*coloring, mv);
      cur = from_mom_coloring(cur.context(), *coloring);
    } else {
      fail_pre("structure trace: unknown move '" + mv.kind + "'");
    }
    if (!cur.internal_valid()) fail_invariant("structure trace: " + format_move(mv) + " left a non-toral component");
    if (states) states->push_back(cur);
  }
  return cur;
}

MoveTrace expand_to_maximal(const InducedProtoMom& s) {
  require(s.internal_valid(), "expand: structure has a non-toral lateral component");
  MoveTrace trace;
  std::set<std::string> seen;
  std::function<bool(const InducedProtoMom&)> dfs = [&](const InducedProtoMom& cur) {
    if (cur.kept_edge_count() == cur.tri().edge_count()) return true;
    for (auto [e, f] : c_expansions(cur)) {
      auto next = c_expand(cur, e, f);
      if (!seen.insert(next.key()).second) continue;
      trace.push("cexpand", {e, f});
      if (dfs(next)) return true;
      trace.moves.pop_back();
    }
    return false;
  };
  if (!dfs(s)) fail_invariant("expand: no sequence of C-expansions keeps every edge");
  return trace;
}

MoveTrace relate(const InducedProtoMom& a, const InducedProtoMom& b) {
  require(a.context() == b.context(), "relate: structures live on different triangulations");
  require(a.internal_valid() && b.internal_valid(), "relate: a structure has a non-toral lateral component");
  // Maximal structures are related through their dual colorings alone.
  require((is_full(a) || is_tau_maximal(a)) && (is_full(b) || is_tau_maximal(b)), "relate: a structure is neither full nor maximal");
  MoveTrace out;
  if (a == b) return out;
  MoveTrace ta = expand_to_maximal(a), tb = expand_to_maximal(b);
  auto ma = replay_structure(a, ta), mb = replay_structure(b, tb);
  out.append(ta);
  out.append(relate_general(to_mom_coloring(ma), to_mom_coloring(mb)));
  for (auto it = tb.moves.rbegin(); it != tb.moves.rend(); ++it) out.push("ccollapse", {it->params[0]});
  if (!(replay_structure(a, out) == b)) fail_invariant("relate: trace does not end at the target");
  return out;
}

std::vector<InducedProtoMom> enumerate_internal(const ContextPtr& ctx) {
  const auto& tri = ctx->tri;
  const int E = tri.edge_count(), F = tri.face_count();
  require(E + F <= 24, "enumerate: too many simplices for exhaustive enumeration");
  std::vector<InducedProtoMom> out;
  for (std::uint32_t mask = 0; mask < (1u << (E + F)); ++mask) {
    std::vector<bool> edges(E), faces(F);
    for (int i = 0; i < E; ++i) edges[i] = mask >> i & 1;
    for (int i = 0; i < F; ++i) faces[i] = mask >> (E + i) & 1;
    if (!closed_under_faces(tri, edges, faces)) continue;
    InducedProtoMom s(ctx, edges, faces);
    if (s.internal_valid()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<InducedProtoMom> enumerate_maximal(const ContextPtr& ctx) {
  std::map<std::string, InducedProtoMom> found;
  for (const auto& m : enumerate_moms(ctx->graph, MomKind::general)) {
    auto s = from_mom_coloring(ctx, m);
    found.emplace(s.key(), s);
  }
  std::vector<InducedProtoMom> out;
  for (auto& [k, v] : found) out.push_back(v);
  return out;
}

BridgeResult pachner_bridge(const InducedProtoMom& s, int face_class) {
  const auto& tri = s.tri();
  require(face_class >= 0 && face_class < tri.face_count(), "bridge: face class out of range");
  require(is_tau_maximal(s), "bridge: structure is not maximal");
  require(!s.face_kept(face_class), "bridge: the face is kept by the structure");
  auto [t, f] = tri.face_rep(face_class);
  require(tri.gluing(t, f).tet != t, "bridge: the face is glued to its own tetrahedron");
  BridgeResult out;
  out.move = pachner23(tri, face_class);
  out.context = make_context(out.move.tri);
  const auto& tri2 = out.context->tri;
  std::vector<bool> edges(tri2.edge_count(), false), faces(tri2.face_count(), false);
  for (int e = 0; e < tri.edge_count(); ++e) edges[out.move.edge_map[e]] = s.edge_kept(e);
  for (int c = 0; c < tri.face_count(); ++c)
    if (c != face_class) faces[out.move.face_map[c]] = s.face_kept(c);
  out.structure = InducedProtoMom(out.context, edges, faces);
  if (kinds_of(out.structure) != kinds_of(s)) fail_invariant("bridge: lateral components changed");
  for (int nf : out.move.new_faces) out.expansions.push_back({out.move.new_edge, nf});
  std::sort(out.expansions.begin(), out.expansions.end());
  if (c_expansions(out.structure) != out.expansions) fail_invariant("bridge: unexpected C-expansions after the move");
  return out;
}

LateralTriangulation induced_lateral_triangulation(const InducedProtoMom& s, int component) {
  const auto& tri = s.tri();
  require(component >= 0 && component < static_cast<int>(s.lateral().size()), "lateral: component out of range");
  const auto& comp = s.lateral()[component];
  require(comp.kind == LateralKind::torus, "lateral: component is not a torus");
  require(is_full(s), "lateral: structure is not full (a lake is not a disc)");
  auto sign = tri.orientation();
  if (!sign) fail_invariant("lateral: triangulation is not orientable");

  LateralTriangulation out;
  out.component = component;
  std::vector<int> index(4 * tri.tet_count(), -1);
  for (int t : comp.tets)
    for (int f = 0; f < 4; ++f)
      if (s.face_kept(tri.face_class(t, f))) {
        index[4 * t + f] = static_cast<int>(out.face.size());
        out.face.push_back({t, f});
        out.corners.push_back(outward_corners(f, (*sign)[t]));
      }
  const int n = static_cast<int>(out.face.size());
  std::vector<Side> partner(3 * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) {
      int t = out.face[i][0], enter = out.face[i][1];
      int a = out.corners[i][k], b = out.corners[i][(k + 1) % 3];
      // Around edge a-b away from the side, to the next kept face.
      int d = 6 - a - b - enter, steps = 0;
      while (!s.face_kept(tri.face_class(t, d))) {
        if (++steps > 6 * tri.tet_count()) fail_pre("lateral: a kept edge has no kept face around it");
        const auto& g = tri.gluing(t, d);
        t = g.tet;
        a = g.perm[a];
        b = g.perm[b];
        enter = g.perm[d];
        d = 6 - a - b - enter;
      }
      int j = index[4 * t + d];
      if (j < 0) fail_invariant("lateral: strip leaves the component");
      int r = -1;
      for (int x = 0; x < 3; ++x)
        if (out.corners[j][x] == b && out.corners[j][(x + 1) % 3] == a) r = x;
      if (r < 0) fail_invariant("lateral: sides meet with the same orientation");
      partner[3 * i + k] = {j, r};
    }
  out.surface = SurfaceTriangulation(partner);
  if (out.surface.euler() != 0 || !out.surface.is_connected()) fail_invariant("lateral: boundary surface is not a torus");

  // Generator of the first cohomology of the component, as a value per unkept
  // face: zero on a spanning tree, solved around unkept edges elsewhere.
  const auto& dual = s.context()->dual;
  std::vector<bool> mask(dual.graph.edge_count(), false);
  for (int c : comp.faces) mask[dual.dual_edge[c]] = true;
  std::vector<bool> tree(tri.face_count(), false);
  for (int ge : spanning_forest(dual.graph, mask)) tree[dual.face_class[ge]] = true;
  std::vector<int> col(tri.face_count(), -1);
  int m = 0;
  for (int c : comp.faces)
    if (!tree[c]) col[c] = m++;
  std::vector<std::vector<long>> rows;
  for (int e : comp.edges) {
    std::vector<long> row(m, 0);
    walk_around(tri, e, [&](int t, int f) {
      int c = tri.face_class(t, f);
      if (col[c] >= 0) row[col[c]] += crossing(tri, t, f);
    });
    rows.push_back(row);
  }
  auto gen = primitive_kernel(rows, m);
  if (!gen) fail_invariant("lateral: component is not a solid torus");
  std::vector<long> phi(tri.face_count(), 0);
  for (int c : comp.faces)
    if (col[c] >= 0) phi[c] = (*gen)[col[c]];

  // Potential on the truncation triangles, spread through each lake.
  std::vector<std::optional<long>> pot(4 * tri.tet_count());
  for (int t : comp.tets)
    for (int v = 0; v < 4; ++v) {
      if (pot[4 * t + v]) continue;
      pot[4 * t + v] = 0;
      std::queue<int> q;
      q.push(4 * t + v);
      while (!q.empty()) {
        int x = q.front();
        q.pop();
        int xt = x / 4, xv = x % 4;
        for (int f = 0; f < 4; ++f) {
          if (f == xv || s.face_kept(tri.face_class(xt, f))) continue;
          const auto& g = tri.gluing(xt, f);
          int y = 4 * g.tet + g.perm[xv];
          long val = *pot[x] + crossing(tri, xt, f) * phi[tri.face_class(xt, f)];
          if (!pot[y]) {
            pot[y] = val;
            q.push(y);
          } else if (*pot[y] != val) {
            fail_invariant("lateral: meridian potential is not single-valued on a lake");
          }
        }
      }
    }
  auto dart = [&](int i, int k) {
    int t = out.face[i][0];
    return *pot[4 * t + out.corners[i][k]] - *pot[4 * t + out.corners[i][(k + 1) % 3]];
  };
  out.meridian.resize(out.surface.edge_count());
  for (int e = 0; e < out.surface.edge_count(); ++e) {
    auto d = out.surface.edge_darts(e);
    out.meridian[e] = dart(d[0].tri, d[0].side);
    if (dart(d[1].tri, d[1].side) != -out.meridian[e]) fail_invariant("lateral: meridian differs across a strip");
  }
  if (!is_surface_cocycle(out.surface, out.meridian)) fail_invariant("lateral: meridian is not a cocycle");
  return out;
}

Assembly assemble_ideal_triangulation(const InducedProtoMom& s) {
  const auto& tri = s.tri();
  require(s.internal_valid(), "assemble: structure has a non-toral lateral component");
  require(is_full(s), "assemble: structure is not full");
  Assembly out;
  std::vector<std::array<FaceGluing, 4>> g;
  std::vector<std::array<int, 2>> where(4 * tri.tet_count(), {-1, -1});
  for (int i = 0; i < static_cast<int>(s.lateral().size()); ++i) {
    out.laterals.push_back(induced_lateral_triangulation(s, i));
    const auto& lt = out.laterals.back();
    out.fills.push_back(fill_solid_torus(lt.surface, lt.meridian));
    const int offset = static_cast<int>(g.size());
    out.tet_offset.push_back(offset);
    for (auto tet : out.fills.back().complex.gluings()) {
      for (auto& x : tet)
        if (x.glued()) x.tet += offset;
      g.push_back(tet);
    }
    for (int j = 0; j < static_cast<int>(lt.face.size()); ++j) where[4 * lt.face[j][0] + lt.face[j][1]] = {i, j};
  }
  // Each kept face closes up its two sides.
  auto new_face = [&](int t, int f) {
    auto [i, j] = where[4 * t + f];
    const auto& fill = out.fills[i];
    return std::array<int, 2>{out.tet_offset[i] + fill.face[j][0], fill.face[j][1]};
  };
  for (int c = 0; c < tri.face_count(); ++c) {
    if (!s.face_kept(c)) continue;
    auto [t, f] = tri.face_rep(c);
    const auto& gl = tri.gluing(t, f);
    auto [ia, ja] = where[4 * t + f];
    auto [ib, jb] = where[4 * gl.tet + gl.face];
    if (ia < 0 || ib < 0) fail_invariant("assemble: a kept face side is missing from the lateral surfaces");
    auto A = new_face(t, f), B = new_face(gl.tet, gl.face);
    const auto &la = out.laterals[ia], &lb = out.laterals[ib];
    const auto &fa = out.fills[ia], &fb = out.fills[ib];
    Perm4 p{};
    p[A[1]] = B[1];
    for (int k = 0; k < 3; ++k) {
      int y = gl.perm[la.corners[ja][k]];
      int k2 = static_cast<int>(std::find(lb.corners[jb].begin(), lb.corners[jb].end(), y) - lb.corners[jb].begin());
      p[fa.corners[ja][k]] = fb.corners[jb][k2];
    }
    if (g[A[0]][A[1]].glued() || g[B[0]][B[1]].glued()) fail_invariant("assemble: a face is glued twice");
    g[A[0]][A[1]] = {B[0], B[1], p};
    g[B[0]][B[1]] = {A[0], A[1], perm_inverse(p)};
  }
  out.tri = IdealTriangulation(std::move(g));
  const auto& nt = out.tri;

  auto report = validate(nt);
  for (const auto& p : report.problems) out.problems.push_back("new triangulation: " + p);
  auto ga = boundary_genera(tri), gb = report.genera();
  std::sort(ga.begin(), ga.end());
  std::sort(gb.begin(), gb.end());
  if (ga != gb) out.problems.push_back("boundary genera changed");
  for (std::size_t i = 0; i < out.fills.size(); ++i)
    if (out.fills[i].complex.vertex_count() != out.laterals[i].surface.vertex_count())
      out.problems.push_back("a solid torus has vertices off its boundary");

  out.face_map.assign(tri.face_count(), -1);
  for (int c = 0; c < tri.face_count(); ++c) {
    if (!s.face_kept(c)) continue;
    auto [t, f] = tri.face_rep(c);
    auto A = new_face(t, f);
    out.face_map[c] = nt.face_class(A[0], A[1]);
  }
  out.edge_map.assign(tri.edge_count(), -1);
  std::vector<int> relative(tri.edge_count(), 0);
  for (std::size_t i = 0; i < out.laterals.size(); ++i) {
    const auto& lt = out.laterals[i];
    const auto& fill = out.fills[i];
    for (std::size_t j = 0; j < lt.face.size(); ++j)
      for (int k = 0; k < 3; ++k) {
        int t = lt.face[j][0], a = lt.corners[j][k], b = lt.corners[j][(k + 1) % 3];
        int e = tri.edge_class(t, a, b);
        int tt = out.tet_offset[i] + fill.face[j][0], aa = fill.corners[j][k], bb = fill.corners[j][(k + 1) % 3];
        int e2 = nt.edge_class(tt, aa, bb);
        int rel = tri.edge_sign(t, a, b) * nt.edge_sign(tt, aa, bb);
        if (out.edge_map[e] < 0) {
          out.edge_map[e] = e2;
          relative[e] = rel;
        } else if (out.edge_map[e] != e2 || relative[e] != rel) {
          out.problems.push_back("edge " + std::to_string(e) + " splits in the new triangulation");
        }
      }
  }
  for (int e = 0; e < tri.edge_count(); ++e)
    if (s.edge_kept(e) && out.edge_map[e] < 0) out.problems.push_back("kept edge " + std::to_string(e) + " has no image");
  auto injective = [](std::vector<int> v) {
    v.erase(std::remove(v.begin(), v.end(), -1), v.end());
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!injective(out.face_map)) out.problems.push_back("two kept faces meet in one face");
  if (!injective(out.edge_map)) out.problems.push_back("two kept edges meet in one edge");
  if (!out.ok()) return out;

  auto ctx = make_context(out.tri);
  std::vector<bool> edges(nt.edge_count(), false), faces(nt.face_count(), false);
  for (int e = 0; e < tri.edge_count(); ++e)
    if (out.edge_map[e] >= 0) edges[out.edge_map[e]] = true;
  for (int c = 0; c < tri.face_count(); ++c)
    if (out.face_map[c] >= 0) faces[out.face_map[c]] = true;
  if (!closed_under_faces(nt, edges, faces)) {
    out.problems.push_back("image faces run over unkept edges");
    return out;
  }
  out.image = InducedProtoMom(ctx, edges, faces);
  if (!out.image.internal_valid()) out.problems.push_back("image is not internal");
  if (!is_full(out.image)) out.problems.push_back("image is not full");
  if (out.image.torus_count() != s.torus_count()) out.problems.push_back("lateral torus count changed");
  for (int e = 0; e < tri.edge_count(); ++e)
    if (out.edge_map[e] >= 0 && out.image.valence(out.edge_map[e]) != s.valence(e))
      out.problems.push_back("valence of edge " + std::to_string(e) + " changed");
  return out;
}

Normalization normalize_to_genuine(const InducedProtoMom& s) {
  Normalization out{s, {}, {}};
  for (;;) {
    auto options = c_collapses(out.structure);
    if (options.empty()) break;
    out.structure = c_collapse(out.structure, options.front());
    out.trace.push("ccollapse", {options.front()});
  }
  for (int e = 0; e < out.structure.tri().edge_count(); ++e)
    if (out.structure.edge_kept(e) && out.structure.valence(e) == 0) out.stuck.push_back(e);
  return out;
}

StructureFile parse_structure(std::string_view input) {
  StructureFile out;
  bool have = false;
  for (const auto& l : text::tokenize(input)) {
    const auto& k = l.tokens[0];
    const std::string where = "structure line " + std::to_string(l.number) + ": ";
    if (k == "triangulation") {
      if (l.tokens.size() != 2) fail_parse(where + "expected 'triangulation PATH'");
      out.triangulation = l.tokens[1];
      have = true;
    } else if (k == "keep-edges" || k == "keep-faces") {
      auto& dst = k == "keep-edges" ? out.edges : out.faces;
      for (std::size_t i = 1; i < l.tokens.size(); ++i) dst.push_back(text::to_int(l.tokens[i], l));
    } else {
      fail_parse(where + "unknown keyword '" + k + "'");
    }
  }
  if (!have) fail_parse("structure: missing triangulation line");
  return out;
}

InducedProtoMom structure_from_file(const ContextPtr& ctx, const StructureFile& f) {
  std::vector<bool> edges(ctx->tri.edge_count(), false), faces(ctx->tri.face_count(), false);
  for (int e : f.edges) {
    if (e < 0 || e >= ctx->tri.edge_count()) fail_parse("structure: edge " + std::to_string(e) + " out of range");
    edges[e] = true;
  }
  for (int c : f.faces) {
    if (c < 0 || c >= ctx->tri.face_count()) fail_parse("structure: face " + std::to_string(c) + " out of range");
    faces[c] = true;
  }
  return {ctx, edges, faces};
}

std::string format_structure(const InducedProtoMom& s, const std::string& triangulation_path) {
  std::ostringstream out;
  out << "triangulation " << triangulation_path << "\nkeep-edges";
  for (int e = 0; e < s.tri().edge_count(); ++e)
    if (s.edge_kept(e)) out << " " << e;
  out << "\nkeep-faces";
  for (int c = 0; c < s.tri().face_count(); ++c)
    if (s.face_kept(c)) out << " " << c;
  out << "\n";
  return out.str();
}

}  // namespace momkit
