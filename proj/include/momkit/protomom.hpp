#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "momkit/ideal.hpp"
#include "momkit/mom.hpp"
#include "momkit/solid.hpp"
#include "momkit/surface.hpp"
#include "momkit/trace.hpp"

namespace momkit {

// A valid ideal triangulation with its dual graph, shared by every structure
// built on it. Graph edge dual.dual_edge[c] stands for face class c.
struct ProtoContext {
  IdealTriangulation tri;
  DualSpineGraph dual;
  GraphPtr graph;
};
using ContextPtr = std::shared_ptr<const ProtoContext>;
ContextPtr make_context(IdealTriangulation tri);

enum class LateralKind { sphere, torus, other };
const char* lateral_name(LateralKind k);

// One component of the complement of the handles: the cores of its
// tetrahedra joined across unkept faces and around unkept edges.
struct LateralComponent {
  std::vector<int> tets;
  std::vector<int> faces;  // unkept face classes
  std::vector<int> edges;  // unkept edge classes
  int euler = 0;           // of its boundary surface: 2(V - F + E)
  LateralKind kind = LateralKind::other;
};

// Handles thickening a subset of the edges and faces of the triangulation:
// every kept face must run over kept edges only. Valences are not bounded
// below, so weak structures are included.
class InducedProtoMom {
 public:
  InducedProtoMom() = default;
  InducedProtoMom(ContextPtr ctx, std::vector<bool> kept_edges, std::vector<bool> kept_faces);

  const ContextPtr& context() const { return ctx_; }
  const IdealTriangulation& tri() const { return ctx_->tri; }
  bool edge_kept(int e) const { return kept_edges_.at(e); }
  bool face_kept(int f) const { return kept_faces_.at(f); }
  const std::vector<bool>& kept_edges() const { return kept_edges_; }
  const std::vector<bool>& kept_faces() const { return kept_faces_; }
  int kept_edge_count() const;
  int kept_face_count() const;
  // Number of times kept faces run over edge e.
  int valence(int e) const { return valence_.at(e); }
  // Every kept edge has valence at least 2.
  bool genuine() const;

  const std::vector<LateralComponent>& lateral() const { return lateral_; }
  int lateral_of_tet(int t) const { return lateral_of_tet_.at(t); }
  int torus_count() const;
  // All lateral components are tori.
  bool internal_valid() const;

  std::string key() const;
  friend bool operator==(const InducedProtoMom& a, const InducedProtoMom& b) {
    return a.ctx_ == b.ctx_ && a.kept_edges_ == b.kept_edges_ && a.kept_faces_ == b.kept_faces_;
  }
  friend bool operator<(const InducedProtoMom& a, const InducedProtoMom& b) { return a.key() < b.key(); }

 private:
  ContextPtr ctx_;
  std::vector<bool> kept_edges_, kept_faces_;
  std::vector<int> valence_;
  std::vector<LateralComponent> lateral_;
  std::vector<int> lateral_of_tet_;
};

// Every edge and face kept; one spherical component per tetrahedron.
InducedProtoMom full_footprint(const ContextPtr& ctx);

struct RemovalStep {
  int face = 0;
  char rule = 'a';  // a: two spheres merge, b: sphere joins a torus, c: sphere closes to a torus
};
struct RemovalStrategy {
  bool randomized = false;  // otherwise the lowest applicable face goes first
  std::uint64_t seed = 0;
};
struct RemovalResult {
  InducedProtoMom structure;
  std::vector<RemovalStep> steps;
};
// Deletes faces until no spherical component is left.
RemovalResult greedy_removal(const InducedProtoMom& raw, RemovalStrategy strategy = {});

// Components of the collar top left free by the handles. The truncation
// triangles (t, v) are joined across unkept faces and around unkept edges.
struct Lake {
  std::vector<std::array<int, 2>> triangles;  // (tet, vertex)
  int euler = 0;
  int lateral = 0;  // component it faces
  bool disc() const { return euler == 1; }
};
std::vector<Lake> lakes(const InducedProtoMom& s);
bool is_full(const InducedProtoMom& s);

// Not properly contained in another internal structure on the same triangulation.
bool is_tau_maximal(const InducedProtoMom& s);

// Kept faces become f-edges; in each unicyclic component of unkept faces the
// lowest spanning tree is t and the remaining face is c.
MomColoring to_mom_coloring(const InducedProtoMom& s);
InducedProtoMom from_mom_coloring(const ContextPtr& ctx, const MomColoring& m);
// Every coloring whose dual is s (one per choice of c-edge on each cycle).
std::vector<MomColoring> dual_colorings(const InducedProtoMom& s);

// Removes edge e of valence 1 together with its one kept face.
InducedProtoMom c_collapse(const InducedProtoMom& s, int e);
// Adds unkept edge e and unkept face f, where f runs once over e and its other
// two sides lie on kept edges.
InducedProtoMom c_expand(const InducedProtoMom& s, int e, int f);
std::vector<int> c_collapses(const InducedProtoMom& s);
std::vector<std::array<int, 2>> c_expansions(const InducedProtoMom& s);

// Graph move on the canonical dual coloring, mapped back to a structure.
InducedProtoMom m_move(const InducedProtoMom& s, const Move& g);
// Structures one admissible M-move away, over all dual colorings.
std::vector<InducedProtoMom> m_neighbors(const InducedProtoMom& s);

// Structure traces mix `cexpand e f`, `ccollapse e` and graph moves
// (m1, m2, m2tilde, m2prime, m3, m3bar) whose parameters refer to the dual
// graph. A run of graph moves starts from the canonical dual coloring and
// continues on the coloring it produces.
InducedProtoMom replay_structure(const InducedProtoMom& s, const MoveTrace& trace,
                                 std::vector<InducedProtoMom>* states = nullptr);
// C-expansions of a to a maximal structure, graph moves between the dual
// colorings, then the C-collapses undoing the expansions of b.
MoveTrace relate(const InducedProtoMom& a, const InducedProtoMom& b);
MoveTrace expand_to_maximal(const InducedProtoMom& s);

// Brute force over all subsets of edges and faces: every internal structure.
std::vector<InducedProtoMom> enumerate_internal(const ContextPtr& ctx);
// Through the duality with general colorings of the dual graph.
std::vector<InducedProtoMom> enumerate_maximal(const ContextPtr& ctx);

struct BridgeResult {
  ContextPtr context;  // after the 2-3 move
  Pachner23Result move;
  InducedProtoMom structure;                   // same handles, new edge unkept
  std::vector<std::array<int, 2>> expansions;  // (new edge, new face)
};
BridgeResult pachner_bridge(const InducedProtoMom& s, int face_class);

// The boundary torus of a lateral component: one triangle per side of a kept
// face facing it, one edge per strip along a kept edge, one vertex per lake.
struct LateralTriangulation {
  int component = 0;
  SurfaceTriangulation surface;
  std::vector<std::array<int, 2>> face;     // triangle -> (tet, face) of the side
  std::vector<std::array<int, 3>> corners;  // triangle corner -> tet vertex
  // Per surface edge, intersection with the curve bounding a disc in the component.
  std::vector<long> meridian;
};
LateralTriangulation induced_lateral_triangulation(const InducedProtoMom& s, int component);

struct Assembly {
  IdealTriangulation tri;
  std::vector<LateralTriangulation> laterals;
  std::vector<FilledSolidTorus> fills;
  std::vector<int> tet_offset;  // first tetrahedron of each fill
  std::vector<int> face_map;    // face class -> new face class, -1 when unkept
  std::vector<int> edge_map;    // edge class -> new edge class, -1 when unkept
  InducedProtoMom image;        // the same handles read on the new triangulation
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};
// Fills every lateral torus with a solid torus and glues the pieces along the
// two sides of each kept face; the certificate checks that s is induced by
// the result.
Assembly assemble_ideal_triangulation(const InducedProtoMom& s);

struct Normalization {
  InducedProtoMom structure;
  MoveTrace trace;         // ccollapse moves
  std::vector<int> stuck;  // kept edges of valence 0
};
Normalization normalize_to_genuine(const InducedProtoMom& s);

// `triangulation PATH`, `keep-edges ...`, `keep-faces ...`.
struct StructureFile {
  std::string triangulation;
  std::vector<int> edges;
  std::vector<int> faces;
};
StructureFile parse_structure(std::string_view text);
InducedProtoMom structure_from_file(const ContextPtr& ctx, const StructureFile& f);
std::string format_structure(const InducedProtoMom& s, const std::string& triangulation_path);

}  // namespace momkit
