#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momkit/graph.hpp"
#include "momkit/surface.hpp"

namespace momkit {

// Vertex map of a tetrahedron: perm[i] is the image of vertex i.
using Perm4 = std::array<int, 4>;
Perm4 perm_inverse(const Perm4& p);
Perm4 perm_compose(const Perm4& outer, const Perm4& inner);  // outer after inner
int perm_sign(const Perm4& p);

// Face f of a tetrahedron is the one opposite vertex f.
struct FaceGluing {
  int tet = -1;  // -1 when the face is unglued
  int face = -1;
  Perm4 perm{0, 1, 2, 3};  // this tetrahedron's vertices -> partner's; perm[f] = face
  bool glued() const { return tet >= 0; }
};

// One tetrahedron edge seen from a given tetrahedron, directed a -> b.
struct TetEdge {
  int tet = 0;
  int a = 0;
  int b = 0;
  friend bool operator==(const TetEdge&, const TetEdge&) = default;
};

// Local edge number 0..5 of the vertex pair {a, b}.
int edge_number(int a, int b);
std::array<int, 2> edge_vertices(int number);

struct EdgeClass {
  std::vector<TetEdge> members;  // in the order met when walking around the edge
  bool boundary = false;         // the walk ends at unglued faces
  int degree() const { return static_cast<int>(members.size()); }
};

struct LinkComponent {
  int euler = 0;
  int boundary_circles = 0;  // unglued arcs close up into this many circles
  int genus() const { return (2 - euler - boundary_circles) / 2; }
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> problems;
  int tets = 0;
  int edge_classes = 0;
  int face_classes = 0;
  std::vector<LinkComponent> links;  // one per ideal vertex class
  std::vector<int> genera() const;
};

// Tetrahedra with face pairings. Faces may stay unglued so that triangulated
// solid tori and other complexes with boundary share the type; ideal
// triangulations proper are the fully glued ones that pass validate().
class IdealTriangulation {
 public:
  IdealTriangulation() = default;
  explicit IdealTriangulation(std::vector<std::array<FaceGluing, 4>> gluings);

  int tet_count() const { return static_cast<int>(gluings_.size()); }
  const FaceGluing& gluing(int t, int f) const { return gluings_.at(t).at(f); }
  const std::vector<std::array<FaceGluing, 4>>& gluings() const { return gluings_; }
  bool fully_glued() const;

  // Face classes: a glued pair or a lone unglued face, numbered by lowest 4t+f.
  int face_count() const { return static_cast<int>(face_reps_.size()); }
  int face_class(int t, int f) const { return face_class_.at(4 * t + f); }
  // Lower (t, f) of the class.
  std::array<int, 2> face_rep(int c) const { return face_reps_.at(c); }
  // Edge classes of the three edges of face c, with multiplicity.
  std::array<int, 3> face_edges(int c) const;

  int edge_count() const { return static_cast<int>(edges_.size()); }
  int edge_class(int t, int a, int b) const { return edge_class_.at(6 * t + edge_number(a, b)); }
  const EdgeClass& edge(int c) const { return edges_.at(c); }
  // Every edge class keeps a consistent direction.
  bool edges_valid() const { return edges_valid_; }
  // +1 when a -> b in tetrahedron t runs along the direction of its class
  // (that of the first member), -1 otherwise.
  int edge_sign(int t, int a, int b) const { return edge_sign_.at(16 * t + 4 * a + b); }

  // Vertex classes (ideal vertices), numbered by lowest 4t+v.
  int vertex_count() const { return vertex_count_; }
  int vertex_class(int t, int v) const { return vertex_class_.at(4 * t + v); }

  // +1/-1 per tetrahedron making every gluing orientation reversing, if any.
  std::optional<std::vector<int>> orientation() const;

  friend bool operator==(const IdealTriangulation& a, const IdealTriangulation& b);

 private:
  std::vector<std::array<FaceGluing, 4>> gluings_;
  std::vector<int> face_class_;
  std::vector<std::array<int, 2>> face_reps_;
  std::vector<int> edge_class_;
  std::vector<EdgeClass> edges_;
  bool edges_valid_ = true;
  std::vector<int> edge_sign_;
  std::vector<int> vertex_class_;
  int vertex_count_ = 0;
};

// Link surfaces of the vertex classes, one entry per class.
std::vector<LinkComponent> vertex_links(const IdealTriangulation& tri);

ValidationReport validate(const IdealTriangulation& tri);
std::vector<int> boundary_genera(const IdealTriangulation& tri);

// Vertices = tetrahedra, edges = glued face classes, slot = face index. The
// graph edge of a glued face class c is dual_edge[c] (-1 for unglued faces).
struct DualSpineGraph {
  Multigraph graph;
  std::vector<int> dual_edge;   // face class -> graph edge
  std::vector<int> face_class;  // graph edge -> face class
};
DualSpineGraph dual_graph(const IdealTriangulation& tri);

// Corners of face f in counterclockwise order seen from outside a
// tetrahedron of the given orientation sign.
std::array<int, 3> outward_corners(int f, int sign);

// Unglued faces as a triangulated surface. Triangles are oriented as seen from
// outside using the tetrahedron orientation; corners record tetrahedron vertices.
struct BoundarySurface {
  SurfaceTriangulation surface;
  std::vector<std::array<int, 2>> face;     // triangle -> (tet, face)
  std::vector<std::array<int, 3>> corners;  // triangle corner -> tet vertex
};
BoundarySurface boundary_surface(const IdealTriangulation& tri);

struct Pachner23Result {
  IdealTriangulation tri;
  int new_edge = -1;                 // edge class created by the move
  std::vector<int> edge_map;         // old edge class -> new edge class
  std::vector<int> face_map;         // old face class -> new face class, -1 for the removed face
  std::array<int, 3> new_faces{};    // the three faces around the new edge
  std::array<int, 3> new_tets{};
};
// The two tetrahedra on either side of face class c are replaced by three
// around a new edge; the first two reuse the old slots and the third is appended.
Pachner23Result pachner23(const IdealTriangulation& tri, int face_class);

// `tets N`, then `glue t1.f1 t2.f2 perm=abc` where a, b, c are the images in
// t2 of the corners of face f1 taken in increasing order.
IdealTriangulation parse_triangulation(std::string_view text);
std::string format_triangulation(const IdealTriangulation& tri);

}  // namespace momkit
