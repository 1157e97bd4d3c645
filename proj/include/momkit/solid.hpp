#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momkit/ideal.hpp"
#include "momkit/surface.hpp"
#include "momkit/trace.hpp"

namespace momkit {

// Homology class of a boundary curve of a layered solid torus, in the basis
// fixed by the one-tetrahedron base (edges 0-1 and 0-2 of its tetrahedron).
struct Vec2 {
  long p = 0;
  long q = 0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};
long det(const Vec2& a, const Vec2& b);

// Slopes of the three boundary edges, each up to sign.
using SlopeTriple = std::array<Vec2, 3>;
// Sign- and order-free form used for comparisons.
SlopeTriple normalized(SlopeTriple t);

// Integer per edge class, read along the direction of the class.
using EdgeCochain = std::vector<long>;

// Value of the cochain on the directed tetrahedron edge a -> b.
long along(const IdealTriangulation& tri, const EdgeCochain& c, int t, int a, int b);
// Zero sum around every face class.
bool is_cocycle(const IdealTriangulation& tri, const EdgeCochain& c);
// Fills unknown values through faces with a single unknown edge; nullopt if
// some value stays unknown or the result is not a cocycle.
std::optional<EdgeCochain> extend_cocycle(const IdealTriangulation& tri, std::vector<std::optional<long>> known);

struct LayeredTrace {
  std::vector<int> layerings;  // boundary edge ids, each read on the boundary at that moment
  friend bool operator==(const LayeredTrace&, const LayeredTrace&) = default;
};

struct LayeredSolidTorus {
  LayeredTrace trace;
  IdealTriangulation complex;  // the two boundary faces stay unglued
  BoundarySurface boundary;
  // Generator of the first cohomology; its value on a boundary edge is the
  // intersection number of that edge with the meridian.
  EdgeCochain meridian;
  std::vector<Vec2> slope;  // per edge class, along the class direction

  // Per boundary surface edge, along its lowest dart.
  SlopeTriple slopes() const;
  std::array<long, 3> weights() const;  // signed meridian values
};

LayeredSolidTorus base_lst();
LayeredSolidTorus layer(const LayeredSolidTorus& lst, int boundary_edge);
LayeredSolidTorus build_lst(const LayeredTrace& trace);

// Shortest layering whose boundary slopes are the target, by Farey descent.
LayeredSolidTorus realize_theta(const SlopeTriple& target);
// Shortest layering whose boundary edges meet the meridian the given numbers
// of times (in any order).
LayeredSolidTorus realize_weights(std::array<long, 3> weights);

// Steps of a filling: `fold v e1 e2` pairs the two triangles an s1 move
// inserts, `layer e` attaches one tetrahedron along the two triangles at e,
// `cap3 v` attaches one tetrahedron around a valence-3 vertex; ids are read on
// the inner surface at that moment. The cap is a layered solid torus glued to
// the final two-triangle surface.
struct FillTrace {
  MoveTrace steps;
  LayeredTrace cap;
  int tetrahedra() const;
  friend bool operator==(const FillTrace&, const FillTrace&) = default;
};

struct FilledSolidTorus {
  FillTrace trace;
  IdealTriangulation complex;
  std::vector<std::array<int, 2>> face;     // surface triangle -> (tet, face)
  std::vector<std::array<int, 3>> corners;  // surface triangle corner -> tet vertex
  EdgeCochain meridian;                     // extends the target cochain
};

// Surface cochain: one value per surface edge, along its lowest dart.
long dart_value(const SurfaceTriangulation& s, const std::vector<long>& cochain, Side d);
bool is_surface_cocycle(const SurfaceTriangulation& s, const std::vector<long>& cochain);

// Two edges off a spanning tree and cotree; their values determine a cocycle.
std::array<int, 2> cocycle_generators(const SurfaceTriangulation& s);
// The cocycle vanishing on the spanning tree with values a and b on the
// generator edges. Every integral cohomology class arises this way, up to a
// coboundary, and (a, b) is primitive exactly when the class is.
std::vector<long> surface_cocycle(const SurfaceTriangulation& s, long a, long b);

// Steps that follow the simplification of the surface; the cap is left empty.
FillTrace fill_steps(const SurfaceTriangulation& delta);
// Builds the complex of a trace. `meridian` is a cocycle on delta giving, per
// edge, its intersection number with the curve that must bound a disc.
FilledSolidTorus assemble_fill(const SurfaceTriangulation& delta, const std::vector<long>& meridian, const FillTrace& trace);
FilledSolidTorus fill_solid_torus(const SurfaceTriangulation& delta, const std::vector<long>& meridian);
// Throws an invariant error unless the complex is a triangulated solid torus
// whose boundary is delta triangle for triangle, with no extra vertices, and
// whose meridian restricts to the given cochain.
void verify_fill(const SurfaceTriangulation& delta, const std::vector<long>& meridian, const FilledSolidTorus& fill);

FillTrace parse_fill_trace(std::string_view text);
std::string format_fill_trace(const FillTrace& trace);

}  // namespace momkit
