#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "momkit/trace.hpp"

namespace momkit {

// Side s of triangle t runs from corner s to corner s+1 (mod 3). Every
// gluing reverses orientation: if (t,s) is glued to (u,r) then corner s of t
// meets corner r+1 of u and corner s+1 of t meets corner r of u. The dart
// (t,s) is the half-edge leaving corner s.
struct Side {
  int tri = 0;
  int side = 0;
  friend bool operator==(const Side&, const Side&) = default;
};

class SurfaceTriangulation {
 public:
  SurfaceTriangulation() = default;
  // partner[3t+s] is the side glued to (t,s).
  explicit SurfaceTriangulation(std::vector<Side> partner);

  int triangle_count() const { return static_cast<int>(partner_.size()) / 3; }
  Side partner(int t, int s) const { return partner_.at(3 * t + s); }
  const std::vector<Side>& partners() const { return partner_; }

  int vertex_count() const { return static_cast<int>(vertex_corners_.size()); }
  int edge_count() const { return static_cast<int>(edge_darts_.size()); }
  int euler() const { return vertex_count() - edge_count() + triangle_count(); }
  bool is_connected() const { return connected_; }

  int vertex_at(int t, int c) const { return corner_vertex_.at(3 * t + c); }
  int edge_at(int t, int s) const { return dart_edge_.at(3 * t + s); }
  // Both darts of edge e, lowest first.
  std::array<Side, 2> edge_darts(int e) const { return edge_darts_.at(e); }
  std::array<int, 2> edge_ends(int e) const;
  bool is_loop(int e) const;
  // Corners (t, c) at v, in increasing 3t+c order.
  const std::vector<Side>& corners(int v) const { return vertex_corners_.at(v); }
  int valence(int v) const { return static_cast<int>(vertex_corners_.at(v).size()); }
  // Edges at v, counted once per edge end.
  std::vector<int> incident_edges(int v) const;
  bool has_loop(int v) const;

  // Least code over all orientation-preserving relabelings; equal codes mean
  // isomorphic triangulated surfaces.
  std::vector<int> canonical_code() const;

  friend bool operator==(const SurfaceTriangulation& a, const SurfaceTriangulation& b) {
    return a.partner_ == b.partner_;
  }

 private:
  std::vector<Side> partner_;
  std::vector<int> corner_vertex_;
  std::vector<std::vector<Side>> vertex_corners_;
  std::vector<int> dart_edge_;
  std::vector<std::array<Side, 2>> edge_darts_;
  bool connected_ = true;
};

SurfaceTriangulation two_triangle_torus();

// Darts used by a move, exposed so that fillings can follow the same choices.
struct S1Site {
  Side d1, d2;  // the chosen half-edges of e' and e'' leaving v
};
S1Site s1_site(const SurfaceTriangulation& s, int v, int e1, int e2);
// New triangles are appended as A = (x, v_a, y) and B = (y, v_b, x), where x
// and y are the far ends of d1 and d2; the edge x-y is side 2 of both.
SurfaceTriangulation apply_s1_at(const SurfaceTriangulation& s, const S1Site& site);
SurfaceTriangulation apply_s1(const SurfaceTriangulation& s, int v, int e1, int e2);

// The lowest dart (t1,s1) of e and its partner (t2,s2). With a, b, c the
// corners s1, s1+1, s1+2 of t1 and r the corner s2+2 of t2, the move rewrites
// t1 as (c, a, r) and t2 as (r, b, c); side 2 of each is the new diagonal.
struct S2Site {
  Side d1, d2;
};
S2Site s2_site(const SurfaceTriangulation& s, int e);
SurfaceTriangulation apply_s2(const SurfaceTriangulation& s, int e);

// Triangles around v in counterclockwise order, each with its corner at v. The
// merged triangle (a1, a2, a3) takes the slot of the first one and is built
// from the sides opposite v; the other two slots are removed and later
// triangles shift down.
struct S3Site {
  std::array<Side, 3> around;
  std::vector<int> new_index;  // old triangle -> new triangle, -1 if removed
};
S3Site s3_site(const SurfaceTriangulation& s, int v);
SurfaceTriangulation apply_s3(const SurfaceTriangulation& s, int v);

SurfaceTriangulation apply_s1prime(const SurfaceTriangulation& s, int v);

// Inverse of s3: cone triangle t from a new vertex (used to build test inputs).
SurfaceTriangulation split_triangle(const SurfaceTriangulation& s, int t);

SurfaceTriangulation apply_surface_move(const SurfaceTriangulation& s, const Move& m);
SurfaceTriangulation replay(const SurfaceTriangulation& s, const MoveTrace& trace);

// Structural checks: closed, connected, orientable by construction.
void require_torus(const SurfaceTriangulation& s);

struct SimplifyMeasure {
  int valence1 = 0;
  int valence2 = 0;
  int vertices = 0;
  int loops = 0;  // parallel loops of the ladder form, 0 outside it
  friend bool operator==(const SimplifyMeasure&, const SimplifyMeasure&) = default;
};
SimplifyMeasure simplify_measure(const SurfaceTriangulation& s);

struct SimplifyStep {
  std::string label;  // "1", "2", "3.1.a", "3.1.b", "3.2.a", "3.2.b"
  int first_move = 0;  // index into the trace
  SimplifyMeasure before, after;
};

struct SimplifyReport {
  MoveTrace trace;
  std::vector<SimplifyStep> steps;
  // Case 3.1.b configurations where no adjacent valence-3 pair met the
  // valence bound; each was resolved by a guarded fan removal instead.
  int bound_violations = 0;
};

SimplifyReport simplify_torus_report(const SurfaceTriangulation& s);
MoveTrace simplify_torus(const SurfaceTriangulation& s);

// Edge classes around the two triangles of a one-vertex torus.
struct ThetaDescriptor {
  std::array<std::array<int, 3>, 2> around;
  friend bool operator==(const ThetaDescriptor&, const ThetaDescriptor&) = default;
};
ThetaDescriptor theta_dual(const SurfaceTriangulation& s);

// Random torus by inverse-s3, s1 and s2 moves from the two-triangle torus.
SurfaceTriangulation random_torus(std::mt19937_64& rng, int moves, int max_triangles);

// `triangles N`, then `glue t1.s1 t2.s2` lines; an optional trailing `flip`
// marks an orientation-preserving gluing. Triangles are reoriented so that
// every gluing reverses orientation; a non-orientable input is rejected.
SurfaceTriangulation parse_surface(std::string_view text);
std::string format_surface(const SurfaceTriangulation& s);

}  // namespace momkit
