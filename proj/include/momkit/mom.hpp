#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "momkit/graph.hpp"
#include "momkit/trace.hpp"

namespace momkit {

enum class Color : std::uint8_t { t, c, f };
char color_char(Color c);

enum class MomKind { minimal, general, invalid };
const char* kind_name(MomKind k);

using GraphPtr = std::shared_ptr<const Multigraph>;

// A {t,c,f} edge coloring of a connected 4-valent multigraph. The t-forest,
// its components and their c-edges are derived once at construction.
class MomColoring {
 public:
  MomColoring(GraphPtr g, std::vector<Color> colors);

  const Multigraph& graph() const { return *g_; }
  const GraphPtr& graph_ptr() const { return g_; }
  Color color(int e) const { return colors_.at(e); }
  const std::vector<Color>& colors() const { return colors_; }
  std::string key() const;

  MomKind kind() const { return kind_; }
  const std::string& problem() const { return problem_; }

  // Derived data; meaningful when kind() != invalid.
  int k() const { return tree_.count(); }
  int component_of(int v) const { return tree_.component_of.at(v); }
  const Partition& tree_components() const { return tree_; }
  int c_edge(int comp) const { return c_of_comp_.at(comp); }
  std::vector<int> edges_of(Color c) const;
  // Edge sequence of C_i: the c-edge followed by its tree path.
  std::vector<int> cycle(int comp) const;
  std::vector<int> cycle_vertices(int comp) const;

  MomColoring with_swap(int e1, int e2) const;
  MomColoring with_colors(std::vector<Color> colors) const { return MomColoring(g_, std::move(colors)); }

  friend bool operator==(const MomColoring& a, const MomColoring& b) {
    return a.g_ == b.g_ && a.colors_ == b.colors_;
  }

 private:
  void analyze();

  GraphPtr g_;
  std::vector<Color> colors_;
  Partition tree_;
  std::vector<int> c_of_comp_;
  MomKind kind_ = MomKind::invalid;
  std::string problem_;
};

MomKind classify(const MomColoring& m);

MomColoring apply_m1(const MomColoring& m, int v, int e, int e2);
MomColoring apply_m2(const MomColoring& m, int v, int e, int e2);

struct M2TildeResult {
  MomColoring result;
  MoveTrace expansion;  // single m2 moves whose replay gives result
};
M2TildeResult apply_m2tilde(const MomColoring& m, int e, int e2);

MomColoring apply_m2prime(const MomColoring& m, int e, int e2);
MomColoring apply_m3(const MomColoring& m, int e, int ej);
MomColoring apply_m3bar(const MomColoring& m, int e, int e2);

// Dispatch on move.kind: m1, m2, m2tilde, m2prime, m3, m3bar.
MomColoring apply_move(const MomColoring& m, const Move& move);
MomColoring replay(const MomColoring& m, const MoveTrace& trace);
Move inverse_move(const Move& move);
MoveTrace inverse_trace(const MoveTrace& trace);

// Every (kind, params) among the given kinds that applies to m.
std::vector<std::pair<Move, MomColoring>> admissible_moves(const MomColoring& m,
                                                           const std::vector<std::string>& kinds);

// m_G: over edges joining two distinct t-components, the least tree distance
// from an endpoint to the cycle of its component. -1 when k = 1.
int reduction_measure(const MomColoring& m);

MoveTrace reduce_to_minimal(const MomColoring& m);
MoveTrace relate_minimal(const MomColoring& a, const MomColoring& b);
// Any two general colorings: reduce both, relate the minimal ones, undo the second reduction.
MoveTrace relate_general(const MomColoring& a, const MomColoring& b);

std::vector<MomColoring> enumerate_moms(const GraphPtr& g, MomKind kind);

struct ConnectivityCertificate {
  int states = 0;
  int transitions = 0;  // undirected state-graph edges
  int components = 0;
  int diameter = 0;     // largest eccentricity within a component
};

// State graph of all general colorings under m1, m2, m2prime, m3, m3bar, or of
// the minimal ones under m1 and m2 when minimal_only is set.
ConnectivityCertificate verify_move_connectivity(const GraphPtr& g, bool minimal_only = false);

MomColoring parse_coloring(const GraphPtr& g, std::string_view text);
std::string format_coloring(const MomColoring& m);

}  // namespace momkit
