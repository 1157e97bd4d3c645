#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace momkit {

struct Dart {
  int vertex = 0;
  int slot = 0;
  friend bool operator==(const Dart&, const Dart&) = default;
};

struct Edge {
  Dart a;
  Dart b;
  bool is_loop() const { return a.vertex == b.vertex; }
  // Endpoint opposite to v; for a loop this is v again.
  int other(int v) const { return a.vertex == v ? b.vertex : a.vertex; }
  bool touches(int v) const { return a.vertex == v || b.vertex == v; }
};

// Undirected multigraph with loops and parallel edges. Every edge end sits in
// an explicit dart slot of its vertex, so the cyclic attaching data of a dual
// spine can be carried along. Values are immutable after construction.
class Multigraph {
 public:
  Multigraph() = default;
  Multigraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

  int degree(int v) const;
  bool is_four_valent() const;
  // Edge ids at v, one entry per occupied slot in slot order (a loop twice).
  std::vector<int> incident(int v) const;
  // Edge occupying (v, slot), or -1.
  int edge_at(int v, int slot) const;
  bool is_connected() const;

  friend bool operator==(const Multigraph&, const Multigraph&);

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> slots_;
};

// Vertex partition together with the edges living in each class.
struct Partition {
  std::vector<int> component_of;
  std::vector<std::vector<int>> vertices;
  std::vector<std::vector<int>> edges;
  int count() const { return static_cast<int>(vertices.size()); }
};

Partition components(const Multigraph& g);
// Components of the spanning subgraph keeping only edges with mask[e] true.
Partition components(const Multigraph& g, const std::vector<bool>& mask);

// |E_C| - |V_C| + 1 for component c of p.
int betti1(const Partition& p, int c);

// Lowest-index-first greedy forest, one spanning tree per component.
// When mask is given only masked edges are considered.
std::vector<int> spanning_forest(const Multigraph& g);
std::vector<int> spanning_forest(const Multigraph& g, const std::vector<bool>& mask);

bool is_forest(const Multigraph& g, const std::vector<int>& edges);

// Simple path inside the forest from u to v, as an edge sequence starting at u.
// Empty when u == v. Throws if u and v lie in different trees.
std::vector<int> forest_path(const Multigraph& g, const std::vector<int>& forest, int u, int v);

// Unique cycle in forest + chord, beginning with the chord and then walking
// back through the forest to the chord's first endpoint.
std::vector<int> fundamental_cycle(const Multigraph& g, const std::vector<int>& forest, int chord);

// Checks that the edge sequence is a closed walk visiting no vertex twice.
bool is_simple_cycle(const Multigraph& g, const std::vector<int>& cycle);

std::vector<bool> to_mask(int size, const std::vector<int>& ids);
std::vector<int> from_mask(const std::vector<bool>& mask);

// Every connected 4-valent multigraph on exactly n vertices, one per
// isomorphism class. Loops come first (by vertex), then joining edges in
// lexicographic vertex-pair order; slots are filled in that order.
std::vector<Multigraph> four_valent_graphs(int n);

Multigraph parse_graph(std::string_view text);
std::string format_graph(const Multigraph& g);

}  // namespace momkit
