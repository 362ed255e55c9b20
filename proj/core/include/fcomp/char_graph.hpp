#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fcomp/function_table.hpp"
#include "fcomp/label.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

// Two confusability rules appear in the quantities we compute. For
// single-source (unconditional) graph entropies, colorings and the outcome
// graph, vertices are confusable only when they have identical positive-mass
// counterpart sets and agree on them; any support mismatch separates them
// (support_profile). Conditional graph entropies given the other source use
// the weaker rule that only compares shared counterparts
// (shared_counterpart).
enum class EdgeRule { support_profile, shared_counterpart };

class CharGraph {
 public:
  CharGraph(Alphabet vertices, std::vector<std::pair<std::size_t, std::size_t>> edges,
            int source = 0, EdgeRule rule = EdgeRule::support_profile);

  std::size_t size() const { return vertices_.size(); }
  const Alphabet& vertices() const { return vertices_; }
  int source() const { return source_; }
  EdgeRule rule() const { return rule_; }

  bool edge(std::size_t u, std::size_t v) const { return adj_[u * size() + v]; }
  std::size_t edge_count() const { return edge_count_; }
  std::vector<std::size_t> neighbors(std::size_t u) const;

  // "u v" per line with a vertex-label header, for fixtures and debugging.
  std::string to_edge_list() const;

 private:
  Alphabet vertices_;
  std::vector<bool> adj_;
  std::size_t edge_count_ = 0;
  int source_ = 0;
  EdgeRule rule_ = EdgeRule::support_profile;
};

CharGraph build_characteristic_graph(const JointPMF& j, const FunctionTable& f,
                                     int source,
                                     EdgeRule rule = EdgeRule::support_profile);

// n-fold confusability graph over i.i.d. tuples. Vertex count is capped.
struct PowerGraphOptions {
  std::size_t max_vertices = 40000;
};
CharGraph power_graph(const CharGraph& g, const JointPMF& j,
                      const FunctionTable& f, std::size_t n,
                      const PowerGraphOptions& opt = {});

// Product masses aligned with power_graph's vertex order.
Dist power_masses(const Dist& base, std::size_t n);

std::vector<std::vector<std::size_t>> maximal_independent_sets(
    const CharGraph& g, std::size_t cap = 1000000);

enum class ColoringMode { exact, greedy };

struct Coloring {
  std::vector<std::size_t> color_of;  // color ids are dense, first-use ordered
  std::size_t color_count = 0;
  double bits = 0.0;
  bool exact = false;
};

struct ColoringOptions {
  std::size_t node_budget = 2000000;
};

Coloring min_entropy_coloring(const CharGraph& g, const Dist& p,
                              ColoringMode mode = ColoringMode::exact,
                              const ColoringOptions& opt = {});

bool is_proper(const CharGraph& g, const std::vector<std::size_t>& color_of);

// (1/n) H(c(X^n)) for the minimum-entropy coloring of the n-th power graph.
double chromatic_entropy_rate(const JointPMF& j, const FunctionTable& f,
                              int source, std::size_t n);

// Non-adjacent vertices with identical neighborhoods, i.e. the color classes
// of the unique coarsest proper coloring when the graph is complete
// multipartite. Returns one sorted class list per class, ordered by smallest
// member, plus a flag telling whether the graph is complete multipartite.
struct TwinClasses {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  bool complete_multipartite = false;
};
TwinClasses twin_classes(const CharGraph& g);

}  // namespace fcomp
