#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fcomp/function_table.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

// Bipartite outcome graph: one part per source, one vertex per equivalence
// class, one edge per class pair with positive joint mass.  Each edge carries
// the aggregated mass, the (unique) function outcome, and the support cells
// it absorbed.
struct GFEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double mass = 0.0;
  Label outcome;
  std::vector<Cell> cells;
};

struct GFGraph {
  ClassPartition classes1;
  ClassPartition classes2;
  std::vector<GFEdge> edges;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t parts1() const { return classes1.classes.size(); }
  std::size_t parts2() const { return classes2.classes.size(); }
  std::size_t find_edge(std::size_t u, std::size_t v) const;
};

GFGraph build_gf(const JointPMF& j, const FunctionTable& f);

// Defensive consistency check (class pairs unique, outcomes single-valued,
// masses positive and summing to one).  build_gf output always passes; the
// check guards hand-assembled or deserialized graphs.
void validate_gf(const GFGraph& g);

// True when the source alphabets coincide, the two parts induce the same
// class partition, and every edge has a mirror edge with the same outcome.
// Mass asymmetry is allowed.
bool is_symmetric(const GFGraph& g, const JointPMF& j);

// Edge-disjoint split of the graph; pieces index into GFGraph::edges and
// their masses partition the total.
struct GFDecomposition {
  std::vector<std::vector<std::size_t>> pieces;
  std::vector<double> masses;
};

struct SumRateReport {
  std::string scheme;
  double helper_bits = 0.0;
  std::vector<double> source_bits;
  double total = 0.0;
};

// Helper index = connected component of the bipartite graph.
struct BipartitionScheme {
  GFDecomposition decomposition;
  double bits = 0.0;
  std::vector<std::size_t> component_of_class1;
  std::vector<std::size_t> component_of_class2;
};

BipartitionScheme bipartition_scheme(const GFGraph& g);

// Sum rates for a union of K uniform blocks: joint encoding spends
// 2*log2(n) per pair, while announcing the block first drops the per-source
// cost to log2 of the block size.
struct UniformSumRates {
  double joint_rate = 0.0;     // two sources, no helper
  double helper_rate = 0.0;    // block index plus in-block coordinates
  double gain = 0.0;           // joint_rate - helper_rate
  double index_bits = 0.0;     // entropy of the block index
  bool gain_within_index_bits = false;
};

UniformSumRates uniform_sum_rates(std::size_t n,
                                  const std::vector<std::size_t>& sizes,
                                  const std::vector<double>& probs);

using PeelEdge = std::pair<std::size_t, std::size_t>;
using PeelGroups = std::vector<std::vector<PeelEdge>>;

// Helper announces, per peel group, which of the group's edges (if any) the
// current draw lies on.  Groups are explicit because the same peel set can
// be signalled with independent per-edge flags or with one indicator per
// mirror pair, at different rates.
struct LowProbEdgeScheme {
  GFDecomposition decomposition;  // peel groups first, then residual components
  double bits = 0.0;              // sum of per-group indicator entropies
  double joint_index_bits = 0.0;  // entropy of the combined indicator
  std::size_t residual_components = 0;
  bool disconnects = false;
};

LowProbEdgeScheme low_prob_edge_scheme(const GFGraph& g,
                                       const PeelGroups& peel);

// Helper announces one bit: whether the draw lies on the peeled edge set C2.
struct StructureSplitScheme {
  GFDecomposition decomposition;  // piece 0 = remainder C1, piece 1 = C2
  double bits = 0.0;
  std::array<double, 2> piece_mass{};
  // [piece][source]: the source's class alone determines the outcome inside
  // that piece.
  std::array<std::array<bool, 2>, 2> one_source_sufficient{};
};

StructureSplitScheme structure_split_scheme(const GFGraph& g,
                                            const std::vector<PeelEdge>& peel);

// Class-level code against one edge subset: classes meeting an outcome
// inside the subset collapse into one color per outcome, every other class
// keeps its own color. bits is the entropy of the global class masses under
// that pooling. Rejects subsets where a class meets two outcomes.
struct PooledClassCode {
  std::vector<std::size_t> color_of_class;
  std::size_t color_count = 0;
  Dist color_mass;
  double bits = 0.0;
};

PooledClassCode pooled_class_code(const GFGraph& g,
                                  const std::vector<std::size_t>& edges,
                                  int source);

// Edges with mass strictly below the threshold, in edge order.
std::vector<PeelEdge> mass_threshold_peel(const GFGraph& g, double threshold);

std::string gf_to_json(const GFGraph& g, const JointPMF& j);
std::string peel_to_json(const PeelGroups& groups);
PeelGroups peel_from_json(const std::string& text);

}  // namespace fcomp
