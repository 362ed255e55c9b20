#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fcomp/function_table.hpp"
#include "fcomp/graph_entropy.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

// Connected components of the support when cells sharing a row or column are
// linked. The component index is the classical common part of the pair: both
// sides can compute it without communicating.
struct GKWDecomposition {
  std::vector<std::vector<Cell>> components;  // row-major cells per component
  Dist masses;
  double bits = 0.0;
  // Component id per symbol, or npos for symbols with no support.
  std::vector<std::size_t> component_of_row;
  std::vector<std::size_t> component_of_col;
  static constexpr std::size_t npos = std::size_t(-1);
};

GKWDecomposition gkw_decompose(const JointPMF& j);
double gkw_entropy(const JointPMF& j);

// A nesting splits the support into nests; inside a nest, cells are pooled
// into groups that share an outcome. The pair (nest index, group) is the
// refined common part driven by the function.
struct Nest {
  std::vector<Cell> cells;
  std::vector<std::vector<Cell>> groups;
};

struct Nesting {
  std::vector<Nest> nests;
};

// Checks that nests tile the support, that groups tile each nest, and that
// every group maps to a single outcome.
void validate_nesting(const Nesting& n, const JointPMF& j,
                      const FunctionTable& f);

// Builds a nesting from bare nest cell lists; groups default to the
// connected components inside each nest. Validates the result, so nests
// whose components mix outcomes are rejected here.
Nesting make_nesting(const std::vector<std::vector<Cell>>& nest_cells,
                     const JointPMF& j, const FunctionTable& f);

struct FunctionalCI {
  double index_bits = 0.0;   // H(V), the nest index
  double within_bits = 0.0;  // expected group entropy inside the nest
  double total = 0.0;        // H(V) plus the within part
  Dist nest_masses;
};

FunctionalCI functional_ci_entropy(const Nesting& n, const JointPMF& j,
                                   const FunctionTable& f);

// Per-nest encoder rates for announcing the group. When the groups of a nest
// touch disjoint symbol sets on a source, the group is read off that source
// directly and the rate is the entropy of the group split of its marginal.
// Otherwise the source codes for the group through its confusability graph
// on the nest-restricted instance.
struct NestMarginalRates {
  std::vector<double> rate1;  // per nest, source 1
  std::vector<double> rate2;
};
NestMarginalRates nest_marginal_rates(const Nesting& n, const JointPMF& j,
                                      const FunctionTable& f,
                                      const SolverOptions& opt = {});

// One nest per outcome, merging row/column-disjoint nests if the cap is
// exceeded. Throws when no safe merge exists.
Nesting greedy_nesting(const JointPMF& j, const FunctionTable& f,
                       std::size_t max_nests = 4);

struct NestSearchOptions {
  std::size_t max_nests = 4;
  std::size_t budget = 2000000;  // candidate partitions examined
};

struct NestSearchResult {
  Nesting nesting;
  FunctionalCI value;
  bool complete = false;  // enumeration finished within budget
  std::size_t examined = 0;
};

// Exhaustive search over support partitions into at most max_nests nests,
// keeping only nestings whose per-nest rows and columns are outcome-pure.
// Ranks by highest total, then lowest index entropy, then fewest nests.
NestSearchResult nest_search(const JointPMF& j, const FunctionTable& f,
                             const NestSearchOptions& opt = {});

Nesting nesting_from_json(const std::string& text, const JointPMF& j,
                          const FunctionTable& f);
std::string nesting_to_json(const Nesting& n, const JointPMF& j);

}  // namespace fcomp
