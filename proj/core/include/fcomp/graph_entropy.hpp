#pragma once

#include <cstddef>
#include <vector>

#include "fcomp/char_graph.hpp"
#include "fcomp/function_table.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

struct SolverOptions {
  std::size_t max_iters = 10000;
  double tol = 1e-10;          // relative change of the objective
  bool force_iterative = false;
  std::size_t mis_cap = 1000000;
};

struct GraphEntropyResult {
  double bits = 0.0;
  std::size_t iterations = 0;
  bool closed_form = false;  // solved through the partition shortcut
  std::vector<std::vector<std::size_t>> family;  // maximal independent sets
};

// min I(X; W) over channels from vertices to the maximal independent sets
// containing them. Solved in closed form when the sets partition the
// vertices, otherwise by alternating minimization.
GraphEntropyResult koerner_entropy(const CharGraph& g, const Dist& p,
                                   const SolverOptions& opt = {});

// Convenience wrapper: confusability graph of `source` plus its marginal.
double graph_entropy(const JointPMF& j, const FunctionTable& f, int source,
                     const SolverOptions& opt = {});

// min I(W; X | Y) with W drawn from the maximal independent sets of the
// shared-counterpart graph of `source`, Y being the other source.
GraphEntropyResult conditional_graph_entropy(const JointPMF& j,
                                             const FunctionTable& f, int source,
                                             const SolverOptions& opt = {});

// Average graph entropy after an index splits the instance into pieces:
// sum over pieces of P(piece) * H_G(restriction), where each piece gets its
// own confusability graph. Pieces must tile the support exactly.
double conditional_graph_entropy_given_index(
    const JointPMF& j, const FunctionTable& f, int source,
    const std::vector<std::vector<Cell>>& pieces, const SolverOptions& opt = {});

struct JointEntropyBounds {
  double lower = 0.0;             // H(f(X1, X2))
  double upper = 0.0;             // joint entropy of the two class labels
  double sum_of_marginals = 0.0;  // single-source graph entropies added up
};
JointEntropyBounds joint_graph_entropy_bounds(const JointPMF& j,
                                              const FunctionTable& f,
                                              const SolverOptions& opt = {});

}  // namespace fcomp
