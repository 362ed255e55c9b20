#pragma once

#include <array>
#include <optional>
#include <string>

#include "fcomp/common_information.hpp"
#include "fcomp/gf_graph.hpp"
#include "fcomp/graph_entropy.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

// One corner of a rate region: marginal lower bounds, helper rate, and the
// sum bound. Summaries are lower-bound records, not feasibility oracles;
// callers pair them with the H(f) floor and the Slepian-Wolf ceiling.
struct RateRegionSummary {
  std::string scheme;
  double r1 = 0.0;
  double r2 = 0.0;
  double helper_bits = 0.0;
  double sum = 0.0;
  std::string notes;
};

// Corner rates for lossless recovery of the pair without a helper.
RateRegionSummary slepian_wolf(const JointPMF& j);

// Coloring-based computation of f without a helper. Marginals are the
// conditional graph entropies (decoder holds the other source). The sum is
// the cheaper chain order, marginal entropy plus the conditional rate of
// the remaining source; the notes record the joint graph-entropy bracket.
RateRegionSummary functional_region(const JointPMF& j, const FunctionTable& f,
                                    const SolverOptions& opt = {});

// Helper announces the classical common part; each source then codes its
// confusability graph restricted to the announced component.
RateRegionSummary prop1_gkw_helper(const JointPMF& j, const FunctionTable& f,
                                   const SolverOptions& opt = {});

// Helper announces the refined (nest, group) index; sources then recover
// their exact symbols with plain conditional coding. Decodes the pair.
RateRegionSummary prop2_joint_with_kf(const JointPMF& j,
                                      const FunctionTable& f,
                                      const Nesting& n);

// Helper-free nested scheme: one source announces the nest index at H(V),
// the other sends its per-nest marginal rate. Index 0 lets source 1 carry
// the marginal rates, index 1 swaps the roles.
std::array<RateRegionSummary, 2> prop3_orders(const Nesting& n,
                                              const JointPMF& j,
                                              const FunctionTable& f,
                                              const SolverOptions& opt = {});

// The cheaper of the two role assignments; notes record the other one.
RateRegionSummary prop3_one_source(const JointPMF& j, const FunctionTable& f,
                                   const Nesting& n,
                                   const SolverOptions& opt = {});

// Bipartition helper over the outcome graph: H(K_B) plus one source coding
// inside its component and the other coding against its counterpart.
std::array<RateRegionSummary, 2> prop4_orders(const JointPMF& j,
                                              const FunctionTable& f,
                                              const SolverOptions& opt = {});

RateRegionSummary prop4_permutation_helper(const JointPMF& j,
                                           const FunctionTable& f,
                                           const SolverOptions& opt = {});

// Sum rates for the low-mass edge instances (example4, example5): the
// coloring chain against the indicator-helper scheme, each evaluated from
// the closed form and from first principles on the built outcome graph.
struct KDeltaRates {
  SumRateReport chi;     // marginal entropy of source 1 + conditional rate of source 2
  SumRateReport helper;  // peel indicators + residual outcome code
  double chi_closed = 0.0;
  double helper_closed = 0.0;
  double chi_alt = 0.0;  // opposite chain order
  double h_f = 0.0;      // fundamental floor
};

KDeltaRates kdelta_rates(const std::string& instance, double delta,
                         const SolverOptions& opt = {});

// Root of chi(delta) = helper(delta) inside [lo, hi] by bisection on the
// closed forms; empty when the difference has one sign on the bracket.
std::optional<double> kdelta_crossover(const std::string& instance, double lo,
                                       double hi, double tol = 1e-10);

// Sum rates for the structure-split instances (petersen, correlated_star).
// chains[l] sends source l in full next to the conditional rate of the
// other source; c1/c2 are the per-piece source rates, where the remainder
// piece pools classes by outcome under global masses and the peeled piece
// distinguishes its classes under renormalized masses.
struct KSRates {
  double h_f = 0.0;
  SumRateReport chi;     // cheaper chain order
  SumRateReport helper;  // min remainder-piece rate + H(K_S)
  std::array<double, 2> chains{};
  std::array<double, 2> chains_closed{};
  double chi_closed = 0.0;
  double hks = 0.0;
  double hks_closed = 0.0;
  std::array<double, 2> c1_rate{};
  std::array<double, 2> c2_rate{};
  std::array<double, 2> c1_rate_closed{};
  std::array<double, 2> c2_rate_closed{};
  double helper_closed = 0.0;
};

KSRates ks_rates(const std::string& instance, double p,
                 const SolverOptions& opt = {});

std::string rate_csv_header();
std::string rate_csv_row(const RateRegionSummary& s, const std::string& params,
                         double h_f, double h_joint);

}  // namespace fcomp
