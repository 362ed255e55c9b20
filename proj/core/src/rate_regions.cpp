#include "fcomp/rate_regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "fcomp/error.hpp"
#include "fcomp/function_table.hpp"
#include "fcomp/instances.hpp"

namespace fcomp {

namespace {

// Entropies of near-degenerate masses can come out a hair below zero; the
// summary fields are declared nonnegative, so snap the noise.
double clamp0(double v) { return v > -1e-12 && v < 0.0 ? 0.0 : v; }

void snap_nonnegative(RateRegionSummary& s) {
  s.r1 = clamp0(s.r1);
  s.r2 = clamp0(s.r2);
  s.helper_bits = clamp0(s.helper_bits);
  s.sum = clamp0(s.sum);
}

std::string fmt6(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

const ClassPartition& side(const GFGraph& g, int source) {
  return source == 1 ? g.classes1 : g.classes2;
}

std::size_t edge_class(const GFEdge& e, int source) {
  return source == 1 ? e.u : e.v;
}

// Unconditional graph rate of `full` plus the conditional graph rate of the
// other source. This is the chain order where `full` is sent outright.
double chain_total(const JointPMF& j, const FunctionTable& f, int full,
                   const SolverOptions& opt) {
  const int other = 3 - full;
  return graph_entropy(j, f, full, opt) +
         conditional_graph_entropy(j, f, other, opt).bits;
}

// The source's unconditional code for an edge subset: classes are pooled by
// the outcome they produce inside the subset (classes that stay outside keep
// their own symbol), and the rate is the entropy of the pooled global class
// masses. Throws when a class meets two outcomes inside the subset.
double pooled_outcome_rate(const GFGraph& g,
                           const std::vector<std::size_t>& edges, int source) {
  return pooled_class_code(g, edges, source).bits;
}

// Renormalized class-identity code over the classes touching the subset.
double identity_rate(const GFGraph& g, const std::vector<std::size_t>& edges,
                     int source) {
  const ClassPartition& cp = side(g, source);
  std::map<std::size_t, double> touched;
  for (std::size_t id : edges) {
    const std::size_t c = edge_class(g.edges[id], source);
    touched[c] = cp.class_mass[c];
  }
  Dist masses;
  for (const auto& [c, mass] : touched) masses.push_back(mass);
  return entropy(normalized(masses));
}

std::vector<std::vector<Cell>> piece_cells(const GFGraph& g,
                                           const GFDecomposition& dec) {
  std::vector<std::vector<Cell>> out;
  out.reserve(dec.pieces.size());
  for (const auto& piece : dec.pieces) {
    std::vector<Cell> cells;
    for (std::size_t id : piece) {
      const auto& extra = g.edges[id].cells;
      cells.insert(cells.end(), extra.begin(), extra.end());
    }
    std::sort(cells.begin(), cells.end());
    out.push_back(std::move(cells));
  }
  return out;
}

Instance kdelta_instance(const std::string& name, double delta) {
  if (name == "example4") return example4(delta);
  if (name == "example5") return example5(delta);
  throw ValidationError("kdelta_rates: unknown instance '" + name + "'");
}

double kdelta_chi_closed(const std::string& name, double delta) {
  if (name == "example4") {
    return std::log2(3.0) + (2.0 / 3.0) * binary_entropy(delta);
  }
  return std::log2(3.0) +
         (2.0 * binary_entropy(delta) +
          entropy({delta, delta, 1.0 - 2.0 * delta})) /
             3.0;
}

double kdelta_helper_closed(const std::string& name, double delta) {
  if (name == "example4") {
    return 2.0 * binary_entropy(delta / 3.0) + binary_entropy(1.0 / 3.0);
  }
  return 2.0 * entropy({delta / 3.0, delta / 3.0, 1.0 - 2.0 * delta / 3.0}) +
         binary_entropy(1.0 / 3.0);
}

void check_kdelta_range(const std::string& name, double delta,
                        const char* what) {
  if (name != "example4" && name != "example5") {
    throw ValidationError(std::string(what) + ": unknown instance '" + name +
                          "'");
  }
  const double hi = name == "example4" ? 1.0 : 0.5;
  if (!(delta > 0.0) || !(delta < hi)) {
    throw ValidationError(std::string(what) + ": delta " + fmt6(delta) +
                          " outside (0, " + fmt6(hi) + ")");
  }
}

}  // namespace

RateRegionSummary slepian_wolf(const JointPMF& j) {
  RateRegionSummary s;
  s.scheme = "slepian_wolf";
  s.r1 = conditional_entropy(j, 1);
  s.r2 = conditional_entropy(j, 2);
  s.sum = joint_entropy(j);
  s.notes = "corner rates for recovering the pair";
  snap_nonnegative(s);
  return s;
}

RateRegionSummary functional_region(const JointPMF& j, const FunctionTable& f,
                                    const SolverOptions& opt) {
  RateRegionSummary s;
  s.scheme = "functional_region";
  s.r1 = conditional_graph_entropy(j, f, 1, opt).bits;
  s.r2 = conditional_graph_entropy(j, f, 2, opt).bits;
  const double chain1 = graph_entropy(j, f, 1, opt) + s.r2;
  const double chain2 = graph_entropy(j, f, 2, opt) + s.r1;
  s.sum = std::min(chain1, chain2);
  const JointEntropyBounds b = joint_graph_entropy_bounds(j, f, opt);
  s.notes = "chains " + fmt6(chain1) + "/" + fmt6(chain2) + "; bracket " +
            fmt6(b.lower) + ".." + fmt6(b.upper) + ", split marginals " +
            fmt6(b.sum_of_marginals);
  snap_nonnegative(s);
  return s;
}

RateRegionSummary prop1_gkw_helper(const JointPMF& j, const FunctionTable& f,
                                   const SolverOptions& opt) {
  const GKWDecomposition dec = gkw_decompose(j);
  RateRegionSummary s;
  s.scheme = "prop1_gkw_helper";
  s.helper_bits = dec.bits;
  s.r1 = conditional_graph_entropy_given_index(j, f, 1, dec.components, opt);
  s.r2 = conditional_graph_entropy_given_index(j, f, 2, dec.components, opt);
  s.sum = s.helper_bits + s.r1 + s.r2;
  s.notes = std::to_string(dec.components.size()) + " components";
  snap_nonnegative(s);
  return s;
}

RateRegionSummary prop2_joint_with_kf(const JointPMF& j,
                                      const FunctionTable& f,
                                      const Nesting& n) {
  validate_nesting(n, j, f);
  const FunctionalCI ci = functional_ci_entropy(n, j, f);
  RateRegionSummary s;
  s.scheme = "prop2_joint_with_kf";
  s.helper_bits = ci.total;
  for (const Nest& nest : n.nests) {
    for (const auto& group : nest.groups) {
      const double mass = j.cell_mass(group);
      const JointPMF part = j.restricted(group);
      s.r1 += mass * marginal_entropy(part, 1);
      s.r2 += mass * marginal_entropy(part, 2);
    }
  }
  s.sum = s.helper_bits + s.r1 + s.r2;
  s.notes = "pair recovery given (nest, group)";
  snap_nonnegative(s);
  return s;
}

std::array<RateRegionSummary, 2> prop3_orders(const Nesting& n,
                                              const JointPMF& j,
                                              const FunctionTable& f,
                                              const SolverOptions& opt) {
  validate_nesting(n, j, f);
  const FunctionalCI ci = functional_ci_entropy(n, j, f);
  const NestMarginalRates rates = nest_marginal_rates(n, j, f, opt);
  double dot1 = 0.0;
  double dot2 = 0.0;
  for (std::size_t i = 0; i < ci.nest_masses.size(); ++i) {
    dot1 += ci.nest_masses[i] * rates.rate1[i];
    dot2 += ci.nest_masses[i] * rates.rate2[i];
  }
  std::array<RateRegionSummary, 2> out;
  out[0].scheme = "prop3_source1_sends";
  out[0].r1 = dot1;
  out[0].r2 = ci.index_bits;
  out[0].sum = dot1 + ci.index_bits;
  out[0].notes = "source 2 announces the nest index";
  out[1].scheme = "prop3_source2_sends";
  out[1].r1 = ci.index_bits;
  out[1].r2 = dot2;
  out[1].sum = dot2 + ci.index_bits;
  out[1].notes = "source 1 announces the nest index";
  snap_nonnegative(out[0]);
  snap_nonnegative(out[1]);
  return out;
}

RateRegionSummary prop3_one_source(const JointPMF& j, const FunctionTable& f,
                                   const Nesting& n,
                                   const SolverOptions& opt) {
  const auto orders = prop3_orders(n, j, f, opt);
  RateRegionSummary s = orders[orders[1].sum < orders[0].sum ? 1 : 0];
  s.notes += "; other order " +
             fmt6(orders[orders[1].sum < orders[0].sum ? 0 : 1].sum);
  std::string marginal_side = s.scheme == "prop3_source1_sends" ? "1" : "2";
  s.scheme = "prop3_one_source";
  s.notes = "marginal rates on source " + marginal_side + "; " + s.notes;
  return s;
}

std::array<RateRegionSummary, 2> prop4_orders(const JointPMF& j,
                                              const FunctionTable& f,
                                              const SolverOptions& opt) {
  const GFGraph g = build_gf(j, f);
  const BipartitionScheme bp = bipartition_scheme(g);
  const auto pieces = piece_cells(g, bp.decomposition);
  std::array<RateRegionSummary, 2> out;
  out[0].scheme = "prop4_source1_in_component";
  out[0].helper_bits = bp.bits;
  out[0].r1 = conditional_graph_entropy_given_index(j, f, 1, pieces, opt);
  out[0].r2 = conditional_graph_entropy(j, f, 2, opt).bits;
  out[0].sum = out[0].helper_bits + out[0].r1 + out[0].r2;
  out[0].notes = "source 2 codes against source 1";
  out[1].scheme = "prop4_source2_in_component";
  out[1].helper_bits = bp.bits;
  out[1].r1 = conditional_graph_entropy(j, f, 1, opt).bits;
  out[1].r2 = conditional_graph_entropy_given_index(j, f, 2, pieces, opt);
  out[1].sum = out[1].helper_bits + out[1].r1 + out[1].r2;
  out[1].notes = "source 1 codes against source 2";
  snap_nonnegative(out[0]);
  snap_nonnegative(out[1]);
  return out;
}

RateRegionSummary prop4_permutation_helper(const JointPMF& j,
                                           const FunctionTable& f,
                                           const SolverOptions& opt) {
  const auto orders = prop4_orders(j, f, opt);
  const bool second = orders[1].sum < orders[0].sum;
  RateRegionSummary s = orders[second ? 1 : 0];
  s.notes += "; other order " + fmt6(orders[second ? 0 : 1].sum);
  s.scheme = "prop4_permutation_helper";
  return s;
}

KDeltaRates kdelta_rates(const std::string& instance, double delta,
                         const SolverOptions& opt) {
  const Instance inst = kdelta_instance(instance, delta);
  const JointPMF& j = inst.joint;
  const FunctionTable& f = inst.f;

  KDeltaRates r;
  r.h_f = function_entropy(f, j).second;
  const double marg1 = graph_entropy(j, f, 1, opt);
  const double cond2 = conditional_graph_entropy(j, f, 2, opt).bits;
  r.chi.scheme = "kdelta_chi";
  r.chi.source_bits = {marg1, cond2};
  r.chi.total = marg1 + cond2;
  r.chi_alt = chain_total(j, f, 2, opt);

  const GFGraph g = build_gf(j, f);
  const LowProbEdgeScheme lp = low_prob_edge_scheme(g, inst.peel_groups);
  std::vector<std::size_t> residual;
  for (std::size_t p = inst.peel_groups.size();
       p < lp.decomposition.pieces.size(); ++p) {
    const auto& piece = lp.decomposition.pieces[p];
    residual.insert(residual.end(), piece.begin(), piece.end());
  }
  r.helper.scheme = "kdelta_helper";
  r.helper.helper_bits = lp.bits;
  r.helper.source_bits = {pooled_outcome_rate(g, residual, 1), 0.0};
  r.helper.total = lp.bits + r.helper.source_bits[0];

  r.chi_closed = kdelta_chi_closed(instance, delta);
  r.helper_closed = kdelta_helper_closed(instance, delta);
  return r;
}

std::optional<double> kdelta_crossover(const std::string& instance, double lo,
                                       double hi, double tol) {
  check_kdelta_range(instance, lo, "kdelta_crossover");
  check_kdelta_range(instance, hi, "kdelta_crossover");
  if (!(lo < hi)) {
    throw ValidationError("kdelta_crossover: empty bracket [" + fmt6(lo) +
                          ", " + fmt6(hi) + "]");
  }
  const auto gap = [&](double d) {
    return kdelta_chi_closed(instance, d) - kdelta_helper_closed(instance, d);
  };
  double glo = gap(lo);
  double ghi = gap(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gmid = gap(mid);
    if (gmid == 0.0) return mid;
    if ((gmid > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

KSRates ks_rates(const std::string& instance, double p,
                 const SolverOptions& opt) {
  Instance inst = [&] {
    if (instance == "petersen") return petersen(p);
    if (instance == "correlated_star") return correlated_star(p);
    throw ValidationError("ks_rates: unknown instance '" + instance + "'");
  }();
  const JointPMF& j = inst.joint;
  const FunctionTable& f = inst.f;

  KSRates r;
  r.h_f = function_entropy(f, j).second;
  r.chains = {chain_total(j, f, 1, opt), chain_total(j, f, 2, opt)};
  const int full = r.chains[1] < r.chains[0] ? 2 : 1;
  r.chi.scheme = "ks_chi";
  r.chi.source_bits = {graph_entropy(j, f, full, opt),
                       conditional_graph_entropy(j, f, 3 - full, opt).bits};
  r.chi.total = std::min(r.chains[0], r.chains[1]);
  const GFGraph g = build_gf(j, f);
  const StructureSplitScheme split = structure_split_scheme(g, inst.peel);
  r.hks = split.bits;
  for (int l = 0; l < 2; ++l) {
    r.c1_rate[l] = pooled_outcome_rate(g, split.decomposition.pieces[0], l + 1);
    r.c2_rate[l] = identity_rate(g, split.decomposition.pieces[1], l + 1);
  }
  const int sender = r.c1_rate[1] < r.c1_rate[0] ? 1 : 0;
  r.helper.scheme = "ks_helper";
  r.helper.helper_bits = r.hks;
  r.helper.source_bits = {sender == 0 ? r.c1_rate[0] : 0.0,
                          sender == 1 ? r.c1_rate[1] : 0.0};
  r.helper.total = r.hks + r.c1_rate[sender];

  const double h1 = entropy({p, p, 1.0 - 2.0 * p});
  if (instance == "petersen") {
    const double v0 = 1.0 - 1.5 * p;
    const double v2 = p * p / (1.0 - p) + 0.5 * p;
    const double h2 = entropy({v0, p * (1.0 - 2.0 * p) / (1.0 - p), v2});
    r.chains_closed = {p * binary_entropy(p / (1.0 - p)) + p + h1,
                       v0 * binary_entropy(p / (2.0 - 3.0 * p)) +
                           v2 * binary_entropy((1.0 - p) / (1.0 + p)) + h2};
    r.hks_closed = binary_entropy(v2);
    r.c1_rate_closed = {h1, h2};
    r.c2_rate_closed = {1.0, binary_entropy(v0 / (v0 + v2))};
  } else {
    const double v1 = p * p + p * p / (1.0 - p);
    const double v2 = p * (1.0 - 2.0 * p) + (1.0 - 2.0 * p) / (1.0 - p);
    const double h2 = entropy({p * p, v1, v2});
    r.chains_closed = {
        p * binary_entropy(2.0 * p) + p * binary_entropy(p / (1.0 - p)) + h1,
        v1 * binary_entropy(1.0 / (2.0 - p)) +
            v2 * binary_entropy(1.0 / (1.0 + p - p * p)) + h2};
    r.hks_closed = binary_entropy(2.0 * p * p + (1.0 - 2.0 * p) / (1.0 - p));
    r.c1_rate_closed = {binary_entropy(p), binary_entropy(v2)};
    r.c2_rate_closed = {1.0, binary_entropy(v1 / (v1 + v2))};
  }
  r.chi_closed = std::min(r.chains_closed[0], r.chains_closed[1]);
  r.helper_closed =
      std::min(r.c1_rate_closed[0], r.c1_rate_closed[1]) + r.hks_closed;
  return r;
}

std::string rate_csv_header() {
  return "scheme,params,R1,R2,R_h,sum,H_f,H_joint";
}

std::string rate_csv_row(const RateRegionSummary& s, const std::string& params,
                         double h_f, double h_joint) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << s.scheme << ',' << params << ',' << s.r1 << ',' << s.r2 << ','
     << s.helper_bits << ',' << s.sum << ',' << h_f << ',' << h_joint;
  return os.str();
}

}  // namespace fcomp
