#include "fcomp/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include "fcomp/common_information.hpp"
#include "fcomp/error.hpp"
#include "fcomp/gf_graph.hpp"
#include "fcomp/rate_regions.hpp"

namespace fcomp {

namespace {

constexpr const char* kVersionLine = "# fcomp scenario csv v1";
constexpr const char* kColumnLine =
    "scenario,param,h_joint,h_f,h_k,h_kf,prop1_sum,prop2_sum,prop3_sum,"
    "prop4_sum,r_chi,r_helper,status";

struct RowValues {
  double h_joint = 0.0;
  double h_f = 0.0;
  double h_k = 0.0;
  double h_kf = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
  double r_chi = 0.0;
  double r_helper = 0.0;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s.erase(0, 1);  // fp dust below the printed scale
  return s;
}

// Status text shares the row with comma-separated values.
std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

// Reuses fixed nest cell lists under a new distribution: dead cells drop
// out, groups are rebuilt as the surviving components.
Nesting nesting_on_support(const std::vector<std::vector<Cell>>& chunks,
                           const JointPMF& j, const FunctionTable& f) {
  std::vector<std::vector<Cell>> live;
  for (const auto& chunk : chunks) {
    std::vector<Cell> cells;
    for (const Cell& c : chunk)
      if (j.in_support(c.row, c.col)) cells.push_back(c);
    if (!cells.empty()) live.push_back(std::move(cells));
  }
  return make_nesting(live, j, f);
}

RowValues distribution_row(const JointPMF& j, const FunctionTable& f,
                           const Nesting& n, const SolverOptions& opt) {
  RowValues v;
  v.h_joint = joint_entropy(j);
  v.h_f = function_entropy(f, j).second;
  v.h_k = gkw_entropy(j);
  v.h_kf = functional_ci_entropy(n, j, f).total;
  v.p1 = prop1_gkw_helper(j, f, opt).sum;
  v.p2 = prop2_joint_with_kf(j, f, n).sum;
  v.p3 = prop3_one_source(j, f, n, opt).sum;
  v.p4 = prop4_permutation_helper(j, f, opt).sum;
  v.r_chi = functional_region(j, f, opt).sum;
  v.r_helper = v.p1;
  return v;
}

using PointEval = std::function<RowValues(double)>;

PointEval make_distribution_eval(const SweepSpec& spec) {
  Instance base = spec.instance ? *spec.instance : fig3();
  if (!base.nesting)
    throw ValidationError("scenario " + spec.scenario +
                          " needs an instance with a nesting");
  auto f = std::make_shared<const FunctionTable>(base.f);
  auto chunks = std::make_shared<std::vector<std::vector<Cell>>>();
  for (const Nest& nest : base.nesting->nests) chunks->push_back(nest.cells);
  const std::size_t n1 = base.joint.rows() - 1;
  const std::size_t n2 = base.joint.cols() - 1;
  const SolverOptions opt = spec.solver;
  const double lambda = spec.lambda;
  const std::string id = spec.scenario;

  return [=](double p) {
    if (p < 0.0 || p > 1.0)
      throw ValidationError("success probability outside [0,1]");
    JointPMF j = id == "poisson-clumped"
                     ? poisson_clumped_joint(lambda, p, n1, n2)
                     : product_joint(binomial_pmf(n1, p),
                                     id == "binomial-lowrate"
                                         ? binomial_pmf(n2, 0.001)
                                         : binomial_pmf(n2, 1.0 - p));
    return distribution_row(j, *f, nesting_on_support(*chunks, j, *f), opt);
  };
}

PointEval make_kdelta_eval(const SweepSpec& spec) {
  const std::string name =
      spec.scenario == "kdelta-low" ? "example4" : "example5";
  const SolverOptions opt = spec.solver;
  return [=](double delta) {
    Instance inst = name == "example4" ? example4(delta) : example5(delta);
    Nesting n = greedy_nesting(inst.joint, inst.f, inst.f.range().size());
    RowValues v = distribution_row(inst.joint, inst.f, n, opt);
    KDeltaRates kd = kdelta_rates(name, delta, opt);
    v.r_chi = kd.chi.total;
    v.r_helper = kd.helper.total;
    return v;
  };
}

PointEval make_ks_eval(const SweepSpec& spec) {
  const std::string name =
      spec.scenario == "ks-petersen" ? "petersen" : "correlated_star";
  const SolverOptions opt = spec.solver;
  return [=](double p) {
    Instance inst = name == "petersen" ? petersen(p) : correlated_star(p);
    Nesting n = greedy_nesting(inst.joint, inst.f, inst.f.range().size());
    RowValues v = distribution_row(inst.joint, inst.f, n, opt);
    KSRates ks = ks_rates(name, p, opt);
    v.r_chi = ks.chi.total;
    v.r_helper = ks.helper.total;
    return v;
  };
}

// The uniform block family is closed form: every common part collapses to
// the block index, in-block coordinates are uniform, and the scheme pair is
// the fixed-length joint code against the index-first code.
PointEval make_zipf_eval(const SweepSpec& spec) {
  const std::vector<std::size_t> sizes = spec.zipf_sizes;
  if (sizes.empty())
    throw ValidationError("zipf-gain needs at least one block size");
  std::size_t n = 0;
  for (std::size_t s : sizes) {
    if (s == 0) throw ValidationError("zipf-gain block sizes must be positive");
    n += s;
  }
  return [=, total = n](double gamma) {
    Dist probs = zipf_pmf(sizes.size(), gamma);
    UniformSumRates u = uniform_sum_rates(total, sizes, probs);
    double within = 0.0;
    for (std::size_t k = 0; k < sizes.size(); ++k)
      within += probs[k] * std::log2(double(sizes[k]));
    RowValues v;
    v.h_joint = u.index_bits + 2.0 * within;
    v.h_f = v.h_k = v.h_kf = u.index_bits;
    v.p1 = v.p3 = v.p4 = u.index_bits;
    v.p2 = v.h_joint;
    v.r_chi = u.joint_rate;
    v.r_helper = u.helper_rate;
    return v;
  };
}

PointEval make_eval(const SweepSpec& spec) {
  const std::string& id = spec.scenario;
  if (id == "binomial-independent" || id == "poisson-clumped" ||
      id == "binomial-lowrate")
    return make_distribution_eval(spec);
  if (id == "kdelta-low" || id == "kdelta-high") return make_kdelta_eval(spec);
  if (id == "ks-petersen" || id == "ks-star") return make_ks_eval(spec);
  if (id == "zipf-gain") return make_zipf_eval(spec);
  std::string known;
  for (const std::string& s : scenario_names())
    known += (known.empty() ? "" : ", ") + s;
  throw ValidationError("unknown scenario " + id + "; expected one of " +
                        known);
}

std::string row_text(const std::string& id, double param,
                     const PointEval& eval) {
  std::ostringstream os;
  os << id << ',' << fixed6(param) << ',';
  try {
    RowValues v = eval(param);
    os << fixed6(v.h_joint) << ',' << fixed6(v.h_f) << ',' << fixed6(v.h_k)
       << ',' << fixed6(v.h_kf) << ',' << fixed6(v.p1) << ',' << fixed6(v.p2)
       << ',' << fixed6(v.p3) << ',' << fixed6(v.p4) << ',' << fixed6(v.r_chi)
       << ',' << fixed6(v.r_helper) << ",ok";
  } catch (const std::exception& e) {
    os << ",,,,,,,,,," << sanitize(e.what());
  }
  return os.str();
}

}  // namespace

Grid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3)
    throw ValidationError("grid must be start:stop:step, got \"" + text +
                          "\"");
  Grid g;
  double* slot[3] = {&g.start, &g.stop, &g.step};
  for (std::size_t i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      *slot[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw ValidationError("grid field \"" + parts[i] +
                            "\" is not a number");
    }
  }
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  if (!std::isfinite(g.start) || !std::isfinite(g.stop) ||
      !std::isfinite(g.step))
    throw ValidationError("grid bounds must be finite");
  if (g.step <= 0.0) throw ValidationError("grid step must be positive");
  if (g.stop < g.start) throw ValidationError("grid stop precedes start");
  std::vector<double> pts;
  const double slack = g.step * 1e-9;
  for (std::size_t i = 0;; ++i) {
    double v = g.start + double(i) * g.step;
    if (v > g.stop + slack) break;
    pts.push_back(v);
    if (pts.size() > 200000)
      throw ValidationError("grid has more than 200000 points");
  }
  return pts;
}

std::vector<std::string> scenario_names() {
  return {"binomial-independent", "poisson-clumped", "binomial-lowrate",
          "zipf-gain",            "kdelta-low",      "kdelta-high",
          "ks-petersen",          "ks-star"};
}

std::string scenario_csv_header() {
  return std::string(kVersionLine) + "\n" + kColumnLine;
}

std::string run_scenario(const SweepSpec& spec) {
  const std::vector<double> pts = grid_points(spec.grid);
  const PointEval eval = make_eval(spec);

  std::vector<std::string> rows(pts.size());
  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, pts.size());
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= pts.size()) return;
      rows[i] = row_text(spec.scenario, pts[i], eval);
    }
  };
  std::vector<std::future<void>> pool;
  for (std::size_t w = 1; w < workers; ++w)
    pool.push_back(std::async(std::launch::async, drain));
  drain();
  for (auto& fut : pool) fut.get();

  std::string out = scenario_csv_header() + "\n";
  for (const std::string& r : rows) out += r + "\n";

  if (!spec.out_path.empty()) {
    std::ofstream file(spec.out_path);
    if (!file) throw ValidationError("cannot write " + spec.out_path);
    file << out;
    if (!file.flush())
      throw ValidationError("failed writing " + spec.out_path);
  }
  return out;
}

}  // namespace fcomp
