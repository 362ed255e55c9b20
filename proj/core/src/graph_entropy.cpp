#include "fcomp/graph_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "fcomp/error.hpp"

namespace fcomp {

namespace {

struct Family {
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::vector<std::size_t>> sets_of;  // set indices per vertex
  bool partition = false;
};

Family build_family(const CharGraph& g, std::size_t cap) {
  Family fam;
  fam.sets = maximal_independent_sets(g, cap);
  fam.sets_of.assign(g.size(), {});
  for (std::size_t i = 0; i < fam.sets.size(); ++i)
    for (std::size_t v : fam.sets[i]) fam.sets_of[v].push_back(i);
  fam.partition = true;
  for (const auto& s : fam.sets_of)
    if (s.size() != 1) fam.partition = false;
  return fam;
}

using Channel = std::vector<std::vector<double>>;  // q[x][slot], slot-aligned

Channel uniform_channel(const Family& fam) {
  Channel q(fam.sets_of.size());
  for (std::size_t x = 0; x < q.size(); ++x)
    q[x].assign(fam.sets_of[x].size(), 1.0 / double(fam.sets_of[x].size()));
  return q;
}

double rel_change(double prev, double cur) {
  return std::abs(prev - cur) / std::max(std::abs(cur), 1e-15);
}

}  // namespace

GraphEntropyResult koerner_entropy(const CharGraph& g, const Dist& p,
                                   const SolverOptions& opt) {
  if (p.size() != g.size())
    throw ValidationError("mass vector does not match vertex count");
  Family fam = build_family(g, opt.mis_cap);

  GraphEntropyResult res;
  res.family = fam.sets;

  if (fam.partition && !opt.force_iterative) {
    Dist m(fam.sets.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) m[fam.sets_of[x][0]] += p[x];
    res.bits = entropy(m);
    res.closed_form = true;
    return res;
  }

  Channel q = uniform_channel(fam);
  double prev = std::numeric_limits<double>::quiet_NaN();
  double cur = 0.0;
  double rel = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 1; iter <= opt.max_iters; ++iter) {
    Dist m(fam.sets.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x)
      for (std::size_t s = 0; s < q[x].size(); ++s)
        m[fam.sets_of[x][s]] += p[x] * q[x][s];

    cur = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (p[x] <= 0.0) continue;
      for (std::size_t s = 0; s < q[x].size(); ++s)
        if (q[x][s] > 0.0)
          cur += p[x] * q[x][s] * std::log2(q[x][s] / m[fam.sets_of[x][s]]);
    }

    if (!std::isnan(prev)) {
      rel = rel_change(prev, cur);
      if (rel < opt.tol) {
        res.bits = cur;
        res.iterations = iter;
        return res;
      }
    }
    prev = cur;

    for (std::size_t x = 0; x < g.size(); ++x) {
      double z = 0.0;
      for (std::size_t s = 0; s < q[x].size(); ++s) z += m[fam.sets_of[x][s]];
      if (z <= 0.0) continue;  // zero-mass vertex, keep the current split
      for (std::size_t s = 0; s < q[x].size(); ++s)
        q[x][s] = m[fam.sets_of[x][s]] / z;
    }
  }
  throw ConvergenceFailure("graph entropy solver did not reach tolerance", cur,
                           rel, opt.max_iters);
}

double graph_entropy(const JointPMF& j, const FunctionTable& f, int source,
                     const SolverOptions& opt) {
  CharGraph g = build_characteristic_graph(j, f, source);
  return koerner_entropy(g, marginal(j, source), opt).bits;
}

GraphEntropyResult conditional_graph_entropy(const JointPMF& j,
                                             const FunctionTable& f, int source,
                                             const SolverOptions& opt) {
  if (source != 1 && source != 2)
    throw ValidationError("source must be 1 or 2");
  CharGraph g =
      build_characteristic_graph(j, f, source, EdgeRule::shared_counterpart);
  Family fam = build_family(g, opt.mis_cap);

  std::size_t nx = g.size();
  std::size_t ny = source == 1 ? j.cols() : j.rows();
  auto pxy = [&](std::size_t x, std::size_t y) {
    return source == 1 ? j.p(x, y) : j.p(y, x);
  };
  Dist py(ny, 0.0), px(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      py[y] += pxy(x, y);
      px[x] += pxy(x, y);
    }

  GraphEntropyResult res;
  res.family = fam.sets;

  if (fam.partition && !opt.force_iterative) {
    double bits = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      if (py[y] <= 0.0) continue;
      Dist m(fam.sets.size(), 0.0);
      for (std::size_t x = 0; x < nx; ++x)
        m[fam.sets_of[x][0]] += pxy(x, y) / py[y];
      bits += py[y] * entropy(m);
    }
    res.bits = bits;
    res.closed_form = true;
    return res;
  }

  Channel q = uniform_channel(fam);
  double prev = std::numeric_limits<double>::quiet_NaN();
  double cur = 0.0;
  double rel = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 1; iter <= opt.max_iters; ++iter) {
    // m[y][i] = sum_x p(x|y) q(i|x)
    std::vector<Dist> m(ny, Dist(fam.sets.size(), 0.0));
    for (std::size_t y = 0; y < ny; ++y) {
      if (py[y] <= 0.0) continue;
      for (std::size_t x = 0; x < nx; ++x) {
        double c = pxy(x, y) / py[y];
        if (c <= 0.0) continue;
        for (std::size_t s = 0; s < q[x].size(); ++s)
          m[y][fam.sets_of[x][s]] += c * q[x][s];
      }
    }

    cur = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        double w = pxy(x, y);
        if (w <= 0.0) continue;
        for (std::size_t s = 0; s < q[x].size(); ++s)
          if (q[x][s] > 0.0)
            cur += w * q[x][s] * std::log2(q[x][s] / m[y][fam.sets_of[x][s]]);
      }

    if (!std::isnan(prev)) {
      rel = rel_change(prev, cur);
      if (rel < opt.tol) {
        res.bits = cur;
        res.iterations = iter;
        return res;
      }
    }
    prev = cur;

    for (std::size_t x = 0; x < nx; ++x) {
      if (px[x] <= 0.0) continue;
      std::vector<double> lnw(q[x].size(), 0.0);
      bool dead;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < q[x].size(); ++s) {
        dead = false;
        for (std::size_t y = 0; y < ny; ++y) {
          double c = pxy(x, y) / px[x];
          if (c <= 0.0) continue;
          double my = m[y][fam.sets_of[x][s]];
          if (my <= 0.0) {
            dead = true;
            break;
          }
          lnw[s] += c * std::log(my);
        }
        if (dead) lnw[s] = -std::numeric_limits<double>::infinity();
        top = std::max(top, lnw[s]);
      }
      if (!std::isfinite(top)) continue;
      double z = 0.0;
      for (std::size_t s = 0; s < q[x].size(); ++s) {
        q[x][s] = std::isfinite(lnw[s]) ? std::exp(lnw[s] - top) : 0.0;
        z += q[x][s];
      }
      for (double& v : q[x]) v /= z;
    }
  }
  throw ConvergenceFailure(
      "conditional graph entropy solver did not reach tolerance", cur, rel,
      opt.max_iters);
}

double conditional_graph_entropy_given_index(
    const JointPMF& j, const FunctionTable& f, int source,
    const std::vector<std::vector<Cell>>& pieces, const SolverOptions& opt) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t covered = 0;
  for (const auto& piece : pieces)
    for (const Cell& c : piece) {
      if (c.row >= j.rows() || c.col >= j.cols())
        throw ValidationError("piece cell outside the joint alphabet");
      if (!j.in_support(c.row, c.col))
        throw ValidationError("piece cell carries no probability");
      if (!seen.emplace(c.row, c.col).second)
        throw ValidationError("pieces overlap");
      ++covered;
    }
  if (covered != j.support_size())
    throw ValidationError("pieces do not cover the support");

  double total = 0.0;
  for (const auto& piece : pieces) {
    double w = 0.0;
    for (const Cell& c : piece) w += j.p(c.row, c.col);
    JointPMF sub = j.restricted(piece);
    CharGraph g = build_characteristic_graph(sub, f, source);
    total += w * koerner_entropy(g, marginal(sub, source), opt).bits;
  }
  return total;
}

JointEntropyBounds joint_graph_entropy_bounds(const JointPMF& j,
                                              const FunctionTable& f,
                                              const SolverOptions& opt) {
  JointEntropyBounds out;
  out.lower = function_entropy(f, j).second;

  ClassPartition c1 = equivalence_classes(f, j, 1);
  ClassPartition c2 = equivalence_classes(f, j, 2);
  std::map<std::pair<std::size_t, std::size_t>, double> pair_mass;
  for (const Cell& cell : j.support())
    pair_mass[{c1.class_of[cell.row], c2.class_of[cell.col]}] +=
        j.p(cell.row, cell.col);
  Dist m;
  m.reserve(pair_mass.size());
  for (const auto& [k, v] : pair_mass) m.push_back(v);
  out.upper = entropy(m);

  out.sum_of_marginals = graph_entropy(j, f, 1, opt) + graph_entropy(j, f, 2, opt);
  return out;
}

}  // namespace fcomp
