#include "fcomp/char_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>

#include "fcomp/error.hpp"

namespace fcomp {

namespace {

using Words = std::vector<std::uint64_t>;

Words make_words(std::size_t n) { return Words((n + 63) / 64, 0); }
void word_set(Words& w, std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
bool word_test(const Words& w, std::size_t i) {
  return (w[i >> 6] >> (i & 63)) & 1;
}

std::vector<Words> row_bitsets(const CharGraph& g) {
  std::vector<Words> rows(g.size(), make_words(g.size()));
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t v = 0; v < g.size(); ++v)
      if (u != v && g.edge(u, v)) word_set(rows[u], v);
  return rows;
}

struct PairRelations {
  // Indexed u * n + v for the graph's own source side.
  std::vector<bool> support_differ;
  std::vector<bool> common_nonempty;
  std::vector<bool> differ_on_common;
  std::size_t n = 0;
};

PairRelations pair_relations(const JointPMF& j, const FunctionTable& f,
                             int source) {
  check_defined_on_support(f, j);
  std::size_t n = source == 1 ? j.rows() : j.cols();
  std::size_t m = source == 1 ? j.cols() : j.rows();
  auto prob = [&](std::size_t s, std::size_t x) {
    return source == 1 ? j.p(s, x) : j.p(x, s);
  };
  auto out = [&](std::size_t s, std::size_t x) -> const Label& {
    return source == 1 ? f.outcome(s, x) : f.outcome(x, s);
  };

  PairRelations r;
  r.n = n;
  r.support_differ.assign(n * n, false);
  r.common_nonempty.assign(n * n, false);
  r.differ_on_common.assign(n * n, false);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u; v < n; ++v) {
      bool sd = false, cn = false, dc = false;
      for (std::size_t x = 0; x < m; ++x) {
        bool pu = prob(u, x) > 0.0;
        bool pv = prob(v, x) > 0.0;
        if (pu != pv) sd = true;
        if (pu && pv) {
          cn = true;
          if (!(out(u, x) == out(v, x))) dc = true;
        }
      }
      r.support_differ[u * n + v] = r.support_differ[v * n + u] = sd;
      r.common_nonempty[u * n + v] = r.common_nonempty[v * n + u] = cn;
      r.differ_on_common[u * n + v] = r.differ_on_common[v * n + u] = dc;
    }
  }
  return r;
}

}  // namespace

CharGraph::CharGraph(Alphabet vertices,
                     std::vector<std::pair<std::size_t, std::size_t>> edges,
                     int source, EdgeRule rule)
    : vertices_(std::move(vertices)), adj_(vertices_.size() * vertices_.size(), false),
      source_(source), rule_(rule) {
  for (auto [u, v] : edges) {
    if (u >= size() || v >= size())
      throw ValidationError("edge endpoint outside vertex range");
    if (u == v) throw ValidationError("self-loops are not allowed");
    if (!adj_[u * size() + v]) ++edge_count_;
    adj_[u * size() + v] = adj_[v * size() + u] = true;
  }
}

std::vector<std::size_t> CharGraph::neighbors(std::size_t u) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (v != u && edge(u, v)) out.push_back(v);
  return out;
}

std::string CharGraph::to_edge_list() const {
  std::ostringstream os;
  os << "vertices:";
  for (const auto& l : vertices_.symbols()) os << ' ' << label_text(l);
  os << '\n';
  for (std::size_t u = 0; u < size(); ++u)
    for (std::size_t v = u + 1; v < size(); ++v)
      if (edge(u, v))
        os << label_text(vertices_[u]) << ' ' << label_text(vertices_[v]) << '\n';
  return os.str();
}

CharGraph build_characteristic_graph(const JointPMF& j, const FunctionTable& f,
                                     int source, EdgeRule rule) {
  if (source != 1 && source != 2)
    throw ValidationError("source must be 1 or 2");
  PairRelations r = pair_relations(j, f, source);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < r.n; ++u)
    for (std::size_t v = u + 1; v < r.n; ++v) {
      bool e = rule == EdgeRule::support_profile
                   ? (r.support_differ[u * r.n + v] || r.differ_on_common[u * r.n + v])
                   : r.differ_on_common[u * r.n + v];
      if (e) edges.emplace_back(u, v);
    }
  return CharGraph(source == 1 ? j.x1() : j.x2(), std::move(edges), source, rule);
}

CharGraph power_graph(const CharGraph& g, const JointPMF& j,
                      const FunctionTable& f, std::size_t n,
                      const PowerGraphOptions& opt) {
  if (n == 0) throw ValidationError("power graph exponent must be >= 1");
  std::size_t base = g.size();
  double count = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    count *= double(base);
    if (count > double(opt.max_vertices))
      throw BudgetExceeded("power graph vertex cap exceeded", opt.max_vertices);
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= base;

  PairRelations r = pair_relations(j, f, g.source());

  auto digits = [&](std::size_t t) {
    std::vector<std::size_t> d(n);
    for (std::size_t i = n; i-- > 0;) {
      d[i] = t % base;
      t /= base;
    }
    return d;
  };

  std::vector<Label> labels(total);
  for (std::size_t t = 0; t < total; ++t) {
    auto d = digits(t);
    std::string s = "(";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s += ',';
      s += label_text(g.vertices()[d[i]]);
    }
    s += ')';
    labels[t] = Label{std::move(s)};
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t s = 0; s < total; ++s) {
    auto ds = digits(s);
    for (std::size_t t = s + 1; t < total; ++t) {
      auto dt = digits(t);
      bool any_sd = false, all_cn = true, any_dc = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t u = ds[i], v = dt[i];
        if (r.support_differ[u * base + v]) any_sd = true;
        if (!r.common_nonempty[u * base + v]) all_cn = false;
        if (r.differ_on_common[u * base + v]) any_dc = true;
      }
      bool confusable_f = all_cn && any_dc;
      bool e = g.rule() == EdgeRule::support_profile ? (any_sd || confusable_f)
                                                     : confusable_f;
      if (e) edges.emplace_back(s, t);
    }
  }
  return CharGraph(Alphabet(std::move(labels)), std::move(edges), g.source(),
                   g.rule());
}

Dist power_masses(const Dist& base, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= base.size();
  Dist out(total, 1.0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t v = t;
    for (std::size_t i = 0; i < n; ++i) {
      out[t] *= base[v % base.size()];
      v /= base.size();
    }
  }
  return out;
}

namespace {

struct BronKerbosch {
  const std::vector<Words>& adj;  // complement adjacency
  std::size_t n;
  std::size_t cap;
  std::vector<std::vector<std::size_t>>& out;

  void run(Words r, Words p, Words x) {
    bool p_empty = true, x_empty = true;
    for (auto w : p)
      if (w) p_empty = false;
    for (auto w : x)
      if (w) x_empty = false;
    if (p_empty && x_empty) {
      std::vector<std::size_t> set;
      for (std::size_t v = 0; v < n; ++v)
        if (word_test(r, v)) set.push_back(v);
      out.push_back(std::move(set));
      if (out.size() > cap)
        throw BudgetExceeded("maximal independent set enumeration cap exceeded",
                             cap);
      return;
    }
    // Pivot: vertex of P ∪ X with the most candidates in P.
    std::size_t pivot = n;
    std::size_t best = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!word_test(p, v) && !word_test(x, v)) continue;
      std::size_t deg = 0;
      for (std::size_t w = 0; w < adj[v].size(); ++w)
        deg += std::size_t(std::popcount(p[w] & adj[v][w]));
      if (pivot == n || deg > best) {
        pivot = v;
        best = deg;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!word_test(p, v)) continue;
      if (pivot < n && word_test(adj[pivot], v)) continue;
      Words r2 = r, p2 = p, x2 = x;
      word_set(r2, v);
      for (std::size_t w = 0; w < p2.size(); ++w) {
        p2[w] &= adj[v][w];
        x2[w] &= adj[v][w];
      }
      run(std::move(r2), std::move(p2), std::move(x2));
      p[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
      word_set(x, v);
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> maximal_independent_sets(
    const CharGraph& g, std::size_t cap) {
  std::size_t n = g.size();
  // Independent sets of g are cliques of the complement.
  std::vector<Words> comp(n, make_words(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && !g.edge(u, v)) word_set(comp[u], v);

  std::vector<std::vector<std::size_t>> out;
  BronKerbosch bk{comp, n, cap, out};
  Words r = make_words(n), p = make_words(n), x = make_words(n);
  for (std::size_t v = 0; v < n; ++v) word_set(p, v);
  bk.run(std::move(r), std::move(p), std::move(x));
  std::sort(out.begin(), out.end());
  return out;
}

TwinClasses twin_classes(const CharGraph& g) {
  std::size_t n = g.size();
  auto rows = row_bitsets(g);
  TwinClasses tc;
  tc.class_of.assign(n, 0);
  std::map<Words, std::size_t> ids;
  for (std::size_t u = 0; u < n; ++u) {
    auto [it, fresh] = ids.emplace(rows[u], tc.classes.size());
    if (fresh) tc.classes.emplace_back();
    tc.class_of[u] = it->second;
    tc.classes[it->second].push_back(u);
  }
  tc.complete_multipartite = true;
  for (std::size_t u = 0; u < n && tc.complete_multipartite; ++u) {
    std::size_t deg = 0;
    for (auto w : rows[u]) deg += std::size_t(std::popcount(w));
    if (deg != n - tc.classes[tc.class_of[u]].size())
      tc.complete_multipartite = false;
  }
  return tc;
}

bool is_proper(const CharGraph& g, const std::vector<std::size_t>& color_of) {
  if (color_of.size() != g.size()) return false;
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t v = u + 1; v < g.size(); ++v)
      if (g.edge(u, v) && color_of[u] == color_of[v]) return false;
  return true;
}

namespace {

std::vector<std::size_t> relabel_first_use(const std::vector<std::size_t>& c) {
  std::vector<std::size_t> out(c.size());
  std::map<std::size_t, std::size_t> seen;
  for (std::size_t v = 0; v < c.size(); ++v)
    out[v] = seen.emplace(c[v], seen.size()).first->second;
  return out;
}

Coloring greedy_coloring(const CharGraph& g, const Dist& p) {
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });

  std::vector<std::vector<std::size_t>> members;
  std::vector<double> mass;
  std::vector<std::size_t> color_of(g.size(), 0);
  for (std::size_t v : order) {
    std::size_t pick = members.size();
    double pick_mass = -1.0;
    for (std::size_t c = 0; c < members.size(); ++c) {
      bool ok = true;
      for (std::size_t u : members[c])
        if (g.edge(u, v)) {
          ok = false;
          break;
        }
      if (ok && mass[c] > pick_mass) {
        pick = c;
        pick_mass = mass[c];
      }
    }
    if (pick == members.size()) {
      members.emplace_back();
      mass.push_back(0.0);
    }
    members[pick].push_back(v);
    mass[pick] += p[v];
    color_of[v] = pick;
  }

  Coloring res;
  res.color_of = relabel_first_use(color_of);
  res.color_count = members.size();
  res.bits = entropy(mass);
  res.exact = false;
  return res;
}

struct ExactColoring {
  const CharGraph& g;
  const Dist& p;
  std::size_t budget;
  std::size_t nodes = 0;

  std::vector<std::vector<std::size_t>> members{};
  std::vector<double> mass{};
  std::vector<std::size_t> color_of{};
  double remaining = 0.0;

  double best_bits = 0.0;
  std::vector<std::size_t> best{};

  double lower_bound() const {
    // Any completion refines "pour all remaining mass into the heaviest
    // class", which majorizes every reachable color distribution.
    double big = 0.0;
    for (double m : mass) big = std::max(big, m);
    double h = 0.0;
    bool used = false;
    for (double m : mass) {
      double v = m;
      if (!used && m == big) {
        v += remaining;
        used = true;
      }
      if (v > 0.0) h -= v * std::log2(v);
    }
    if (!used && remaining > 0.0) h -= remaining * std::log2(remaining);
    return h;
  }

  void dfs(std::size_t v) {
    if (++nodes > budget)
      throw BudgetExceeded("min-entropy coloring search budget exceeded", budget);
    if (v == g.size()) {
      double bits = entropy(mass);
      if (bits < best_bits - 1e-12) {
        best_bits = bits;
        best = color_of;
      }
      return;
    }
    if (lower_bound() >= best_bits - 1e-12) return;

    std::size_t open = members.size();
    for (std::size_t c = 0; c <= open && c < g.size(); ++c) {
      if (c == open) {
        members.emplace_back();
        mass.push_back(0.0);
      }
      bool ok = true;
      for (std::size_t u : members[c])
        if (g.edge(u, v)) {
          ok = false;
          break;
        }
      if (ok) {
        members[c].push_back(v);
        mass[c] += p[v];
        remaining -= p[v];
        color_of[v] = c;
        dfs(v + 1);
        members[c].pop_back();
        mass[c] -= p[v];
        remaining += p[v];
      }
      if (c == open) {
        members.pop_back();
        mass.pop_back();
      }
    }
  }
};

}  // namespace

Coloring min_entropy_coloring(const CharGraph& g, const Dist& p,
                              ColoringMode mode, const ColoringOptions& opt) {
  if (p.size() != g.size())
    throw ValidationError("mass vector does not match vertex count");
  for (double v : p)
    if (v < 0.0) throw ValidationError("negative vertex mass");

  if (mode == ColoringMode::greedy) return greedy_coloring(g, p);

  TwinClasses tc = twin_classes(g);
  if (tc.complete_multipartite) {
    // Proper colorings can only refine the twin partition here, and
    // refinement never lowers entropy, so the partition itself is optimal.
    Coloring res;
    res.color_of = tc.class_of;
    res.color_count = tc.classes.size();
    Dist mass(tc.classes.size(), 0.0);
    for (std::size_t v = 0; v < g.size(); ++v) mass[tc.class_of[v]] += p[v];
    res.bits = entropy(mass);
    res.exact = true;
    return res;
  }

  Coloring seed = greedy_coloring(g, p);
  ExactColoring search{g, p, opt.node_budget};
  search.color_of.assign(g.size(), 0);
  for (double v : p) search.remaining += v;
  search.best_bits = seed.bits + 2e-12;
  search.best = seed.color_of;
  search.dfs(0);

  Coloring res;
  res.color_of = relabel_first_use(search.best);
  std::size_t k = 0;
  for (std::size_t c : res.color_of) k = std::max(k, c + 1);
  res.color_count = k;
  Dist mass(k, 0.0);
  for (std::size_t v = 0; v < g.size(); ++v) mass[res.color_of[v]] += p[v];
  res.bits = entropy(mass);
  res.exact = true;
  return res;
}

double chromatic_entropy_rate(const JointPMF& j, const FunctionTable& f,
                              int source, std::size_t n) {
  CharGraph g = build_characteristic_graph(j, f, source);
  CharGraph pg = power_graph(g, j, f, n);
  Dist masses = power_masses(marginal(j, source), n);
  Coloring c = min_entropy_coloring(pg, masses, ColoringMode::exact);
  return c.bits / double(n);
}

}  // namespace fcomp
