#include "fcomp/common_information.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include <json.hpp>

#include "fcomp/char_graph.hpp"
#include "fcomp/error.hpp"

namespace fcomp {

namespace {

struct DSU {
  std::vector<std::size_t> parent;
  explicit DSU(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Components under "shares a row or a column", cells listed row-major.
std::vector<std::vector<Cell>> cell_components(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  DSU dsu(cells.size());
  std::map<std::size_t, std::size_t> first_in_row, first_in_col;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto r = first_in_row.emplace(cells[i].row, i);
    if (!r.second) dsu.unite(i, r.first->second);
    auto c = first_in_col.emplace(cells[i].col, i);
    if (!c.second) dsu.unite(i, c.first->second);
  }
  std::map<std::size_t, std::vector<Cell>> by_root;
  for (std::size_t i = 0; i < cells.size(); ++i)
    by_root[dsu.find(i)].push_back(cells[i]);
  std::vector<std::vector<Cell>> out;
  std::vector<std::pair<Cell, std::size_t>> order;
  for (auto& [root, group] : by_root) order.emplace_back(group.front(), root);
  std::sort(order.begin(), order.end());
  for (auto& [cell, root] : order) out.push_back(std::move(by_root[root]));
  return out;
}

Label json_label(const nlohmann::json& v) {
  if (v.is_number_integer()) return Label{v.get<std::int64_t>()};
  if (v.is_string()) return Label{v.get<std::string>()};
  throw ValidationError("labels must be integers or strings");
}

nlohmann::json label_json(const Label& l) {
  if (const auto* i = std::get_if<std::int64_t>(&l)) return *i;
  return std::get<std::string>(l);
}

}  // namespace

GKWDecomposition gkw_decompose(const JointPMF& j) {
  GKWDecomposition out;
  out.components = cell_components(j.support());
  out.component_of_row.assign(j.rows(), GKWDecomposition::npos);
  out.component_of_col.assign(j.cols(), GKWDecomposition::npos);
  for (std::size_t k = 0; k < out.components.size(); ++k) {
    double m = 0.0;
    for (const Cell& c : out.components[k]) {
      m += j.p(c.row, c.col);
      out.component_of_row[c.row] = k;
      out.component_of_col[c.col] = k;
    }
    out.masses.push_back(m);
  }
  // Masses partition the pmf, so they sum to one up to accumulation dust;
  // normalizing keeps a single-component decomposition at exactly zero bits.
  out.bits = entropy(normalized(out.masses));
  return out;
}

double gkw_entropy(const JointPMF& j) { return gkw_decompose(j).bits; }

void validate_nesting(const Nesting& n, const JointPMF& j,
                      const FunctionTable& f) {
  check_defined_on_support(f, j);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t covered = 0;
  for (const Nest& nest : n.nests) {
    if (nest.cells.empty()) throw ValidationError("empty nest");
    std::set<std::pair<std::size_t, std::size_t>> nest_cells;
    for (const Cell& c : nest.cells) {
      if (c.row >= j.rows() || c.col >= j.cols())
        throw ValidationError("nest cell outside the joint alphabet");
      if (!j.in_support(c.row, c.col))
        throw ValidationError("nest cell carries no probability");
      if (!seen.emplace(c.row, c.col).second)
        throw ValidationError("nests overlap");
      nest_cells.emplace(c.row, c.col);
      ++covered;
    }
    std::size_t grouped = 0;
    for (const auto& group : nest.groups) {
      if (group.empty()) throw ValidationError("empty group");
      const Label& want = f.outcome(group.front().row, group.front().col);
      for (const Cell& c : group) {
        if (!nest_cells.count({c.row, c.col}))
          throw ValidationError("group cell not in its nest");
        if (!(f.outcome(c.row, c.col) == want))
          throw ValidationError("group mixes outcomes");
        ++grouped;
      }
    }
    if (grouped != nest.cells.size())
      throw ValidationError("groups do not tile the nest");
    std::set<std::pair<std::size_t, std::size_t>> dedup;
    for (const auto& group : nest.groups)
      for (const Cell& c : group)
        if (!dedup.emplace(c.row, c.col).second)
          throw ValidationError("groups overlap");
  }
  if (covered != j.support_size())
    throw ValidationError("nests do not cover the support");
}

Nesting make_nesting(const std::vector<std::vector<Cell>>& nest_cells,
                     const JointPMF& j, const FunctionTable& f) {
  Nesting n;
  for (const auto& cells : nest_cells) {
    Nest nest;
    nest.cells = cells;
    std::sort(nest.cells.begin(), nest.cells.end());
    nest.groups = cell_components(nest.cells);
    n.nests.push_back(std::move(nest));
  }
  validate_nesting(n, j, f);
  return n;
}

FunctionalCI functional_ci_entropy(const Nesting& n, const JointPMF& j,
                                   const FunctionTable& f) {
  validate_nesting(n, j, f);
  FunctionalCI out;
  for (const Nest& nest : n.nests) {
    double m = 0.0;
    for (const Cell& c : nest.cells) m += j.p(c.row, c.col);
    out.nest_masses.push_back(m);

    Dist gm;
    for (const auto& group : nest.groups) {
      double g = 0.0;
      for (const Cell& c : group) g += j.p(c.row, c.col);
      gm.push_back(g / m);
    }
    out.within_bits += m * entropy(gm);
  }
  out.index_bits = entropy(out.nest_masses);
  out.total = out.index_bits + out.within_bits;
  return out;
}

namespace {

double group_announce_rate(const Nest& nest, const JointPMF& j, int source,
                           const SolverOptions& opt) {
  if (nest.groups.size() <= 1) return 0.0;

  std::vector<std::set<std::size_t>> touched;
  for (const auto& group : nest.groups) {
    std::set<std::size_t> s;
    for (const Cell& c : group) s.insert(source == 1 ? c.row : c.col);
    touched.push_back(std::move(s));
  }
  bool disjoint = true;
  std::set<std::size_t> all;
  for (const auto& s : touched)
    for (std::size_t v : s)
      if (!all.insert(v).second) disjoint = false;

  if (disjoint) {
    Dist marg = marginal(j, source);
    Dist gm;
    double z = 0.0;
    for (const auto& s : touched) {
      double q = 0.0;
      for (std::size_t v : s) q += marg[v];
      gm.push_back(q);
      z += q;
    }
    for (double& v : gm) v /= z;
    return entropy(gm);
  }

  // The group is not readable off this source alone; code for the group
  // index over the nest-restricted instance instead.
  JointPMF sub = j.restricted(nest.cells);
  std::vector<std::vector<std::optional<Label>>> cells(
      j.rows(), std::vector<std::optional<Label>>(j.cols()));
  for (std::size_t g = 0; g < nest.groups.size(); ++g)
    for (const Cell& c : nest.groups[g])
      cells[c.row][c.col] = make_label(std::int64_t(g));
  FunctionTable fg(j.x1(), j.x2(), std::move(cells));
  CharGraph graph = build_characteristic_graph(sub, fg, source);
  return koerner_entropy(graph, marginal(sub, source), opt).bits;
}

}  // namespace

NestMarginalRates nest_marginal_rates(const Nesting& n, const JointPMF& j,
                                      const FunctionTable& f,
                                      const SolverOptions& opt) {
  validate_nesting(n, j, f);
  NestMarginalRates out;
  for (const Nest& nest : n.nests) {
    out.rate1.push_back(group_announce_rate(nest, j, 1, opt));
    out.rate2.push_back(group_announce_rate(nest, j, 2, opt));
  }
  return out;
}

Nesting greedy_nesting(const JointPMF& j, const FunctionTable& f,
                       std::size_t max_nests) {
  check_defined_on_support(f, j);
  std::vector<Label> order;
  std::map<Label, std::size_t> idx;
  std::vector<std::vector<Cell>> nests;
  for (const Cell& c : j.support()) {
    const Label& o = f.outcome(c.row, c.col);
    auto it = idx.emplace(o, nests.size());
    if (it.second) nests.emplace_back();
    nests[it.first->second].push_back(c);
  }

  auto rows_cols = [](const std::vector<Cell>& cells) {
    std::pair<std::set<std::size_t>, std::set<std::size_t>> rc;
    for (const Cell& c : cells) {
      rc.first.insert(c.row);
      rc.second.insert(c.col);
    }
    return rc;
  };
  while (nests.size() > max_nests) {
    bool merged = false;
    for (std::size_t a = 0; a < nests.size() && !merged; ++a)
      for (std::size_t b = a + 1; b < nests.size() && !merged; ++b) {
        auto ra = rows_cols(nests[a]);
        auto rb = rows_cols(nests[b]);
        bool clash = false;
        for (std::size_t r : rb.first)
          if (ra.first.count(r)) clash = true;
        for (std::size_t c : rb.second)
          if (ra.second.count(c)) clash = true;
        if (clash) continue;
        nests[a].insert(nests[a].end(), nests[b].begin(), nests[b].end());
        nests.erase(nests.begin() + std::ptrdiff_t(b));
        merged = true;
      }
    if (!merged)
      throw ValidationError(
          "cannot reduce the nest count without mixing outcomes in a row or "
          "column");
  }
  return make_nesting(nests, j, f);
}

namespace {

struct NestSearch {
  const JointPMF& j;
  std::vector<Cell> cells{};
  std::vector<std::size_t> outcome{};  // per cell
  std::size_t max_nests = 0;
  std::size_t budget = 0;

  std::vector<std::size_t> assign{};
  // Outcome pinned to a row/col inside a nest, npos when free.
  std::vector<std::vector<std::size_t>> row_pin{}, col_pin{};
  static constexpr std::size_t npos = std::size_t(-1);

  std::size_t examined = 0;
  bool truncated = false;

  bool have_best = false;
  double best_total = 0.0, best_index = 0.0;
  std::size_t best_nests = 0;
  std::vector<std::size_t> best_assign{};

  void evaluate(std::size_t used) {
    ++examined;
    if (examined >= budget) truncated = true;

    std::vector<std::vector<Cell>> nests(used);
    for (std::size_t i = 0; i < cells.size(); ++i)
      nests[assign[i]].push_back(cells[i]);

    Dist nm;
    double within = 0.0;
    for (auto& nest : nests) {
      double m = 0.0;
      for (const Cell& c : nest) m += j.p(c.row, c.col);
      nm.push_back(m);
      Dist gm;
      for (const auto& group : cell_components(nest)) {
        double g = 0.0;
        for (const Cell& c : group) g += j.p(c.row, c.col);
        gm.push_back(g / m);
      }
      within += m * entropy(gm);
    }
    double index = entropy(nm);
    double total = index + within;

    bool better = false;
    if (!have_best || total > best_total + 1e-12)
      better = true;
    else if (total > best_total - 1e-12) {
      if (index < best_index - 1e-12)
        better = true;
      else if (index < best_index + 1e-12 && used < best_nests)
        better = true;
    }
    if (better) {
      have_best = true;
      best_total = total;
      best_index = index;
      best_nests = used;
      best_assign = assign;
    }
  }

  void dfs(std::size_t i, std::size_t used) {
    if (truncated) return;
    if (i == cells.size()) {
      evaluate(used);
      return;
    }
    std::size_t r = cells[i].row, c = cells[i].col, o = outcome[i];
    std::size_t limit = used < max_nests ? used + 1 : used;
    for (std::size_t k = 0; k < limit && !truncated; ++k) {
      std::size_t& rp = row_pin[k][r];
      std::size_t& cp = col_pin[k][c];
      if ((rp != npos && rp != o) || (cp != npos && cp != o)) continue;
      std::size_t old_r = rp, old_c = cp;
      rp = o;
      cp = o;
      assign[i] = k;
      dfs(i + 1, std::max(used, k + 1));
      rp = old_r;
      cp = old_c;
    }
  }
};

}  // namespace

NestSearchResult nest_search(const JointPMF& j, const FunctionTable& f,
                             const NestSearchOptions& opt) {
  check_defined_on_support(f, j);
  if (opt.max_nests == 0) throw ValidationError("max_nests must be positive");

  NestSearch s{j};
  s.cells = j.support();
  std::map<Label, std::size_t> ids;
  for (const Cell& c : s.cells)
    s.outcome.push_back(
        ids.emplace(f.outcome(c.row, c.col), ids.size()).first->second);
  s.max_nests = opt.max_nests;
  s.budget = opt.budget;
  s.assign.assign(s.cells.size(), 0);
  s.row_pin.assign(opt.max_nests, std::vector<std::size_t>(j.rows(), NestSearch::npos));
  s.col_pin.assign(opt.max_nests, std::vector<std::size_t>(j.cols(), NestSearch::npos));
  s.dfs(0, 0);

  if (!s.have_best)
    throw ValidationError("no valid nesting found within the nest cap");

  std::vector<std::vector<Cell>> nests(s.best_nests);
  for (std::size_t i = 0; i < s.cells.size(); ++i)
    nests[s.best_assign[i]].push_back(s.cells[i]);

  NestSearchResult res;
  res.nesting = make_nesting(nests, j, f);
  res.value = functional_ci_entropy(res.nesting, j, f);
  res.complete = !s.truncated;
  res.examined = s.examined;
  return res;
}

Nesting nesting_from_json(const std::string& text, const JointPMF& j,
                          const FunctionTable& f) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("nesting json parse error: ") + e.what());
  }
  if (!doc.contains("nests") || !doc["nests"].is_array())
    throw ValidationError("nesting json needs a nests array");

  auto to_cell = [&](const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 2)
      throw ValidationError("cells are [x1, x2] label pairs");
    auto r = j.x1().find(json_label(v[0]));
    auto c = j.x2().find(json_label(v[1]));
    if (!r || !c) throw ValidationError("cell label not in the alphabets");
    return Cell{*r, *c};
  };

  Nesting n;
  for (const auto& item : doc["nests"]) {
    if (!item.contains("cells") || !item["cells"].is_array())
      throw ValidationError("each nest needs a cells array");
    Nest nest;
    for (const auto& v : item["cells"]) nest.cells.push_back(to_cell(v));
    std::sort(nest.cells.begin(), nest.cells.end());
    if (item.contains("groups")) {
      if (!item["groups"].is_array())
        throw ValidationError("groups must be an array of cell arrays");
      for (const auto& grp : item["groups"]) {
        std::vector<Cell> cells;
        for (const auto& v : grp) cells.push_back(to_cell(v));
        std::sort(cells.begin(), cells.end());
        nest.groups.push_back(std::move(cells));
      }
    } else {
      nest.groups = cell_components(nest.cells);
    }
    n.nests.push_back(std::move(nest));
  }
  validate_nesting(n, j, f);
  return n;
}

std::string nesting_to_json(const Nesting& n, const JointPMF& j) {
  nlohmann::json doc;
  doc["nests"] = nlohmann::json::array();
  auto cell_json = [&](const Cell& c) {
    return nlohmann::json::array(
        {label_json(j.x1()[c.row]), label_json(j.x2()[c.col])});
  };
  for (const Nest& nest : n.nests) {
    nlohmann::json item;
    item["cells"] = nlohmann::json::array();
    for (const Cell& c : nest.cells) item["cells"].push_back(cell_json(c));
    item["groups"] = nlohmann::json::array();
    for (const auto& grp : nest.groups) {
      nlohmann::json g = nlohmann::json::array();
      for (const Cell& c : grp) g.push_back(cell_json(c));
      item["groups"].push_back(std::move(g));
    }
    doc["nests"].push_back(std::move(item));
  }
  return doc.dump(2);
}

}  // namespace fcomp
