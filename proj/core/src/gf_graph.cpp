#include "fcomp/gf_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

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

// Groups the given edges into connected components over shared class
// endpoints. Components are ordered by their smallest edge index.
std::vector<std::vector<std::size_t>> edge_components(
    const GFGraph& g, const std::vector<std::size_t>& edge_ids) {
  DSU dsu(g.parts1() + g.parts2());
  for (std::size_t e : edge_ids)
    dsu.unite(g.edges[e].u, g.parts1() + g.edges[e].v);
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t e : edge_ids) by_root[dsu.find(g.edges[e].u)].push_back(e);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(by_root.size());
  for (auto& [root, piece] : by_root) out.push_back(std::move(piece));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

double piece_mass(const GFGraph& g, const std::vector<std::size_t>& piece) {
  double m = 0.0;
  for (std::size_t e : piece) m += g.edges[e].mass;
  return m;
}

std::size_t checked_edge(const GFGraph& g, const PeelEdge& e) {
  std::size_t id = g.find_edge(e.first, e.second);
  if (id == GFGraph::npos)
    throw ValidationError("peel references a class pair with no edge (" +
                          std::to_string(e.first) + ", " +
                          std::to_string(e.second) + ")");
  return id;
}

nlohmann::json label_json(const Label& l) {
  if (const auto* i = std::get_if<std::int64_t>(&l)) return *i;
  return std::get<std::string>(l);
}

}  // namespace

std::size_t GFGraph::find_edge(std::size_t u, std::size_t v) const {
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e].u == u && edges[e].v == v) return e;
  return npos;
}

GFGraph build_gf(const JointPMF& j, const FunctionTable& f) {
  check_defined_on_support(f, j);
  GFGraph g;
  g.classes1 = equivalence_classes(f, j, 1);
  g.classes2 = equivalence_classes(f, j, 2);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  for (const Cell& c : j.support()) {
    std::size_t u = g.classes1.class_of[c.row];
    std::size_t v = g.classes2.class_of[c.col];
    Label out = f.outcome(c.row, c.col);
    auto [it, fresh] = slot.emplace(std::make_pair(u, v), g.edges.size());
    if (fresh) {
      GFEdge e;
      e.u = u;
      e.v = v;
      e.outcome = std::move(out);
      g.edges.push_back(std::move(e));
    } else if (!(g.edges[it->second].outcome == out)) {
      throw InconsistencyError(
          "class pair carries two function outcomes; classes are not "
          "outcome-consistent");
    }
    GFEdge& e = g.edges[it->second];
    e.mass += j.p(c.row, c.col);
    e.cells.push_back(c);
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const GFEdge& a, const GFEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return g;
}

void validate_gf(const GFGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  double total = 0.0;
  for (const GFEdge& e : g.edges) {
    if (e.u >= g.parts1() || e.v >= g.parts2())
      throw ValidationError("edge endpoint outside the class parts");
    if (!seen.insert({e.u, e.v}).second)
      throw InconsistencyError("duplicate edge for one class pair");
    if (!(e.mass > 0.0)) throw ValidationError("edge mass must be positive");
    total += e.mass;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("edge masses must sum to one");
}

bool is_symmetric(const GFGraph& g, const JointPMF& j) {
  if (!(j.x1() == j.x2())) return false;
  if (g.parts1() != g.parts2()) return false;
  std::map<std::vector<std::size_t>, std::size_t> part2_of;
  for (std::size_t v = 0; v < g.parts2(); ++v)
    part2_of[g.classes2.classes[v]] = v;
  std::vector<std::size_t> mirror(g.parts1());
  for (std::size_t u = 0; u < g.parts1(); ++u) {
    auto it = part2_of.find(g.classes1.classes[u]);
    if (it == part2_of.end()) return false;
    mirror[u] = it->second;
  }
  std::vector<std::size_t> mirror_back(g.parts2());
  for (std::size_t u = 0; u < g.parts1(); ++u) mirror_back[mirror[u]] = u;
  for (const GFEdge& e : g.edges) {
    std::size_t m = g.find_edge(mirror_back[e.v], mirror[e.u]);
    if (m == GFGraph::npos) return false;
    if (!(g.edges[m].outcome == e.outcome)) return false;
  }
  return true;
}

BipartitionScheme bipartition_scheme(const GFGraph& g) {
  validate_gf(g);
  std::vector<std::size_t> all(g.edges.size());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;

  BipartitionScheme out;
  out.decomposition.pieces = edge_components(g, all);
  out.component_of_class1.assign(g.parts1(), GFGraph::npos);
  out.component_of_class2.assign(g.parts2(), GFGraph::npos);
  for (std::size_t k = 0; k < out.decomposition.pieces.size(); ++k) {
    const auto& piece = out.decomposition.pieces[k];
    out.decomposition.masses.push_back(piece_mass(g, piece));
    for (std::size_t e : piece) {
      out.component_of_class1[g.edges[e].u] = k;
      out.component_of_class2[g.edges[e].v] = k;
    }
  }
  out.bits = entropy(out.decomposition.masses);
  return out;
}

UniformSumRates uniform_sum_rates(std::size_t n,
                                  const std::vector<std::size_t>& sizes,
                                  const std::vector<double>& probs) {
  if (sizes.empty()) throw ValidationError("need at least one block");
  if (sizes.size() != probs.size())
    throw ValidationError("sizes and probs must have the same length");
  std::size_t covered = 0;
  for (std::size_t nk : sizes) {
    if (nk == 0) throw ValidationError("block sizes must be positive");
    covered += nk;
  }
  if (covered != n)
    throw ValidationError("block sizes must partition the alphabet");
  double psum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ValidationError("block probabilities must be nonnegative");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw ValidationError("block probabilities must sum to one");

  UniformSumRates r;
  r.joint_rate = 2.0 * std::log2(static_cast<double>(n));
  double inner = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    inner += probs[k] * std::log2(static_cast<double>(sizes[k]));
  r.index_bits = entropy(probs);
  r.helper_rate = 2.0 * inner + r.index_bits;
  r.gain = r.joint_rate - r.helper_rate;
  r.gain_within_index_bits = r.gain <= r.index_bits + 1e-9;
  return r;
}

LowProbEdgeScheme low_prob_edge_scheme(const GFGraph& g,
                                       const PeelGroups& peel) {
  validate_gf(g);
  LowProbEdgeScheme out;
  std::set<std::size_t> peeled;
  Dist all_masses;
  for (const auto& group : peel) {
    if (group.empty()) throw ValidationError("peel groups must be nonempty");
    std::vector<std::size_t> ids;
    Dist masses;
    for (const PeelEdge& pe : group) {
      std::size_t e = checked_edge(g, pe);
      if (!peeled.insert(e).second)
        throw ValidationError("an edge may be peeled only once");
      ids.push_back(e);
      masses.push_back(g.edges[e].mass);
      all_masses.push_back(g.edges[e].mass);
    }
    double rest = 1.0;
    for (double m : masses) rest -= m;
    masses.push_back(std::max(rest, 0.0));
    out.bits += entropy(masses);
    out.decomposition.pieces.push_back(std::move(ids));
  }
  {
    double rest = 1.0;
    for (double m : all_masses) rest -= m;
    all_masses.push_back(std::max(rest, 0.0));
    out.joint_index_bits = entropy(all_masses);
  }

  std::vector<std::size_t> residual;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (!peeled.count(e)) residual.push_back(e);
  auto components = edge_components(g, residual);
  out.residual_components = components.size();
  out.disconnects = components.size() >= 2;
  for (auto& piece : components)
    out.decomposition.pieces.push_back(std::move(piece));
  for (const auto& piece : out.decomposition.pieces)
    out.decomposition.masses.push_back(piece_mass(g, piece));
  return out;
}

StructureSplitScheme structure_split_scheme(
    const GFGraph& g, const std::vector<PeelEdge>& peel) {
  validate_gf(g);
  if (peel.empty()) throw ValidationError("peel must contain at least one edge");
  std::set<std::size_t> peeled;
  for (const PeelEdge& pe : peel)
    if (!peeled.insert(checked_edge(g, pe)).second)
      throw ValidationError("an edge may be peeled only once");
  if (peeled.size() == g.edges.size())
    throw ValidationError("peel must leave at least one edge behind");

  StructureSplitScheme out;
  out.decomposition.pieces.resize(2);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    out.decomposition.pieces[peeled.count(e)].push_back(e);
  for (int k = 0; k < 2; ++k) {
    out.piece_mass[k] = piece_mass(g, out.decomposition.pieces[k]);
    out.decomposition.masses.push_back(out.piece_mass[k]);
  }
  out.bits = binary_entropy(out.piece_mass[1]);

  for (int k = 0; k < 2; ++k)
    for (int source = 0; source < 2; ++source) {
      std::map<std::size_t, Label> outcome_of;
      bool ok = true;
      for (std::size_t e : out.decomposition.pieces[k]) {
        std::size_t cls = source == 0 ? g.edges[e].u : g.edges[e].v;
        auto [it, fresh] = outcome_of.emplace(cls, g.edges[e].outcome);
        if (!fresh && !(it->second == g.edges[e].outcome)) ok = false;
      }
      out.one_source_sufficient[k][source] = ok;
    }
  return out;
}

PooledClassCode pooled_class_code(const GFGraph& g,
                                  const std::vector<std::size_t>& edges,
                                  int source) {
  const ClassPartition& cp = source == 1 ? g.classes1 : g.classes2;
  std::map<std::size_t, Label> outcome_of;
  for (std::size_t id : edges) {
    if (id >= g.edges.size())
      throw ValidationError("pooled_class_code: edge index out of range");
    const GFEdge& e = g.edges[id];
    const std::size_t cls = source == 1 ? e.u : e.v;
    auto [it, fresh] = outcome_of.emplace(cls, e.outcome);
    if (!fresh && !(it->second == e.outcome)) {
      throw InconsistencyError(
          "pooled_class_code: source " + std::to_string(source) + " class " +
          std::to_string(cls) + " meets two outcomes inside the piece");
    }
  }

  PooledClassCode out;
  out.color_of_class.resize(cp.classes.size());
  std::map<Label, std::size_t> color_of_outcome;
  for (std::size_t c = 0; c < cp.classes.size(); ++c) {
    auto it = outcome_of.find(c);
    if (it == outcome_of.end()) {
      out.color_of_class[c] = out.color_count++;
      out.color_mass.push_back(cp.class_mass[c]);
      continue;
    }
    auto [slot, fresh] = color_of_outcome.emplace(it->second, out.color_count);
    if (fresh) {
      out.color_count++;
      out.color_mass.push_back(0.0);
    }
    out.color_of_class[c] = slot->second;
    out.color_mass[slot->second] += cp.class_mass[c];
  }
  out.bits = entropy(out.color_mass);
  return out;
}

std::vector<PeelEdge> mass_threshold_peel(const GFGraph& g, double threshold) {
  std::vector<PeelEdge> out;
  for (const GFEdge& e : g.edges)
    if (e.mass < threshold) out.emplace_back(e.u, e.v);
  return out;
}

std::string gf_to_json(const GFGraph& g, const JointPMF& j) {
  nlohmann::json doc;
  auto part = [&](const ClassPartition& cp, const Alphabet& a) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& cls : cp.classes) {
      nlohmann::json members = nlohmann::json::array();
      for (std::size_t s : cls) members.push_back(label_json(a[s]));
      arr.push_back(std::move(members));
    }
    return arr;
  };
  doc["classes1"] = part(g.classes1, j.x1());
  doc["classes2"] = part(g.classes2, j.x2());
  doc["edges"] = nlohmann::json::array();
  for (const GFEdge& e : g.edges) {
    nlohmann::json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["mass"] = e.mass;
    je["outcome"] = label_json(e.outcome);
    je["cells"] = nlohmann::json::array();
    for (const Cell& c : e.cells)
      je["cells"].push_back(nlohmann::json::array(
          {label_json(j.x1()[c.row]), label_json(j.x2()[c.col])}));
    doc["edges"].push_back(std::move(je));
  }
  return doc.dump(2);
}

std::string peel_to_json(const PeelGroups& groups) {
  nlohmann::json doc;
  doc["groups"] = nlohmann::json::array();
  for (const auto& group : groups) {
    nlohmann::json jg = nlohmann::json::array();
    for (const PeelEdge& e : group)
      jg.push_back(nlohmann::json::array({e.first, e.second}));
    doc["groups"].push_back(std::move(jg));
  }
  return doc.dump(2);
}

PeelGroups peel_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("peel json parse error: ") + e.what());
  }
  auto to_edge = [](const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() ||
        !v[1].is_number_unsigned())
      throw ValidationError("peel edges are [u-class, v-class] index pairs");
    return PeelEdge{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
  };
  PeelGroups out;
  if (doc.is_array()) {
    // A flat edge list: every edge gets its own indicator.
    for (const auto& v : doc) out.push_back({to_edge(v)});
    return out;
  }
  if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array())
    throw ValidationError("peel json needs a 'groups' array or a flat edge list");
  for (const auto& jg : doc["groups"]) {
    if (!jg.is_array()) throw ValidationError("each peel group must be an array");
    std::vector<PeelEdge> group;
    for (const auto& v : jg) group.push_back(to_edge(v));
    out.push_back(std::move(group));
  }
  return out;
}

}  // namespace fcomp
