#include "fcomp/coding_simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <future>
#include <random>
#include <utility>

#include <json.hpp>

#include "fcomp/common_information.hpp"
#include "fcomp/error.hpp"
#include "fcomp/gf_graph.hpp"

namespace fcomp {

namespace {

double clamp0(double v) { return v > -1e-12 && v < 0.0 ? 0.0 : v; }

std::string cell_text(const Cell& c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

std::vector<std::size_t> colors_for(const CharGraph& g, const Dist& m,
                                    const ColoringOptions& copt) {
  try {
    return min_entropy_coloring(g, m, ColoringMode::exact, copt).color_of;
  } catch (const BudgetExceeded&) {
    return min_entropy_coloring(g, m, ColoringMode::greedy, copt).color_of;
  }
}

void init_shape(SchemeCode& code, const JointPMF& j) {
  code.helper_of.assign(
      j.rows(), std::vector<std::size_t>(j.cols(), SchemeCode::npos));
  code.truth.assign(j.rows(),
                    std::vector<std::optional<Label>>(j.cols()));
}

// Per-part conditional colorings shared by the component-indexed schemes.
void component_colorings(SchemeCode& code, const JointPMF& j,
                         const FunctionTable& f,
                         const std::vector<std::vector<Cell>>& parts,
                         const ColoringOptions& copt) {
  code.helper_symbols = parts.size();
  code.color1.assign(parts.size(), std::vector<std::size_t>(j.rows(), 0));
  code.color2.assign(parts.size(), std::vector<std::size_t>(j.cols(), 0));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    JointPMF r = j.restricted(parts[k]);
    code.color1[k] = colors_for(
        build_characteristic_graph(r, f, 1, EdgeRule::shared_counterpart),
        marginal(r, 1), copt);
    code.color2[k] = colors_for(
        build_characteristic_graph(r, f, 2, EdgeRule::shared_counterpart),
        marginal(r, 2), copt);
    for (const Cell& c : parts[k]) code.helper_of[c.row][c.col] = k;
  }
}

void fill_decoder(SchemeCode& code, const JointPMF& j,
                  const FunctionTable& f) {
  std::map<std::array<std::size_t, 3>, std::pair<Label, Cell>> seen;
  for (const Cell& c : j.support()) {
    const Label& out = f.outcome(c.row, c.col);
    code.truth[c.row][c.col] = out;
    const std::size_t h = code.helper_of[c.row][c.col];
    std::array<std::size_t, 3> key{h, code.color1[h][c.row],
                                   code.color2[h][c.col]};
    auto [it, fresh] = seen.emplace(key, std::make_pair(out, c));
    if (!fresh && !(it->second.first == out)) {
      throw InconsistencyError(
          "decoder collision: cells " + cell_text(it->second.second) +
          " and " + cell_text(c) + " share helper symbol " +
          std::to_string(h) + " and colors but map to outcomes " +
          label_text(it->second.first) + " and " + label_text(out));
    }
  }
  for (const auto& [key, val] : seen) code.decoder.emplace(key, val.first);
}

SchemeCode build_prop1(const Instance& inst, const ColoringOptions& copt) {
  SchemeCode code;
  code.scheme = "prop1";
  init_shape(code, inst.joint);
  GKWDecomposition k = gkw_decompose(inst.joint);
  component_colorings(code, inst.joint, inst.f, k.components, copt);
  fill_decoder(code, inst.joint, inst.f);
  return code;
}

SchemeCode build_kb(const Instance& inst, const ColoringOptions& copt) {
  SchemeCode code;
  code.scheme = "kb";
  init_shape(code, inst.joint);
  GFGraph g = build_gf(inst.joint, inst.f);
  BipartitionScheme bp = bipartition_scheme(g);
  std::vector<std::vector<Cell>> parts(bp.decomposition.pieces.size());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (std::size_t e : bp.decomposition.pieces[k]) {
      const auto& extra = g.edges[e].cells;
      parts[k].insert(parts[k].end(), extra.begin(), extra.end());
    }
    std::sort(parts[k].begin(), parts[k].end());
  }
  component_colorings(code, inst.joint, inst.f, parts, copt);
  fill_decoder(code, inst.joint, inst.f);
  return code;
}

// Source 2 announces the nest index; source 1 names its group inside the
// nest, which only works when the groups split the source-1 symbols.
SchemeCode build_prop3(const Instance& inst) {
  if (!inst.nesting)
    throw ValidationError("prop3 code needs the instance nesting");
  validate_nesting(*inst.nesting, inst.joint, inst.f);
  SchemeCode code;
  code.scheme = "prop3";
  init_shape(code, inst.joint);
  const auto& nests = inst.nesting->nests;
  code.helper_symbols = nests.size();
  code.color1.assign(nests.size(),
                     std::vector<std::size_t>(inst.joint.rows(), SchemeCode::npos));
  code.color2.assign(nests.size(),
                     std::vector<std::size_t>(inst.joint.cols(), 0));
  for (std::size_t k = 0; k < nests.size(); ++k) {
    for (std::size_t gi = 0; gi < nests[k].groups.size(); ++gi) {
      for (const Cell& c : nests[k].groups[gi]) {
        code.helper_of[c.row][c.col] = k;
        std::size_t& slot = code.color1[k][c.row];
        if (slot != SchemeCode::npos && slot != gi) {
          throw InconsistencyError(
              "prop3 code: groups of nest " + std::to_string(k) +
              " overlap on source 1 symbol " + std::to_string(c.row) +
              "; the nesting is not one-source decodable");
        }
        slot = gi;
      }
    }
    for (std::size_t& v : code.color1[k])
      if (v == SchemeCode::npos) v = 0;
  }
  fill_decoder(code, inst.joint, inst.f);
  return code;
}

SchemeCode build_kdelta(const Instance& inst) {
  if (inst.peel_groups.empty())
    throw ValidationError("kdelta code needs the instance peel groups");
  SchemeCode code;
  code.scheme = "kdelta";
  code.accounting = RateAccounting::per_group_indicators;
  init_shape(code, inst.joint);
  GFGraph g = build_gf(inst.joint, inst.f);
  LowProbEdgeScheme lp = low_prob_edge_scheme(g, inst.peel_groups);
  const std::size_t groups = inst.peel_groups.size();

  std::size_t next = 1;
  code.indicator_groups.assign(groups, {});
  for (std::size_t i = 0; i < lp.decomposition.pieces.size(); ++i) {
    for (std::size_t e : lp.decomposition.pieces[i]) {
      const std::size_t id = i < groups ? next++ : 0;
      if (i < groups) code.indicator_groups[i].push_back(id);
      for (const Cell& c : g.edges[e].cells) code.helper_of[c.row][c.col] = id;
    }
  }
  code.helper_symbols = next;

  std::vector<std::size_t> residual;
  for (std::size_t i = groups; i < lp.decomposition.pieces.size(); ++i)
    residual.insert(residual.end(), lp.decomposition.pieces[i].begin(),
                    lp.decomposition.pieces[i].end());
  PooledClassCode pooled = pooled_class_code(g, residual, 1);
  std::vector<std::size_t> sym(inst.joint.rows());
  for (std::size_t s = 0; s < sym.size(); ++s)
    sym[s] = pooled.color_of_class[g.classes1.class_of[s]];
  code.color1.assign(code.helper_symbols, sym);
  code.color2.assign(code.helper_symbols,
                     std::vector<std::size_t>(inst.joint.cols(), 0));
  fill_decoder(code, inst.joint, inst.f);
  return code;
}

SchemeCode build_ks(const Instance& inst) {
  if (inst.peel.empty())
    throw ValidationError("ks code needs the instance peel edge list");
  SchemeCode code;
  code.scheme = "ks";
  code.accounting = RateAccounting::unconditional_sources;
  init_shape(code, inst.joint);
  GFGraph g = build_gf(inst.joint, inst.f);
  StructureSplitScheme ss = structure_split_scheme(g, inst.peel);
  code.helper_symbols = 2;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t e : ss.decomposition.pieces[k])
      for (const Cell& c : g.edges[e].cells) code.helper_of[c.row][c.col] = k;

  PooledClassCode p1 = pooled_class_code(g, ss.decomposition.pieces[0], 1);
  PooledClassCode p2 = pooled_class_code(g, ss.decomposition.pieces[0], 2);
  const int sender = p2.bits < p1.bits ? 2 : 1;
  const PooledClassCode& pooled = sender == 1 ? p1 : p2;
  const ClassPartition& cp = sender == 1 ? g.classes1 : g.classes2;
  const std::size_t n =
      sender == 1 ? inst.joint.rows() : inst.joint.cols();
  std::vector<std::size_t> sym(n);
  for (std::size_t s = 0; s < n; ++s)
    sym[s] = pooled.color_of_class[cp.class_of[s]];
  if (sender == 1) {
    code.color1.assign(2, sym);
    code.color2.assign(2, std::vector<std::size_t>(inst.joint.cols(), 0));
  } else {
    code.color1.assign(2, std::vector<std::size_t>(inst.joint.rows(), 0));
    code.color2.assign(2, sym);
  }
  fill_decoder(code, inst.joint, inst.f);
  return code;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct ShardCounts {
  std::vector<std::uint64_t> helper;
  std::vector<std::uint64_t> joint1;  // helper * width1 + color
  std::vector<std::uint64_t> joint2;
  std::uint64_t errors = 0;
};

double count_entropy(const std::vector<std::uint64_t>& counts) {
  Dist d;
  for (std::uint64_t v : counts)
    if (v) d.push_back(static_cast<double>(v));
  if (d.empty()) return 0.0;
  return entropy(normalized(d));
}

}  // namespace

std::string scheme_kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::prop1: return "prop1";
    case SchemeKind::prop3: return "prop3";
    case SchemeKind::kB: return "kb";
    case SchemeKind::kdelta: return "kdelta";
    case SchemeKind::kS: return "ks";
  }
  throw ValidationError("unknown scheme kind");
}

SchemeKind scheme_kind_from_name(const std::string& name) {
  std::string low;
  for (char c : name) low.push_back(static_cast<char>(std::tolower(c)));
  if (low == "prop1") return SchemeKind::prop1;
  if (low == "prop3") return SchemeKind::prop3;
  if (low == "kb") return SchemeKind::kB;
  if (low == "kdelta") return SchemeKind::kdelta;
  if (low == "ks") return SchemeKind::kS;
  throw ValidationError("unknown scheme '" + name +
                        "' (expected prop1, prop3, kb, kdelta or ks)");
}

SchemeCode build_code(SchemeKind kind, const Instance& inst,
                      const ColoringOptions& copt) {
  switch (kind) {
    case SchemeKind::prop1: return build_prop1(inst, copt);
    case SchemeKind::prop3: return build_prop3(inst);
    case SchemeKind::kB: return build_kb(inst, copt);
    case SchemeKind::kdelta: return build_kdelta(inst);
    case SchemeKind::kS: return build_ks(inst);
  }
  throw ValidationError("unknown scheme kind");
}

SimulationReport simulate(const SchemeCode& code, const JointPMF& j,
                          std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0)
    throw ValidationError("simulate: samples must be at least 1");
  if (code.helper_of.size() != j.rows() ||
      code.helper_of.empty() || code.helper_of[0].size() != j.cols())
    throw ValidationError("simulate: code shape does not match the pmf");

  const std::vector<Cell> cells = j.support();
  std::vector<double> cum;
  cum.reserve(cells.size());
  double acc = 0.0;
  for (const Cell& c : cells) {
    acc += j.p(c.row, c.col);
    cum.push_back(acc);
  }

  const std::size_t nh = code.helper_symbols;
  std::size_t w1 = 1, w2 = 1;
  for (const auto& row : code.color1)
    for (std::size_t v : row) w1 = std::max(w1, v + 1);
  for (const auto& row : code.color2)
    for (std::size_t v : row) w2 = std::max(w2, v + 1);

  auto run_shard = [&](std::uint64_t count, std::uint64_t shard_seed) {
    ShardCounts sc;
    sc.helper.assign(nh, 0);
    sc.joint1.assign(nh * w1, 0);
    sc.joint2.assign(nh * w2, 0);
    std::mt19937_64 rng(shard_seed);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      std::size_t idx =
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
      if (idx >= cells.size()) idx = cells.size() - 1;
      const Cell& c = cells[idx];
      const std::size_t h = code.helper_of[c.row][c.col];
      if (h == SchemeCode::npos) {
        sc.errors++;
        continue;
      }
      const std::size_t c1 = code.color1[h][c.row];
      const std::size_t c2 = code.color2[h][c.col];
      sc.helper[h]++;
      sc.joint1[h * w1 + c1]++;
      sc.joint2[h * w2 + c2]++;
      auto it = code.decoder.find({h, c1, c2});
      const std::optional<Label>& want = code.truth[c.row][c.col];
      if (it == code.decoder.end() || !want || !(it->second == *want))
        sc.errors++;
    }
    return sc;
  };

  constexpr std::uint64_t kShards = 4;
  std::vector<std::future<ShardCounts>> futs;
  for (std::uint64_t s = 0; s < kShards; ++s) {
    const std::uint64_t count =
        samples / kShards + (s < samples % kShards ? 1 : 0);
    const std::uint64_t shard_seed =
        splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (s + 1)));
    futs.push_back(std::async(std::launch::async, run_shard, count, shard_seed));
  }
  ShardCounts total;
  total.helper.assign(nh, 0);
  total.joint1.assign(nh * w1, 0);
  total.joint2.assign(nh * w2, 0);
  for (auto& f : futs) {
    ShardCounts sc = f.get();
    for (std::size_t i = 0; i < total.helper.size(); ++i)
      total.helper[i] += sc.helper[i];
    for (std::size_t i = 0; i < total.joint1.size(); ++i)
      total.joint1[i] += sc.joint1[i];
    for (std::size_t i = 0; i < total.joint2.size(); ++i)
      total.joint2[i] += sc.joint2[i];
    total.errors += sc.errors;
  }

  SimulationReport rep;
  rep.scheme = code.scheme;
  rep.samples = samples;
  rep.seed = seed;
  rep.errors = total.errors;

  auto fold1 = [&] {
    std::vector<std::uint64_t> m(w1, 0);
    for (std::size_t h = 0; h < nh; ++h)
      for (std::size_t c = 0; c < w1; ++c) m[c] += total.joint1[h * w1 + c];
    return m;
  };
  auto fold2 = [&] {
    std::vector<std::uint64_t> m(w2, 0);
    for (std::size_t h = 0; h < nh; ++h)
      for (std::size_t c = 0; c < w2; ++c) m[c] += total.joint2[h * w2 + c];
    return m;
  };

  switch (code.accounting) {
    case RateAccounting::conditional_on_helper: {
      const double hh = count_entropy(total.helper);
      rep.helper_bits = hh;
      rep.source_bits[0] = clamp0(count_entropy(total.joint1) - hh);
      rep.source_bits[1] = clamp0(count_entropy(total.joint2) - hh);
      break;
    }
    case RateAccounting::per_group_indicators: {
      std::uint64_t encoded = 0;
      for (std::uint64_t v : total.helper) encoded += v;
      double bits = 0.0;
      for (const auto& group : code.indicator_groups) {
        std::vector<std::uint64_t> stream;
        std::uint64_t rest = encoded;
        for (std::size_t id : group) {
          stream.push_back(total.helper[id]);
          rest -= total.helper[id];
        }
        stream.push_back(rest);
        bits += count_entropy(stream);
      }
      rep.helper_bits = bits;
      rep.source_bits[0] = count_entropy(fold1());
      rep.source_bits[1] = count_entropy(fold2());
      break;
    }
    case RateAccounting::unconditional_sources: {
      rep.helper_bits = count_entropy(total.helper);
      rep.source_bits[0] = count_entropy(fold1());
      rep.source_bits[1] = count_entropy(fold2());
      break;
    }
  }
  rep.total = rep.helper_bits + rep.source_bits[0] + rep.source_bits[1];
  return rep;
}

std::string report_to_json(const SimulationReport& r) {
  nlohmann::json doc;
  doc["scheme"] = r.scheme;
  doc["samples"] = r.samples;
  doc["seed"] = r.seed;
  doc["errors"] = r.errors;
  doc["helper_bits"] = r.helper_bits;
  doc["source_bits"] = {r.source_bits[0], r.source_bits[1]};
  doc["total"] = r.total;
  return doc.dump(2);
}

}  // namespace fcomp
