#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fcomp/coding_simulator.hpp"
#include "fcomp/common_information.hpp"
#include "fcomp/error.hpp"
#include "fcomp/gf_graph.hpp"
#include "fcomp/graph_entropy.hpp"
#include "fcomp/instances.hpp"
#include "fcomp/probability.hpp"
#include "fcomp/rate_regions.hpp"
#include "fcomp/scenario.hpp"

namespace fcomp {

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  std::size_t budget = 0;
};

SolverOptions solver_opts(const GlobalOpts& g) {
  SolverOptions s;
  if (g.budget != 0) s.max_iters = g.budget;
  return s;
}

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

// A file path wins; otherwise the argument (with any directory part and a
// .json suffix stripped) must be a bundled instance name.
Instance load_instance(const std::string& arg) {
  {
    std::ifstream in(arg);
    if (in.good()) {
      std::stringstream ss;
      ss << in.rdbuf();
      return instance_from_json(ss.str());
    }
  }
  std::string name = arg;
  std::size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name.erase(0, slash + 1);
  if (name.size() > 5 && name.rfind(".json") == name.size() - 5)
    name.resize(name.size() - 5);
  const std::vector<std::string> names = instance_names();
  if (std::count(names.begin(), names.end(), name)) return make_instance(name);
  std::string known;
  for (const std::string& n : names) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("instance \"" + arg +
                        "\" is neither a readable file nor one of the "
                        "bundled names (" +
                        known + ")");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void deliver(const GlobalOpts& g, std::ostream& out, const std::string& text) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out_path);
  if (!file) throw ValidationError("cannot write " + g.out_path);
  file << text;
  if (!file.flush()) throw ValidationError("failed writing " + g.out_path);
}

std::string run_entropy(const Instance& inst, const GlobalOpts& g) {
  const SolverOptions opt = solver_opts(g);
  nlohmann::json sources = nlohmann::json::array();
  std::ostringstream csv;
  csv << "source,h,h_graph,h_graph_conditional\n";
  for (int source : {1, 2}) {
    double h = marginal_entropy(inst.joint, source);
    double hg = graph_entropy(inst.joint, inst.f, source, opt);
    double hc = conditional_graph_entropy(inst.joint, inst.f, source, opt).bits;
    csv << source << ',' << f6(h) << ',' << f6(hg) << ',' << f6(hc) << '\n';
    sources.push_back({{"source", source},
                       {"h", h},
                       {"h_graph", hg},
                       {"h_graph_conditional", hc}});
  }
  if (g.format == "json")
    return nlohmann::json{{"instance", inst.name}, {"sources", sources}}
               .dump(2) +
           "\n";
  return csv.str();
}

std::string run_gkw(const Instance& inst, const GlobalOpts& g) {
  GKWDecomposition d = gkw_decompose(inst.joint);
  if (g.format == "json")
    return nlohmann::json{{"instance", inst.name},
                          {"components", d.components.size()},
                          {"bits", d.bits},
                          {"masses", d.masses}}
               .dump(2) +
           "\n";
  std::ostringstream csv;
  csv << "components,bits,masses\n" << d.components.size() << ',' << f6(d.bits)
      << ',';
  for (std::size_t i = 0; i < d.masses.size(); ++i)
    csv << (i ? ";" : "") << f6(d.masses[i]);
  csv << '\n';
  return csv.str();
}

std::string run_fci(const Instance& inst, const std::string& nesting_path,
                    std::size_t max_nests, const GlobalOpts& g) {
  std::string origin;
  Nesting nesting;
  bool complete = true;
  std::size_t examined = 0;
  if (!nesting_path.empty()) {
    origin = "file";
    nesting = nesting_from_json(slurp(nesting_path), inst.joint, inst.f);
  } else if (inst.nesting) {
    origin = "bundled";
    nesting = *inst.nesting;
  } else {
    origin = "search";
    NestSearchOptions opt;
    opt.max_nests = max_nests;
    if (g.budget != 0) opt.budget = g.budget;
    NestSearchResult r = nest_search(inst.joint, inst.f, opt);
    nesting = r.nesting;
    complete = r.complete;
    examined = r.examined;
  }
  FunctionalCI ci = functional_ci_entropy(nesting, inst.joint, inst.f);
  if (g.format == "json") {
    nlohmann::json j{{"instance", inst.name},
                     {"origin", origin},
                     {"nests", nesting.nests.size()},
                     {"index_bits", ci.index_bits},
                     {"within_bits", ci.within_bits},
                     {"total", ci.total},
                     {"complete", complete},
                     {"nesting", nlohmann::json::parse(
                                     nesting_to_json(nesting, inst.joint))}};
    if (origin == "search") j["examined"] = examined;
    return j.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "origin,nests,index_bits,within_bits,total,complete\n"
      << origin << ',' << nesting.nests.size() << ',' << f6(ci.index_bits)
      << ',' << f6(ci.within_bits) << ',' << f6(ci.total) << ','
      << (complete ? "true" : "false") << '\n';
  return csv.str();
}

std::string run_gf(const Instance& inst, const GlobalOpts& g) {
  GFGraph graph = build_gf(inst.joint, inst.f);
  BipartitionScheme bi = bipartition_scheme(graph);
  std::optional<LowProbEdgeScheme> low;
  if (!inst.peel_groups.empty())
    low = low_prob_edge_scheme(graph, inst.peel_groups);
  std::optional<StructureSplitScheme> split;
  if (!inst.peel.empty()) split = structure_split_scheme(graph, inst.peel);

  if (g.format == "json") {
    nlohmann::json j{{"instance", inst.name},
                     {"classes1", graph.parts1()},
                     {"classes2", graph.parts2()},
                     {"edges", graph.edges.size()},
                     {"bipartition_bits", bi.bits},
                     {"bipartition_pieces", bi.decomposition.pieces.size()}};
    if (low) {
      j["low_prob_edge_bits"] = low->bits;
      j["residual_components"] = low->residual_components;
    }
    if (split) {
      j["structure_split_bits"] = split->bits;
      j["piece_mass"] = split->piece_mass;
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "key,value\n";
  csv << "classes1," << graph.parts1() << '\n';
  csv << "classes2," << graph.parts2() << '\n';
  csv << "edges," << graph.edges.size() << '\n';
  csv << "bipartition_pieces," << bi.decomposition.pieces.size() << '\n';
  csv << "bipartition_bits," << f6(bi.bits) << '\n';
  if (low) csv << "low_prob_edge_bits," << f6(low->bits) << '\n';
  if (split) csv << "structure_split_bits," << f6(split->bits) << '\n';
  return csv.str();
}

std::string run_rates(const Instance& inst, const GlobalOpts& g) {
  const SolverOptions opt = solver_opts(g);
  const std::string params = "instance=" + inst.name;
  const double h_f = function_entropy(inst.f, inst.joint).second;
  const double h_joint = joint_entropy(inst.joint);

  std::vector<RateRegionSummary> rows;
  rows.push_back(slepian_wolf(inst.joint));
  rows.push_back(functional_region(inst.joint, inst.f, opt));
  rows.push_back(prop1_gkw_helper(inst.joint, inst.f, opt));
  if (inst.nesting) {
    rows.push_back(prop2_joint_with_kf(inst.joint, inst.f, *inst.nesting));
    rows.push_back(prop3_one_source(inst.joint, inst.f, *inst.nesting, opt));
  }
  rows.push_back(prop4_permutation_helper(inst.joint, inst.f, opt));

  if (g.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const RateRegionSummary& r : rows)
      arr.push_back({{"scheme", r.scheme},
                     {"r1", r.r1},
                     {"r2", r.r2},
                     {"helper_bits", r.helper_bits},
                     {"sum", r.sum},
                     {"notes", r.notes}});
    return nlohmann::json{{"instance", inst.name},
                          {"h_f", h_f},
                          {"h_joint", h_joint},
                          {"rows", arr}}
               .dump(2) +
           "\n";
  }
  std::ostringstream csv;
  csv << rate_csv_header() << '\n';
  for (const RateRegionSummary& r : rows)
    csv << rate_csv_row(r, params, h_f, h_joint) << '\n';
  return csv.str();
}

std::string run_simulate(const Instance& inst, const std::string& scheme,
                         std::uint64_t samples, const GlobalOpts& g) {
  ColoringOptions copt;
  if (g.budget != 0) copt.node_budget = g.budget;
  SchemeCode code = build_code(scheme_kind_from_name(scheme), inst, copt);
  SimulationReport r = simulate(code, inst.joint, samples, g.seed);
  if (g.format == "json") return report_to_json(r) + "\n";
  std::ostringstream csv;
  csv << "scheme,samples,seed,errors,helper_bits,source1_bits,source2_bits,"
         "total\n"
      << r.scheme << ',' << r.samples << ',' << r.seed << ',' << r.errors
      << ',' << f6(r.helper_bits) << ',' << f6(r.source_bits[0]) << ','
      << f6(r.source_bits[1]) << ',' << f6(r.total) << '\n';
  return csv.str();
}

}  // namespace

int cli_dispatch(std::vector<std::string> args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"zero-error functional compression toolkit"};
  app.name("fcomp");
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for sampling commands");
  app.add_option("--out", g.out_path, "write the output to this file");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--budget", g.budget,
                 "work cap for iterative solvers and searches");

  struct {
    std::string instance;
    std::string nesting;
    std::size_t max_nests = 4;
    std::string scheme;
    std::uint64_t samples = 100000;
    std::string scenario_id;
    std::string grid;
    double lambda = 5.0;
    std::vector<std::size_t> sizes{8, 4, 2, 2};
    std::string scenario_instance;
  } a;

  CLI::App* entropy_cmd = app.add_subcommand(
      "entropy", "marginal, graph, and conditional graph entropies");
  entropy_cmd->add_option("--instance", a.instance, "instance file or name")
      ->required();
  entropy_cmd->callback(
      [&] { deliver(g, out, run_entropy(load_instance(a.instance), g)); });

  CLI::App* gkw_cmd =
      app.add_subcommand("gkw", "classical common part of the pair");
  gkw_cmd->add_option("--instance", a.instance, "instance file or name")
      ->required();
  gkw_cmd->callback(
      [&] { deliver(g, out, run_gkw(load_instance(a.instance), g)); });

  CLI::App* fci_cmd = app.add_subcommand(
      "fci", "refined common part: bundled or supplied nesting, else search");
  fci_cmd->add_option("--instance", a.instance, "instance file or name")
      ->required();
  fci_cmd->add_option("--nesting", a.nesting, "nesting file to evaluate");
  fci_cmd->add_option("--max-nests", a.max_nests, "search cap on nest count");
  fci_cmd->callback([&] {
    deliver(g, out,
            run_fci(load_instance(a.instance), a.nesting, a.max_nests, g));
  });

  CLI::App* gf_cmd =
      app.add_subcommand("gf", "outcome graph and its split schemes");
  gf_cmd->add_option("--instance", a.instance, "instance file or name")
      ->required();
  gf_cmd->callback(
      [&] { deliver(g, out, run_gf(load_instance(a.instance), g)); });

  CLI::App* rates_cmd =
      app.add_subcommand("rates", "rate region corners for an instance");
  rates_cmd->add_option("--instance", a.instance, "instance file or name")
      ->required();
  rates_cmd->callback(
      [&] { deliver(g, out, run_rates(load_instance(a.instance), g)); });

  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "build a one-shot scheme code and sample it");
  sim_cmd->add_option("--instance", a.instance, "instance file or name")
      ->required();
  sim_cmd->add_option("--scheme", a.scheme, "prop1, prop3, kb, kdelta, or ks")
      ->required();
  sim_cmd->add_option("--samples", a.samples, "number of sampled pairs");
  sim_cmd->callback([&] {
    deliver(g, out,
            run_simulate(load_instance(a.instance), a.scheme, a.samples, g));
  });

  CLI::App* scen_cmd =
      app.add_subcommand("scenario", "parameter sweep over a bundled family");
  scen_cmd->add_option("id", a.scenario_id, "scenario name")->required();
  scen_cmd->add_option("--grid", a.grid, "parameter grid start:stop:step")
      ->required();
  scen_cmd->add_option("--lambda", a.lambda, "poisson rate");
  scen_cmd->add_option("--sizes", a.sizes, "zipf block sizes")
      ->delimiter(',');
  scen_cmd->add_option("--instance", a.scenario_instance,
                       "block instance for the distribution sweeps");
  scen_cmd->callback([&] {
    if (g.format == "json")
      throw ValidationError("scenario output is csv only");
    SweepSpec spec;
    spec.scenario = a.scenario_id;
    spec.grid = parse_grid(a.grid);
    spec.lambda = a.lambda;
    spec.zipf_sizes = a.sizes;
    spec.solver = solver_opts(g);
    if (!a.scenario_instance.empty())
      spec.instance = load_instance(a.scenario_instance);
    deliver(g, out, run_scenario(spec));
  });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "fcomp: " << e.what() << "\n";
    return 1;
  } catch (const BudgetExceeded& e) {
    err << "fcomp: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceFailure& e) {
    err << "fcomp: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "fcomp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fcomp
