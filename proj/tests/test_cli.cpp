#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fcomp/coding_simulator.hpp"
#include "fcomp/common_information.hpp"
#include "fcomp/gf_graph.hpp"
#include "fcomp/graph_entropy.hpp"
#include "fcomp/instances.hpp"
#include "fcomp/rate_regions.hpp"

using namespace fcomp;

TEST_SUITE_BEGIN("cli");

namespace {

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int rc = cli_dispatch(std::move(args), out, err);
  return {rc, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("help and usage errors") {
  Run help = cli({"--help"});
  CHECK(help.rc == 0);
  CHECK(help.out.find("entropy") != std::string::npos);
  CHECK(help.out.find("scenario") != std::string::npos);
  CHECK(help.out.find("simulate") != std::string::npos);

  Run none = cli({});
  CHECK(none.rc == 1);
  CHECK_FALSE(none.err.empty());
  CHECK(none.out.empty());

  Run badflag = cli({"gkw", "--no-such-flag"});
  CHECK(badflag.rc == 1);
  CHECK_FALSE(badflag.err.empty());

  Run badformat = cli({"--format", "xml", "gkw", "--instance", "fig2"});
  CHECK(badformat.rc == 1);

  Run unknown = cli({"gkw", "--instance", "nope"});
  CHECK(unknown.rc == 1);
  CHECK(unknown.err.find("bundled names") != std::string::npos);
}

TEST_CASE("gkw prints the classical common part") {
  Run r = cli({"gkw", "--instance", "fig2"});
  REQUIRE(r.rc == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "components,bits,masses");
  CHECK(ls[1] == "2,0.918296,0.333333;0.666667");

  // The data file name resolves to the bundled instance as well.
  Run suffixed = cli({"gkw", "--instance", "fig2.json"});
  CHECK(suffixed.rc == 0);
  CHECK(suffixed.out == r.out);

  Run j = cli({"--format", "json", "gkw", "--instance", "fig2"});
  REQUIRE(j.rc == 0);
  nlohmann::json doc = nlohmann::json::parse(j.out);
  CHECK(doc["instance"] == "fig2");
  CHECK(doc["components"] == 2);
  CHECK(doc["bits"].get<double>() ==
        doctest::Approx(gkw_entropy(make_instance("fig2").joint))
            .epsilon(1e-12));
}

TEST_CASE("rates emits every region row for a bundled instance") {
  Run r = cli({"rates", "--instance", "example2.json"});
  REQUIRE(r.rc == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 7);
  CHECK(ls[0] == rate_csv_header());
  CHECK(ls[1].rfind("slepian_wolf,instance=example2,", 0) == 0);
  bool saw_helper_row = false;
  for (const std::string& line : ls)
    if (line.rfind("prop4", 0) == 0 &&
        line.find(",1.979574,") != std::string::npos)
      saw_helper_row = true;
  CHECK(saw_helper_row);

  Run j = cli({"--format", "json", "rates", "--instance", "example2"});
  REQUIRE(j.rc == 0);
  nlohmann::json doc = nlohmann::json::parse(j.out);
  CHECK(doc["rows"].size() == 6);
  CHECK(doc["h_f"].get<double>() == doctest::Approx(1.7295739585136223));

  // No nesting bundled: the two nesting rows drop out.
  Run bare = cli({"--format", "json", "rates", "--instance", "example4"});
  REQUIRE(bare.rc == 0);
  CHECK(nlohmann::json::parse(bare.out)["rows"].size() == 4);
}

TEST_CASE("entropy reports marginal, graph, and conditional rates") {
  Run r = cli({"entropy", "--instance", "example1"});
  REQUIRE(r.rc == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "source,h,h_graph,h_graph_conditional");
  CHECK(ls[1].rfind("1,2.321928,1.521928,", 0) == 0);

  Run j = cli({"--format", "json", "entropy", "--instance", "example1"});
  REQUIRE(j.rc == 0);
  nlohmann::json doc = nlohmann::json::parse(j.out);
  REQUIRE(doc["sources"].size() == 2);
  Instance inst = make_instance("example1");
  CHECK(doc["sources"][0]["h_graph"].get<double>() ==
        doctest::Approx(graph_entropy(inst.joint, inst.f, 1)).epsilon(1e-12));
}

TEST_CASE("fci prefers the supplied nesting, then bundled, then search") {
  Run bundled = cli({"fci", "--instance", "example2"});
  REQUIRE(bundled.rc == 0);
  CHECK(lines(bundled.out)[1].rfind("bundled,", 0) == 0);

  Run searched = cli({"--format", "json", "fci", "--instance", "example3"});
  REQUIRE(searched.rc == 0);
  nlohmann::json doc = nlohmann::json::parse(searched.out);
  CHECK(doc["origin"] == "search");
  CHECK(doc["complete"] == true);
  CHECK(doc["total"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));

  Instance fig = make_instance("fig3");
  std::string path = "cli_nesting_test.json";
  {
    std::ofstream f(path);
    f << nesting_to_json(*fig.nesting, fig.joint);
  }
  Run file = cli({"fci", "--instance", "fig3", "--nesting", path});
  std::remove(path.c_str());
  REQUIRE(file.rc == 0);
  std::vector<std::string> ls = lines(file.out);
  CHECK(ls[1].rfind("file,4,", 0) == 0);
  FunctionalCI ci = functional_ci_entropy(*fig.nesting, fig.joint, fig.f);
  char want[64];
  std::snprintf(want, sizeof want, "%.6f", ci.total);
  CHECK(ls[1].find(want) != std::string::npos);
}

TEST_CASE("gf reports the outcome graph and bundled split schemes") {
  Run r = cli({"gf", "--instance", "petersen"});
  REQUIRE(r.rc == 0);
  CHECK(r.out.find("classes1,3") != std::string::npos);
  CHECK(r.out.find("structure_split_bits,0.609840") != std::string::npos);
  CHECK(r.out.find("low_prob_edge_bits") == std::string::npos);

  Run kd = cli({"--format", "json", "gf", "--instance", "example4"});
  REQUIRE(kd.rc == 0);
  nlohmann::json doc = nlohmann::json::parse(kd.out);
  Instance inst = make_instance("example4");
  GFGraph graph = build_gf(inst.joint, inst.f);
  CHECK(doc["edges"] == graph.edges.size());
  CHECK(doc["low_prob_edge_bits"].get<double>() ==
        doctest::Approx(low_prob_edge_scheme(graph, inst.peel_groups).bits)
            .epsilon(1e-12));
  CHECK_FALSE(doc.contains("structure_split_bits"));
}

TEST_CASE("simulate runs a seeded reproducible sampling") {
  std::vector<std::string> args{"--seed",   "7",        "simulate",
                                "--instance", "example3", "--scheme",
                                "kb",       "--samples", "20000"};
  Run first = cli(args);
  REQUIRE(first.rc == 0);
  Run second = cli(args);
  CHECK(first.out == second.out);
  std::vector<std::string> ls = lines(first.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] ==
        "scheme,samples,seed,errors,helper_bits,source1_bits,source2_bits,"
        "total");
  CHECK(ls[1].rfind("kb,20000,7,0,", 0) == 0);

  Run j = cli({"--seed", "7", "--format", "json", "simulate", "--instance",
               "example3", "--scheme", "kb", "--samples", "20000"});
  REQUIRE(j.rc == 0);
  nlohmann::json doc = nlohmann::json::parse(j.out);
  CHECK(doc["errors"] == 0);
  CHECK(doc["seed"] == 7);
  CHECK(doc["total"].get<double>() == doctest::Approx(1.5).epsilon(0.05));

  // A scheme that cannot decode one-shot on the instance is an input error.
  Run collide = cli({"simulate", "--instance", "petersen", "--scheme", "kb"});
  CHECK(collide.rc == 1);
  CHECK(collide.err.find("decoder collision") != std::string::npos);
}

TEST_CASE("scenario emits the sweep csv and rejects json") {
  Run r = cli({"scenario", "kdelta-low", "--grid", "0:0.5:0.1"});
  REQUIRE(r.rc == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 8);
  CHECK(ls[0] == "# fcomp scenario csv v1");
  CHECK(ls[2].rfind("kdelta-low,0.000000,", 0) == 0);
  CHECK(ls[3].find(",ok") != std::string::npos);

  Run sized = cli({"scenario", "zipf-gain", "--grid", "0:0:1", "--sizes",
                   "4,4,4,4"});
  REQUIRE(sized.rc == 0);
  CHECK(lines(sized.out)[2].find("8.000000,6.000000,ok") !=
        std::string::npos);

  Run j = cli({"--format", "json", "scenario", "zipf-gain", "--grid",
               "0:1:1"});
  CHECK(j.rc == 1);
  CHECK(j.err.find("csv only") != std::string::npos);

  Run badgrid = cli({"scenario", "zipf-gain", "--grid", "1:0:1"});
  CHECK(badgrid.rc == 1);
}

TEST_CASE("instance files load by path and output lands in --out") {
  Instance inst = make_instance("example2");
  std::string inst_path = "cli_instance_test.json";
  {
    std::ofstream f(inst_path);
    f << instance_to_json(inst);
  }
  Run by_path = cli({"gkw", "--instance", inst_path});
  Run by_name = cli({"gkw", "--instance", "example2"});
  std::remove(inst_path.c_str());
  REQUIRE(by_path.rc == 0);
  CHECK(by_path.out == by_name.out);

  std::string out_path = "cli_out_test.csv";
  Run redirected = cli({"gkw", "--instance", "fig2", "--out", out_path});
  REQUIRE(redirected.rc == 0);
  CHECK(redirected.out.empty());
  std::ifstream in(out_path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  in.close();
  std::remove(out_path.c_str());
  CHECK(buf.str() == cli({"gkw", "--instance", "fig2"}).out);

  Run badout = cli({"gkw", "--instance", "fig2", "--out",
                    "no_such_dir/x.csv"});
  CHECK(badout.rc == 1);
  CHECK(badout.err.find("cannot write") != std::string::npos);
}

TEST_CASE("solver budget exhaustion exits with code two") {
  Run r = cli({"--budget", "1", "entropy", "--instance", "example2"});
  CHECK(r.rc == 2);
  CHECK(r.err.find("tolerance") != std::string::npos);

  // Enough budget converges again.
  Run fine = cli({"--budget", "5000", "entropy", "--instance", "example2"});
  CHECK(fine.rc == 0);
}

TEST_SUITE_END();
