#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcomp/common_information.hpp"
#include "fcomp/error.hpp"
#include "fcomp/gf_graph.hpp"
#include "fcomp/graph_entropy.hpp"
#include "fcomp/instances.hpp"
#include "fixtures.hpp"

using namespace fcomp;

TEST_SUITE_BEGIN("instances");

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool same_pmf(const JointPMF& a, const JointPMF& b) {
  if (!(a.x1() == b.x1()) || !(a.x2() == b.x2())) return false;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.p(r, c) != b.p(r, c)) return false;
  return true;
}

}  // namespace

TEST_CASE("builders reproduce the worked quantities") {
  Instance e1 = example1();
  CHECK(marginal_entropy(e1.joint, 1) ==
        doctest::Approx(std::log2(5.0)).epsilon(1e-12));
  CHECK(same_pmf(e1.joint, fixtures::example1_pmf()));

  CHECK(gkw_entropy(fig2().joint) ==
        doctest::Approx(0.9182958340544896).epsilon(1e-12));

  Instance e2 = example2();
  CHECK(same_pmf(e2.joint, fixtures::example2_pmf()));
  REQUIRE(e2.nesting.has_value());
  FunctionalCI ci = functional_ci_entropy(*e2.nesting, e2.joint, e2.f);
  CHECK(ci.total == doctest::Approx(1.7295739585136223).epsilon(1e-10));

  CHECK(gkw_entropy(example3().joint) == doctest::Approx(1.5).epsilon(1e-12));

  Instance e4 = example4(0.1);
  CHECK(function_entropy(e4.f, e4.joint).second ==
        doctest::Approx(1.198892336661554).epsilon(1e-10));
  CHECK(same_pmf(e4.joint, fixtures::example4_pmf(0.1)));

  Instance e5 = example5(0.1);
  CHECK(same_pmf(e5.joint, fixtures::example5_pmf(0.1)));

  Instance pe = petersen(0.2);
  CHECK(joint_entropy(pe.joint) ==
        doctest::Approx(1.7332062193464952).epsilon(1e-10));
  CHECK(function_entropy(pe.f, pe.joint).second ==
        doctest::Approx(1.236160254373812).epsilon(1e-10));

  Instance st = correlated_star(0.2);
  CHECK(marginal_entropy(st.joint, 2) ==
        doctest::Approx(0.673202098256523).epsilon(1e-10));
}

TEST_CASE("bundled peels drive the edge schemes") {
  Instance e4 = example4(0.1);
  GFGraph g4 = build_gf(e4.joint, e4.f);
  LowProbEdgeScheme s4 = low_prob_edge_scheme(g4, e4.peel_groups);
  CHECK(s4.bits ==
        doctest::Approx(2 * binary_entropy(0.1 / 3)).epsilon(1e-12));
  CHECK(s4.disconnects);

  Instance e5 = example5(0.1);
  LowProbEdgeScheme s5 =
      low_prob_edge_scheme(build_gf(e5.joint, e5.f), e5.peel_groups);
  CHECK(s5.bits == doctest::Approx(0.840052003376176).epsilon(1e-10));

  Instance pe = petersen(0.2);
  StructureSplitScheme sp =
      structure_split_scheme(build_gf(pe.joint, pe.f), pe.peel);
  CHECK(sp.bits == doctest::Approx(0.6098403047164005).epsilon(1e-10));

  Instance st = correlated_star(0.2);
  StructureSplitScheme ss =
      structure_split_scheme(build_gf(st.joint, st.f), st.peel);
  CHECK(ss.bits == doctest::Approx(0.6577047787442198).epsilon(1e-10));
}

TEST_CASE("the block instance carries a four-nest split") {
  Instance f3 = fig3();
  REQUIRE(f3.nesting.has_value());
  REQUIRE(f3.nesting->nests.size() == 4);
  FunctionalCI ci = functional_ci_entropy(*f3.nesting, f3.joint, f3.f);
  CHECK(ci.index_bits == doctest::Approx(1.956066972363038).epsilon(1e-10));
  CHECK(ci.total == doctest::Approx(2.3370193533154193).epsilon(1e-10));

  NestMarginalRates rates = nest_marginal_rates(*f3.nesting, f3.joint, f3.f);
  double r1 = 0.0;
  for (std::size_t i = 0; i < rates.rate1.size(); ++i)
    r1 += ci.nest_masses[i] * rates.rate1[i];
  CHECK(r1 == doctest::Approx(8.0 / 21.0).epsilon(1e-10));
}

TEST_CASE("parameter ranges are enforced") {
  CHECK_THROWS_AS(example4(0.0), ValidationError);
  CHECK_THROWS_AS(example4(1.0), ValidationError);
  CHECK_THROWS_AS(example5(0.5), ValidationError);
  CHECK_THROWS_AS(petersen(0.5), ValidationError);
  CHECK_THROWS_AS(correlated_star(-0.1), ValidationError);
}

TEST_CASE("names resolve to builders") {
  std::vector<std::string> names = instance_names();
  REQUIRE(names.size() == 9);
  for (const std::string& name : names)
    CHECK(make_instance(name).name == name);
  CHECK_THROWS_AS(make_instance("example9"), ValidationError);
}

TEST_CASE("instances round-trip through json") {
  for (const std::string& name : instance_names()) {
    CAPTURE(name);
    Instance a = make_instance(name);
    std::string text = instance_to_json(a);
    Instance b = instance_from_json(text);
    CHECK(same_pmf(a.joint, b.joint));
    CHECK(a.name == b.name);
    CHECK(a.notes == b.notes);
    CHECK(a.peel == b.peel);
    CHECK(a.peel_groups == b.peel_groups);
    CHECK(a.nesting.has_value() == b.nesting.has_value());
    CHECK(instance_to_json(b) == text);
  }
  CHECK_THROWS_AS(instance_from_json("{"), ValidationError);
  CHECK_THROWS_AS(instance_from_json("{\"pmf\": {}}"), ValidationError);
}

TEST_CASE("bundled files match the builders and round-trip") {
  for (const std::string& name : instance_names()) {
    CAPTURE(name);
    std::string path = std::string(FCOMP_DATA_DIR) + "/" + name + ".json";
    std::string text = read_file(path);
    Instance inst = instance_from_json(text);
    CHECK(instance_to_json(inst) == text);
    CHECK(instance_to_json(make_instance(name)) == text);
  }
}

TEST_SUITE_END();
