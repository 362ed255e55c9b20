#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "fcomp/char_graph.hpp"
#include "fcomp/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fcomp;

namespace {

CharGraph path4() {
  return CharGraph(Alphabet::iota(0, 4), {{0, 1}, {1, 2}, {2, 3}});
}

CharGraph cycle5() {
  return CharGraph(Alphabet::iota(0, 5),
                   {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
}

CharGraph complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return CharGraph(Alphabet::iota(0, n), std::move(e));
}

FunctionTable constant_f(const Alphabet& a, const Alphabet& b) {
  std::vector<std::vector<std::optional<Label>>> cells(
      a.size(), std::vector<std::optional<Label>>(b.size(), make_label(7)));
  return FunctionTable(a, b, std::move(cells));
}

CharGraph random_graph(std::mt19937_64& rng, std::size_t n, double edge_p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (u(rng) < edge_p) e.emplace_back(a, b);
  return CharGraph(Alphabet::iota(0, n), std::move(e));
}

Dist random_masses(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Dist p(n);
  double z = 0.0;
  for (double& v : p) z += (v = u(rng));
  for (double& v : p) v /= z;
  return p;
}

// Every subset that is independent and cannot be extended, by brute force.
std::vector<std::vector<std::size_t>> brute_mis(const CharGraph& g) {
  std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    bool indep = true;
    for (std::size_t u = 0; u < n && indep; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if ((mask >> u & 1) && (mask >> v & 1) && g.edge(u, v)) {
          indep = false;
          break;
        }
    if (!indep) continue;
    bool maximal = true;
    for (std::size_t w = 0; w < n && maximal; ++w) {
      if (mask >> w & 1) continue;
      bool ok = true;
      for (std::size_t u = 0; u < n; ++u)
        if ((mask >> u & 1) && g.edge(u, w)) {
          ok = false;
          break;
        }
      if (ok) maximal = false;
    }
    if (!maximal) continue;
    std::vector<std::size_t> set;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1) set.push_back(v);
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("char_graph");

TEST_CASE("construction validates edges") {
  CHECK_THROWS_AS(CharGraph(Alphabet::iota(0, 3), {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(CharGraph(Alphabet::iota(0, 3), {{1, 1}}), ValidationError);
  CharGraph g(Alphabet::iota(0, 3), {{0, 1}, {1, 0}, {0, 1}});
  CHECK(g.edge_count() == 1);
  CHECK(g.edge(0, 1));
  CHECK(g.edge(1, 0));
  CHECK(g.neighbors(1) == std::vector<std::size_t>{0});
}

TEST_CASE("confusability edges on the worked 3x3 table") {
  auto j = fixtures::example2_pmf();
  auto f = fixtures::example2_f();

  CharGraph p1 = build_characteristic_graph(j, f, 1);
  CHECK(p1.size() == 3);
  CHECK(p1.edge_count() == 3);  // support splits 1 from {2,3}; f splits 2 from 3

  CharGraph s1 = build_characteristic_graph(j, f, 1, EdgeRule::shared_counterpart);
  CHECK(s1.edge_count() == 1);
  CHECK(s1.edge(1, 2));
  CHECK_FALSE(s1.edge(0, 1));

  CharGraph p2 = build_characteristic_graph(j, f, 2);
  CHECK(p2.edge_count() == 3);
}

TEST_CASE("abs-sum instance is complete tripartite over sign pairs") {
  auto j = fixtures::example1_pmf();
  auto f = fixtures::example1_f();
  CharGraph g = build_characteristic_graph(j, f, 1);

  CHECK(g.size() == 5);
  CHECK_FALSE(g.edge(0, 4));  // -2 and 2 share every outcome
  CHECK_FALSE(g.edge(1, 3));
  CHECK(g.edge(0, 1));
  CHECK(g.edge(2, 4));
  CHECK(g.edge_count() == 8);

  TwinClasses tc = twin_classes(g);
  CHECK(tc.complete_multipartite);
  REQUIRE(tc.classes.size() == 3);
  CHECK(tc.classes[0] == std::vector<std::size_t>{0, 4});
  CHECK(tc.classes[1] == std::vector<std::size_t>{1, 3});
  CHECK(tc.classes[2] == std::vector<std::size_t>{2});

  auto mis = maximal_independent_sets(g);
  REQUIRE(mis.size() == 3);
  CHECK(mis[0] == std::vector<std::size_t>{0, 4});
  CHECK(mis[1] == std::vector<std::size_t>{1, 3});
  CHECK(mis[2] == std::vector<std::size_t>{2});
}

TEST_CASE("identity makes a complete graph, constants an empty one") {
  auto j = fixtures::uniform_square(0, 3);
  FunctionTable id = build_from_rule(FunctionRule::identity, j.x1(), j.x2());
  CharGraph g = build_characteristic_graph(j, id, 1);
  CHECK(g.edge_count() == 3);

  FunctionTable cf = constant_f(j.x1(), j.x2());
  CharGraph e = build_characteristic_graph(j, cf, 2);
  CHECK(e.edge_count() == 0);
  auto mis = maximal_independent_sets(e);
  REQUIRE(mis.size() == 1);
  CHECK(mis[0] == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("maximal independent sets are canonical and capped") {
  auto k4 = complete(4);
  auto mis = maximal_independent_sets(k4);
  REQUIRE(mis.size() == 4);
  for (std::size_t v = 0; v < 4; ++v)
    CHECK(mis[v] == std::vector<std::size_t>{v});

  auto c5 = cycle5();
  auto sets = maximal_independent_sets(c5);
  std::vector<std::vector<std::size_t>> want = {
      {0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}};
  CHECK(sets == want);

  CHECK_THROWS_AS(maximal_independent_sets(c5, 3), BudgetExceeded);
}

TEST_CASE("maximal independent sets match brute force on random graphs") {
  std::mt19937_64 rng(440091);
  for (int trial = 0; trial < 25; ++trial) {
    CharGraph g = random_graph(rng, 8, 0.35);
    CHECK(maximal_independent_sets(g) == brute_mis(g));
  }
}

TEST_CASE("coloring fast path on complete multipartite graphs") {
  auto j = fixtures::example1_pmf();
  auto f = fixtures::example1_f();
  CharGraph g = build_characteristic_graph(j, f, 1);
  Dist p = marginal(j, 1);

  Coloring c = min_entropy_coloring(g, p);
  CHECK(c.exact);
  CHECK(c.color_count == 3);
  CHECK(is_proper(g, c.color_of));
  CHECK(c.color_of[0] == c.color_of[4]);
  CHECK(c.color_of[1] == c.color_of[3]);
  CHECK(c.bits == doctest::Approx(1.5219280948873621).epsilon(1e-12));

  Coloring k = min_entropy_coloring(complete(3), {0.5, 0.25, 0.25});
  CHECK(k.color_count == 3);
  CHECK(k.bits == doctest::Approx(1.5).epsilon(1e-12));

  Coloring empty = min_entropy_coloring(CharGraph(Alphabet::iota(0, 4), {}),
                                        {0.25, 0.25, 0.25, 0.25});
  CHECK(empty.color_count == 1);
  CHECK(empty.bits == 0.0);
}

TEST_CASE("branch and bound handles graphs off the fast path") {
  CharGraph p4 = path4();
  CHECK_FALSE(twin_classes(p4).complete_multipartite);

  Dist mass = {0.4, 0.3, 0.2, 0.1};
  Coloring c = min_entropy_coloring(p4, mass);
  CHECK(c.exact);
  CHECK(is_proper(p4, c.color_of));
  double want = oracle::best_coloring_bits(
      4, [&](std::size_t u, std::size_t v) { return p4.edge(u, v); }, mass);
  CHECK(c.bits == doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(min_entropy_coloring(p4, mass, ColoringMode::exact,
                                       ColoringOptions{.node_budget = 1}),
                  BudgetExceeded);
}

TEST_CASE("exact coloring matches exhaustive search on random graphs") {
  std::mt19937_64 rng(91812);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 5 + std::size_t(trial % 5);
    CharGraph g = random_graph(rng, n, 0.45);
    Dist p = random_masses(rng, n);

    Coloring exact = min_entropy_coloring(g, p);
    Coloring greedy = min_entropy_coloring(g, p, ColoringMode::greedy);
    double want = oracle::best_coloring_bits(
        n, [&](std::size_t u, std::size_t v) { return g.edge(u, v); }, p);

    CHECK(is_proper(g, exact.color_of));
    CHECK(is_proper(g, greedy.color_of));
    CHECK(exact.bits == doctest::Approx(want).epsilon(1e-9));
    CHECK(greedy.bits >= exact.bits - 1e-12);
  }
}

TEST_CASE("is_proper flags conflicts and size mismatches") {
  auto k3 = complete(3);
  CHECK(is_proper(k3, {0, 1, 2}));
  CHECK_FALSE(is_proper(k3, {0, 0, 1}));
  CHECK_FALSE(is_proper(k3, {0, 1}));
}

TEST_CASE("power graph masses and labels line up") {
  Dist base = {0.5, 0.3, 0.2};
  Dist m2 = power_masses(base, 2);
  REQUIRE(m2.size() == 9);
  CHECK(m2[1 * 3 + 2] == doctest::Approx(0.3 * 0.2).epsilon(1e-15));
  double z = 0.0;
  for (double v : m2) z += v;
  CHECK(z == doctest::Approx(1.0).epsilon(1e-12));

  auto j = fixtures::example2_pmf();
  auto f = fixtures::example2_f();
  CharGraph g = build_characteristic_graph(j, f, 1);
  CharGraph pg = power_graph(g, j, f, 2);
  REQUIRE(pg.size() == 9);
  CHECK(label_text(pg.vertices()[1 * 3 + 2]) == "(2,3)");

  // n = 1 reproduces the base graph.
  CharGraph p1 = power_graph(g, j, f, 1);
  REQUIRE(p1.size() == g.size());
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t v = 0; v < g.size(); ++v)
      CHECK(p1.edge(u, v) == g.edge(u, v));
}

TEST_CASE("power graph edge rule works coordinatewise") {
  auto j = fixtures::example2_pmf();
  auto f = fixtures::example2_f();

  CharGraph s1 = build_characteristic_graph(j, f, 1, EdgeRule::shared_counterpart);
  CharGraph pg = power_graph(s1, j, f, 2);
  auto idx = [](std::size_t a, std::size_t b) { return a * 3 + b; };
  // Needs every coordinate to share a counterpart and some coordinate to
  // disagree there; symbol 1 shares nothing with 2 or 3.
  CHECK(pg.edge(idx(1, 1), idx(2, 2)));
  CHECK(pg.edge(idx(1, 2), idx(2, 2)));
  CHECK_FALSE(pg.edge(idx(0, 1), idx(1, 2)));
  CHECK_FALSE(pg.edge(idx(1, 1), idx(1, 1)));

  CharGraph p1 = build_characteristic_graph(j, f, 1);
  CharGraph pp = power_graph(p1, j, f, 2);
  CHECK(pp.edge(idx(0, 1), idx(1, 2)));  // support mismatch in either slot
  CHECK_FALSE(twin_classes(pg).complete_multipartite);
  CHECK(twin_classes(pp).complete_multipartite);
}

TEST_CASE("power graph respects the vertex cap") {
  auto j = fixtures::example1_pmf();
  auto f = fixtures::example1_f();
  CharGraph g = build_characteristic_graph(j, f, 1);
  CHECK_THROWS_AS(power_graph(g, j, f, 4, PowerGraphOptions{.max_vertices = 100}),
                  BudgetExceeded);
  CHECK_THROWS_AS(power_graph(g, j, f, 0), ValidationError);
  CHECK_THROWS_AS(power_graph(g, j, f, 50), BudgetExceeded);
}

TEST_CASE("chromatic entropy rate is stable from one to two blocks") {
  auto j = fixtures::example1_pmf();
  auto f = fixtures::example1_f();
  double r1 = chromatic_entropy_rate(j, f, 1, 1);
  double r2 = chromatic_entropy_rate(j, f, 1, 2);
  CHECK(r1 == doctest::Approx(1.5219280948873621).epsilon(1e-12));
  CHECK(r2 == doctest::Approx(1.5219280948873621).epsilon(1e-12));
  CHECK(r2 <= r1 + 1e-12);

  auto j2 = fixtures::example2_pmf();
  auto f2 = fixtures::example2_f();
  // Complete graph: the coloring just transmits the source.
  CHECK(chromatic_entropy_rate(j2, f2, 1, 1) ==
        doctest::Approx(1.4899343783255763).epsilon(1e-12));
}

TEST_CASE("edge list export") {
  auto k3 = CharGraph(Alphabet::iota(1, 3), {{0, 1}, {0, 2}, {1, 2}});
  CHECK(k3.to_edge_list() == "vertices: 1 2 3\n1 2\n1 3\n2 3\n");
}

TEST_SUITE_END();
