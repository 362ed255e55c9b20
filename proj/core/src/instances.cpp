#include "fcomp/instances.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>

#include <json.hpp>

#include "fcomp/error.hpp"

namespace fcomp {

namespace {

using Row = std::vector<std::optional<Label>>;

std::optional<Label> L(std::int64_t v) { return Label{v}; }

FunctionTable table3(const JointPMF& j, std::vector<Row> rows) {
  return FunctionTable(j.x1(), j.x2(), std::move(rows));
}

void check_open_unit(double v, double hi, const char* what) {
  if (!(v > 0.0) || !(v < hi))
    throw ValidationError(std::string(what) + " out of range (" +
                          std::to_string(v) + ")");
}

std::vector<Cell> rect(std::size_t r0, std::size_t r1, std::size_t c0,
                       std::size_t c1) {
  std::vector<Cell> cells;
  for (std::size_t r = r0; r <= r1; ++r)
    for (std::size_t c = c0; c <= c1; ++c) cells.push_back({r, c});
  return cells;
}

std::vector<Cell> concat(std::vector<Cell> a, const std::vector<Cell>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Instance example1() {
  Alphabet a = Alphabet::iota(-2, 5);
  double u = 1.0 / 25.0;
  JointPMF j(a, a, std::vector<std::vector<double>>(5, std::vector<double>(5, u)));
  Instance inst("example1", std::move(j),
                build_from_rule(FunctionRule::abs_sum, a, a));
  inst.notes = "uniform pair on {-2..2}^2 with f = |x1| + |x2|";
  return inst;
}

Instance fig2() {
  JointPMF j(Alphabet::iota(0, 3), Alphabet::iota(0, 3),
             {{1.0 / 3, 0, 0}, {0, 1.0 / 6, 1.0 / 6}, {0, 1.0 / 6, 1.0 / 6}});
  FunctionTable f = build_from_rule(FunctionRule::sum, j.x1(), j.x2());
  Instance inst("fig2", std::move(j), std::move(f));
  inst.notes = "two-component support used for the common-part walkthrough";
  return inst;
}

Instance example2() {
  JointPMF j(Alphabet::iota(1, 3), Alphabet::iota(1, 3),
             {{12.0 / 24, 0, 0},
              {0, 2.0 / 24, 3.0 / 24},
              {0, 3.0 / 24, 4.0 / 24}});
  std::optional<Label> X;
  FunctionTable f = table3(
      j, {{L(0), X, X}, {X, L(2), L(3)}, {X, L(3), L(4)}});

  Instance inst("example2", std::move(j), std::move(f));
  // The lower block is one connected component with three outcomes, so the
  // nesting needs explicit outcome-pure groups.
  Nest top;
  top.cells = {{0, 0}};
  top.groups = {{{0, 0}}};
  Nest block;
  block.cells = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  block.groups = {{{1, 1}}, {{1, 2}, {2, 1}}, {{2, 2}}};
  Nesting n;
  n.nests = {std::move(top), std::move(block)};
  validate_nesting(n, inst.joint, inst.f);
  inst.nesting = std::move(n);
  inst.notes = "worked 3x3 instance with the refined two-nest split";
  return inst;
}

Instance example3() {
  JointPMF j(Alphabet::iota(1, 3),
             Alphabet({make_label(0), make_label(1), make_label(3)}),
             {{0.5, 0, 0}, {0, 0, 0.25}, {0, 0.25, 0}});
  FunctionTable f = build_from_rule(FunctionRule::sum, j.x1(), j.x2());
  Instance inst("example3", std::move(j), std::move(f));
  inst.notes = "three isolated cells; every shared-part notion collapses to "
               "the cell index";
  return inst;
}

Instance example4(double delta) {
  check_open_unit(delta, 1.0, "delta");
  double a = (1.0 - delta) / 3.0, d = delta / 3.0;
  JointPMF j(Alphabet::iota(1, 3), Alphabet::iota(1, 3),
             {{0, 1.0 / 3, 0}, {a, 0, d}, {0, d, a}});
  std::optional<Label> X;
  FunctionTable f = table3(
      j, {{X, L(1), X}, {L(1), X, L(3)}, {X, L(3), L(2)}});
  Instance inst("example4", std::move(j), std::move(f));
  inst.peel_groups = {{{1, 2}}, {{2, 1}}};
  inst.notes = "triangle with one low-mass edge pair, delta = " +
               std::to_string(delta);
  return inst;
}

Instance example5(double delta) {
  check_open_unit(delta, 0.5, "delta");
  double a = (1.0 - delta) / 3.0, d = delta / 3.0;
  JointPMF j(Alphabet::iota(1, 3), Alphabet::iota(1, 3),
             {{0, a, d}, {a, 0, d}, {d, d, (1.0 - 2.0 * delta) / 3.0}});
  std::optional<Label> X;
  FunctionTable f = table3(
      j, {{X, L(1), L(4)}, {L(1), X, L(3)}, {L(4), L(3), L(2)}});
  Instance inst("example5", std::move(j), std::move(f));
  inst.peel_groups = {{{0, 2}, {2, 0}}, {{1, 2}, {2, 1}}};
  inst.notes = "triangle with four low-mass edges peeled as mirror pairs, "
               "delta = " + std::to_string(delta);
  return inst;
}

Instance petersen(double p) {
  check_open_unit(p, 0.5, "p");
  JointPMF j(Alphabet::iota(1, 3), Alphabet::iota(1, 3),
             {{0, p * (1 - 2 * p) / (1 - p), p * p / (1 - p)},
              {p / 2, 0, p / 2},
              {1 - 2 * p, 0, 0}});
  std::optional<Label> X;
  FunctionTable f = table3(
      j, {{X, L(1), L(3)}, {L(1), X, L(2)}, {L(3), X, X}});
  Instance inst("petersen", std::move(j), std::move(f));
  inst.peel = {{0, 2}, {1, 0}};
  inst.notes = "chain-coupled pair; the peel splits off the two edges of "
               "joint mass p^2/(1-p) + p/2, p = " + std::to_string(p);
  return inst;
}

Instance correlated_star(double p) {
  check_open_unit(p, 0.5, "p");
  JointPMF j(Alphabet::iota(1, 3), Alphabet::iota(1, 3),
             {{p * p, p * p, p * (1 - 2 * p)},
              {0, p * p / (1 - p), p * (1 - 2 * p) / (1 - p)},
              {0, 0, 1 - 2 * p}});
  std::optional<Label> X;
  FunctionTable f = table3(
      j, {{L(1), L(1), L(3)}, {X, L(3), L(2)}, {X, X, L(2)}});
  Instance inst("correlated_star", std::move(j), std::move(f));
  inst.peel = {{1, 1}, {0, 2}};
  inst.notes = "star-coupled pair; the peel splits off the two outcome-3 "
               "edges away from the hub, p = " + std::to_string(p);
  return inst;
}

Instance fig3() {
  std::size_t rows = 7, cols = 6;
  double u = 1.0 / double(rows * cols);
  JointPMF j(Alphabet::iota(0, rows), Alphabet::iota(0, cols),
             std::vector<std::vector<double>>(rows,
                                              std::vector<double>(cols, u)));
  Row r01 = {L(1), L(1), L(3), L(3), L(6), L(6)};
  Row r23 = {L(4), L(4), L(2), L(2), L(6), L(6)};
  Row r45 = {L(5), L(5), L(5), L(5), L(5), L(5)};
  Row r6 = {L(6), L(6), L(6), L(6), L(6), L(6)};
  FunctionTable f(j.x1(), j.x2(), {r01, r01, r23, r23, r45, r45, r6});

  std::vector<std::vector<Cell>> nests = {
      concat(rect(0, 1, 0, 1), rect(2, 3, 2, 3)),
      concat(rect(0, 1, 2, 3), rect(2, 3, 0, 1)),
      rect(4, 5, 0, 5),
      concat(rect(6, 6, 0, 5), rect(0, 3, 4, 5)),
  };
  Instance inst("fig3", std::move(j), std::move(f));
  inst.nesting = make_nesting(nests, inst.joint, inst.f);
  inst.notes = "block-structured uniform 7x6 instance with a four-nest split";
  return inst;
}

Instance make_instance(const std::string& name) {
  static const std::map<std::string, std::function<Instance()>> builders = {
      {"example1", [] { return example1(); }},
      {"fig2", [] { return fig2(); }},
      {"example2", [] { return example2(); }},
      {"example3", [] { return example3(); }},
      {"example4", [] { return example4(0.1); }},
      {"example5", [] { return example5(0.1); }},
      {"petersen", [] { return petersen(0.2); }},
      {"correlated_star", [] { return correlated_star(0.2); }},
      {"fig3", [] { return fig3(); }},
  };
  auto it = builders.find(name);
  if (it == builders.end())
    throw ValidationError("unknown instance name: " + name);
  return it->second();
}

std::vector<std::string> instance_names() {
  return {"example1", "fig2",     "example2",        "example3", "example4",
          "example5", "petersen", "correlated_star", "fig3"};
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("instance json parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pmf") || !doc.contains("function"))
    throw ValidationError("instance json needs fields pmf and function");

  JointPMF j = joint_pmf_from_json(doc["pmf"].dump());
  FunctionTable f =
      function_table_from_json(doc["function"].dump(), j.x1(), j.x2());
  Instance inst(doc.value("name", std::string("instance")), std::move(j),
                std::move(f));
  inst.notes = doc.value("notes", std::string());
  if (doc.contains("nesting"))
    inst.nesting =
        nesting_from_json(doc["nesting"].dump(), inst.joint, inst.f);
  if (doc.contains("peel")) {
    for (PeelGroups flat = peel_from_json(doc["peel"].dump());
         const auto& group : flat)
      inst.peel.push_back(group.front());
  }
  if (doc.contains("peel_groups"))
    inst.peel_groups = peel_from_json(doc["peel_groups"].dump());
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  nlohmann::json doc;
  doc["name"] = inst.name;
  if (!inst.notes.empty()) doc["notes"] = inst.notes;
  doc["pmf"] = nlohmann::json::parse(joint_pmf_to_json(inst.joint));
  doc["function"] = nlohmann::json::parse(function_table_to_json(inst.f));
  if (inst.nesting)
    doc["nesting"] =
        nlohmann::json::parse(nesting_to_json(*inst.nesting, inst.joint));
  if (!inst.peel.empty()) {
    doc["peel"] = nlohmann::json::array();
    for (const PeelEdge& e : inst.peel)
      doc["peel"].push_back(nlohmann::json::array({e.first, e.second}));
  }
  if (!inst.peel_groups.empty())
    doc["peel_groups"] = nlohmann::json::parse(peel_to_json(inst.peel_groups));
  return doc.dump(2);
}

}  // namespace fcomp
