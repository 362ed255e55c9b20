#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcomp/common_information.hpp"
#include "fcomp/function_table.hpp"
#include "fcomp/gf_graph.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

// A worked problem instance: source pair, function, and whatever scheme
// inputs it ships with (a nesting, peel lists for the edge schemes).
struct Instance {
  std::string name;
  std::string notes;
  JointPMF joint;
  FunctionTable f;
  std::optional<Nesting> nesting;
  std::vector<PeelEdge> peel;  // structure-split piece C2, class-id pairs
  PeelGroups peel_groups;      // indicator groups for the low-mass scheme

  Instance(std::string name_, JointPMF joint_, FunctionTable f_)
      : name(std::move(name_)), joint(std::move(joint_)), f(std::move(f_)) {}
};

Instance example1();
Instance fig2();
Instance example2();
Instance example3();
Instance example4(double delta);
Instance example5(double delta);
Instance petersen(double p);
Instance correlated_star(double p);
Instance fig3();

// Builder by name using the frozen default parameters (delta = 0.1,
// p = 0.2). Throws ValidationError for unknown names.
Instance make_instance(const std::string& name);
std::vector<std::string> instance_names();

Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& inst);

}  // namespace fcomp
