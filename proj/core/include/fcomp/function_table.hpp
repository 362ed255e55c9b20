#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcomp/label.hpp"
#include "fcomp/probability.hpp"

namespace fcomp {

enum class FunctionRule { sum, abs_sum, xor_rule, identity, table };

std::string rule_name(FunctionRule r);
FunctionRule rule_from_name(const std::string& name);

// Outcome table of f(X1, X2) over an alphabet grid. Cells may be undefined,
// which is only legal off the support of the paired distribution.
class FunctionTable {
 public:
  FunctionTable(Alphabet x1, Alphabet x2,
                std::vector<std::vector<std::optional<Label>>> outcomes,
                FunctionRule rule = FunctionRule::table);

  const Alphabet& x1() const { return x1_; }
  const Alphabet& x2() const { return x2_; }
  FunctionRule rule() const { return rule_; }

  bool defined(std::size_t i, std::size_t j) const;
  const Label& outcome(std::size_t i, std::size_t j) const;

  // Distinct outcomes in row-major first-appearance order over defined cells.
  std::vector<Label> range() const;

 private:
  Alphabet x1_;
  Alphabet x2_;
  std::vector<std::vector<std::optional<Label>>> outcomes_;
  FunctionRule rule_;
};

FunctionTable build_from_rule(FunctionRule rule, const Alphabet& a1,
                              const Alphabet& a2);

struct OutcomeDistribution {
  std::vector<Label> outcomes;  // first appearance over support, row-major
  Dist probs;
};

// Throws if f is undefined on any support cell of j.
void check_defined_on_support(const FunctionTable& f, const JointPMF& j);

std::pair<OutcomeDistribution, double> function_entropy(const FunctionTable& f,
                                                        const JointPMF& j);

bool is_permutation_invariant(const FunctionTable& f, const JointPMF& j);

// Partition of one source's symbols: two symbols share a class when they
// have the same positive-mass counterpart set and equal outcomes on it.
// All zero-mass symbols share one class.
struct ClassPartition {
  int source = 1;
  std::vector<std::vector<std::size_t>> classes;  // sorted members, ordered by smallest
  std::vector<std::size_t> class_of;              // symbol index -> class id
  Dist class_mass;
};

ClassPartition equivalence_classes(const FunctionTable& f, const JointPMF& j,
                                   int source);

// JSON: { "rule": name, "outcomes": [[label or null]] }; outcomes may be
// omitted for arithmetic rules, in which case the table is rebuilt from the
// supplied alphabets.
FunctionTable function_table_from_json(const std::string& text,
                                       const Alphabet& a1, const Alphabet& a2);
std::string function_table_to_json(const FunctionTable& f);

}  // namespace fcomp
