#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fcomp/label.hpp"

namespace fcomp {

using Dist = std::vector<double>;

// Shannon entropy in bits. Zero entries contribute nothing; negative
// entries are rejected. The vector does not have to sum to one.
double entropy(const Dist& p);
double binary_entropy(double p);

// Scales a nonnegative vector to unit sum.
Dist normalized(const Dist& p);

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;

  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

// Joint distribution of a source pair over finite alphabets. Entries are
// validated on construction: no negatives, total within 1e-9 of one.
class JointPMF {
 public:
  JointPMF(Alphabet x1, Alphabet x2, std::vector<std::vector<double>> p);

  const Alphabet& x1() const { return x1_; }
  const Alphabet& x2() const { return x2_; }
  std::size_t rows() const { return x1_.size(); }
  std::size_t cols() const { return x2_.size(); }

  double p(std::size_t i, std::size_t j) const { return p_[i][j]; }
  bool in_support(std::size_t i, std::size_t j) const { return p_[i][j] > 0.0; }

  Dist marginal1() const;
  Dist marginal2() const;

  std::vector<Cell> support() const;
  std::size_t support_size() const;
  std::vector<std::size_t> row_support(std::size_t i) const;
  std::vector<std::size_t> col_support(std::size_t j) const;

  double cell_mass(const std::vector<Cell>& cells) const;

  // Conditional instance: mass outside `cells` dropped, rest renormalized.
  // Alphabets are kept so indices remain comparable across restrictions.
  JointPMF restricted(const std::vector<Cell>& cells) const;

 private:
  Alphabet x1_;
  Alphabet x2_;
  std::vector<std::vector<double>> p_;
};

Dist marginal(const JointPMF& j, int source);
double joint_entropy(const JointPMF& j);
double marginal_entropy(const JointPMF& j, int source);
// H(X_target | X_other), target is 1 or 2.
double conditional_entropy(const JointPMF& j, int target);

Dist binomial_pmf(std::size_t n, double p);
Dist zipf_pmf(std::size_t k, double gamma);

// Independent product over integer alphabets 0..|p1|-1 and 0..|p2|-1.
JointPMF product_joint(const Dist& p1, const Dist& p2);

// Loads driven by a common Poisson(lambda) count N: conditionally
// independent B(N, p) and B(N, 1-p), with Y1 >= cap1 clumped into cap1 and
// Y2 >= cap2 into cap2. The Poisson is truncated where its tail drops
// below 1e-12 and renormalized.
JointPMF poisson_clumped_joint(double lambda, double p, std::size_t cap1,
                               std::size_t cap2);

// JSON schema: {"x1": [labels], "x2": [labels], "p": [[row-major numbers]]}
JointPMF joint_pmf_from_json(const std::string& text);
std::string joint_pmf_to_json(const JointPMF& j);

}  // namespace fcomp
