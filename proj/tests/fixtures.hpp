#pragma once

// Small instances shared across test suites. Kept here so every suite builds
// the same tables instead of re-typing them.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fcomp/function_table.hpp"
#include "fcomp/probability.hpp"

namespace fixtures {

inline fcomp::JointPMF uniform_square(std::int64_t lo, std::size_t n) {
  double u = 1.0 / double(n * n);
  std::vector<std::vector<double>> p(n, std::vector<double>(n, u));
  return fcomp::JointPMF(fcomp::Alphabet::iota(lo, n),
                         fcomp::Alphabet::iota(lo, n), std::move(p));
}

// Uniform pair on {-2..2}^2, f = |x1| + |x2|.
inline fcomp::JointPMF example1_pmf() { return uniform_square(-2, 5); }

inline fcomp::FunctionTable example1_f() {
  fcomp::Alphabet a = fcomp::Alphabet::iota(-2, 5);
  return fcomp::build_from_rule(fcomp::FunctionRule::abs_sum, a, a);
}

// 3x3 support {(1,1),(2,2),(2,3),(3,2),(3,3)} with the worked outcome table.
inline fcomp::JointPMF example2_pmf() {
  return fcomp::JointPMF(fcomp::Alphabet::iota(1, 3), fcomp::Alphabet::iota(1, 3),
                         {{12.0 / 24, 0, 0},
                          {0, 2.0 / 24, 3.0 / 24},
                          {0, 3.0 / 24, 4.0 / 24}});
}

inline fcomp::FunctionTable example2_f() {
  using fcomp::Label;
  std::optional<Label> X;
  return fcomp::FunctionTable(
      fcomp::Alphabet::iota(1, 3), fcomp::Alphabet::iota(1, 3),
      {{Label{std::int64_t{0}}, X, X},
       {X, Label{std::int64_t{2}}, Label{std::int64_t{3}}},
       {X, Label{std::int64_t{3}}, Label{std::int64_t{4}}}});
}

inline fcomp::JointPMF example3_pmf() {
  return fcomp::JointPMF(
      fcomp::Alphabet::iota(1, 3),
      fcomp::Alphabet({fcomp::make_label(0), fcomp::make_label(1),
                       fcomp::make_label(3)}),
      {{0.5, 0, 0}, {0, 0, 0.25}, {0, 0.25, 0}});
}

inline fcomp::FunctionTable example3_f() {
  return fcomp::build_from_rule(fcomp::FunctionRule::sum,
                                fixtures::example3_pmf().x1(),
                                fixtures::example3_pmf().x2());
}

namespace detail {

inline std::optional<fcomp::Label> L(std::int64_t v) {
  return fcomp::Label{v};
}

inline fcomp::FunctionTable table3(
    std::array<std::array<std::optional<fcomp::Label>, 3>, 3> rows) {
  std::vector<std::vector<std::optional<fcomp::Label>>> out(3);
  for (int i = 0; i < 3; ++i) out[i].assign(rows[i].begin(), rows[i].end());
  return fcomp::FunctionTable(fcomp::Alphabet::iota(1, 3),
                              fcomp::Alphabet::iota(1, 3), std::move(out));
}

}  // namespace detail

// Triangle with one edge split by a noise parameter; outcomes name the
// triangle edges.
inline fcomp::JointPMF example4_pmf(double delta) {
  double a = (1.0 - delta) / 3.0, d = delta / 3.0;
  return fcomp::JointPMF(fcomp::Alphabet::iota(1, 3), fcomp::Alphabet::iota(1, 3),
                         {{0, 1.0 / 3, 0}, {a, 0, d}, {0, d, a}});
}

inline fcomp::FunctionTable example4_f() {
  using detail::L;
  std::optional<fcomp::Label> X;
  return detail::table3({{{X, L(1), X}, {L(1), X, L(3)}, {X, L(3), L(2)}}});
}

// Same triangle with all four cross cells carrying delta mass.
inline fcomp::JointPMF example5_pmf(double delta) {
  double a = (1.0 - delta) / 3.0, d = delta / 3.0;
  return fcomp::JointPMF(
      fcomp::Alphabet::iota(1, 3), fcomp::Alphabet::iota(1, 3),
      {{0, a, d}, {a, 0, d}, {d, d, (1.0 - 2.0 * delta) / 3.0}});
}

inline fcomp::FunctionTable example5_f() {
  using detail::L;
  std::optional<fcomp::Label> X;
  return detail::table3({{{X, L(1), L(4)}, {L(1), X, L(3)}, {L(4), L(3), L(2)}}});
}

inline fcomp::JointPMF petersen_pmf(double p) {
  return fcomp::JointPMF(
      fcomp::Alphabet::iota(1, 3), fcomp::Alphabet::iota(1, 3),
      {{0, p * (1 - 2 * p) / (1 - p), p * p / (1 - p)},
       {p / 2, 0, p / 2},
       {1 - 2 * p, 0, 0}});
}

inline fcomp::FunctionTable petersen_f() {
  using detail::L;
  std::optional<fcomp::Label> X;
  return detail::table3({{{X, L(1), L(3)}, {L(1), X, L(2)}, {L(3), X, X}}});
}

inline fcomp::JointPMF correlated_star_pmf(double p) {
  return fcomp::JointPMF(
      fcomp::Alphabet::iota(1, 3), fcomp::Alphabet::iota(1, 3),
      {{p * p, p * p, p * (1 - 2 * p)},
       {0, p * p / (1 - p), p * (1 - 2 * p) / (1 - p)},
       {0, 0, 1 - 2 * p}});
}

inline fcomp::FunctionTable correlated_star_f() {
  using detail::L;
  std::optional<fcomp::Label> X;
  return detail::table3({{{L(1), L(1), L(3)}, {X, L(3), L(2)}, {X, X, L(2)}}});
}

}  // namespace fixtures
