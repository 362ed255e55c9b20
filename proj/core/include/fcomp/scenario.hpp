#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcomp/graph_entropy.hpp"
#include "fcomp/instances.hpp"

namespace fcomp {

// Inclusive arithmetic grid, parsed from "start:stop:step".
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

Grid parse_grid(const std::string& text);
std::vector<double> grid_points(const Grid& g);

// One parameter sweep over a bundled scenario family.
//
// The binomial and poisson sweeps vary the joint distribution under a fixed
// function table and nest split; `instance` overrides the bundled fig3
// block instance there and must carry a nesting. `lambda` is the poisson
// rate for the clumped sweep, `zipf_sizes` the block sizes of the uniform
// block family. When `out_path` is nonempty the CSV is also written there.
struct SweepSpec {
  std::string scenario;
  Grid grid;
  std::optional<Instance> instance;
  double lambda = 5.0;
  std::vector<std::size_t> zipf_sizes{8, 4, 2, 2};
  SolverOptions solver{};
  std::string out_path;
};

std::vector<std::string> scenario_names();

// Two lines: a version stamp and the column row. Value columns are the
// joint and outcome entropies, the two common-part entropies, the four
// helper and nesting scheme sums, and the family's scheme pair: r_chi for
// coding the pair of confusability graphs directly and r_helper for the
// family's helper construction. `status` holds "ok" or the error text of a
// grid point whose evaluation threw; such rows keep their value columns
// blank and the run continues.
std::string scenario_csv_header();

// Runs the sweep and returns the CSV text, one row per grid point in grid
// order with fixed 6-decimal values. Points are evaluated concurrently but
// the output order and content are deterministic for a given spec.
std::string run_scenario(const SweepSpec& spec);

}  // namespace fcomp
