#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leafdim/covers.hpp"
#include "leafdim/leaf.hpp"

namespace leafdim {

// Cover-count growth along one (mesh, delta, base point) series, with the
// tail least-squares slope that estimates the entropy.
struct GrowthSeries {
  std::vector<int> ns;
  std::vector<long long> counts;
  std::vector<double> log_counts;
  double slope = 0.0;
  double slope_stderr = 0.0;
  int window_lo = 0;  // fit window [window_lo, window_hi], inclusive n values
  int window_hi = 0;
  int cover_mesh = 0;
  double delta = 0.0;
  std::string base_point;
  bool budget_capped = false;
};

struct CompactEntropy {
  double value = 0.0;  // max slope over meshes
  std::vector<GrowthSeries> series;
  bool non_stabilized = false;   // two finest meshes disagree > 5% relative
  double stabilization_gap = 0.0;
};

struct UtopParams {
  std::vector<double> deltas{0.1, 0.05};
  std::vector<int> meshes{8, 16, 32, 64};
  int n_lo = 2;
  int n_hi = 20;
  int sample_points = 2;  // random base points in addition to the origin
  std::uint64_t seed = 20200828;
  SweepBudget budget{};
  double inflation = kDefaultInflation;
};

struct UtopResult {
  double value = 0.0;
  std::vector<std::pair<double, double>> delta_values;  // (delta, sup over x)
  bool non_stabilized = false;
  bool empty_trace = false;  // every sampled trace was empty (value 0)
  std::vector<GrowthSeries> series;
};

// h^u(f, K) for a compact leaf subset: for each mesh the growth series of
// minimal Bowen-cover counts; the value is the sup over the mesh family of
// the tail slopes.
CompactEntropy entropy_of_compact(const System& sys, const LeafSubset& compact,
                                  const std::vector<int>& meshes, int n_lo, int n_hi,
                                  const SweepBudget& budget = {},
                                  double inflation = kDefaultInflation);

// h^u_top(f): sup over sampled base points of the leaf-ball entropy, reported
// at the smallest delta, with the per-delta values kept as a stability report.
UtopResult unstable_topological_entropy(const System& sys, const UtopParams& params);

// h^u(f, Y): same estimator on traces Y intersected with sampled leaf balls;
// base points are drawn from within Y where Y supports it.
UtopResult entropy_of_subset_cover_style(const System& sys, const AmbientSet& set,
                                         const UtopParams& params);

}  // namespace leafdim
