#pragma once

#include <cstdint>
#include <vector>

#include "leafdim/leaf.hpp"
#include "leafdim/systems.hpp"

namespace leafdim {

// Open cover of the torus by m^d boxes of side inflation/m centered at the
// grid cell centers. inflation in (1, 2): the cells cover the torus and any
// point lies in at most 2^d of them.
struct GridCover {
  int mesh_count = 16;
  double inflation = 1.125;
  int dim = 2;

  double side() const { return inflation / mesh_count; }
  double pitch() const { return 1.0 / mesh_count; }
};

inline constexpr double kDefaultInflation = 1.125;

// True iff some single cell of the cover contains the segment. Exact for
// affine segments: per axis, the lifted extent either exceeds the cell side
// (false) or the fit is an integer-window test on the start position.
bool thinner_than(const LeafSegment& seg, const GridCover& cover);

struct OrbitThinnerResult {
  int n = 0;
  bool capped = false;
};

// n_{f,A}(S): the largest n such that f^k(S) is thinner than the cover for
// every k in [0, n); equivalently the first failing iterate. 0 if S itself
// is not thinner. Returns n_max flagged as capped if the property persists.
OrbitThinnerResult n_orbit_thinner(const System& sys, const LeafSegment& seg,
                                   const GridCover& cover, int n_max = kDefaultNMax);

// n for the power map f^m, evaluated against the refined cover
// A v f^{-1}A v ... v f^{-(m-1)}A: the k-th power iterate is thinner iff all
// plain iterates in the block [mk, mk+m) are. Bases advance through the
// exact matrix power, independently of n_orbit_thinner's path.
OrbitThinnerResult n_orbit_thinner_power(const System& sys, const LeafSegment& seg,
                                         const GridCover& cover, int block,
                                         int n_max = kDefaultNMax);

struct BowenCount {
  int n = 0;
  long long count = 0;
  bool capped = false;  // some element hit the n_max cap
};

// Caps for the cover-count series; the sweep stops growing n once the total
// number of placed segments would exceed the budget.
struct SweepBudget {
  long long max_total_placements = 4'000'000;
  int n_max = kDefaultNMax;
};

// Minimal number of closed sub-segments with n_{f,A} >= n covering X, by the
// exact left-to-right greedy sweep (optimal for interval covers of 1-d sets).
// The maximal feasible extension from a left endpoint is solved in closed
// form from the per-level cell slacks. Point parts ride along as degenerate
// targets; isolated points cost one degenerate segment each.
BowenCount minimal_bowen_cover(const System& sys, const LeafSubset& subset,
                               const GridCover& cover, int n);

// Counts for n = n_lo..n_hi sharing one set of per-level base tables; stops
// early (returning fewer entries) when the budget is exhausted.
std::vector<BowenCount> bowen_count_series(const System& sys, const LeafSubset& subset,
                                           const GridCover& cover, int n_lo, int n_hi,
                                           const SweepBudget& budget = {});

// Variant of the greedy step that binary-searches the maximal right endpoint
// instead of solving it in closed form; used to cross-check the sweep.
BowenCount minimal_bowen_cover_bisect(const System& sys, const LeafSubset& subset,
                                      const GridCover& cover, int n);

struct GreedyCover {
  std::vector<std::pair<double, double>> placed;  // carrier parameter units
  bool truncated = false;
};

// The greedy cover itself (not just its cardinality), for callers that need
// the realizing segments.
GreedyCover greedy_cover_at_level(const System& sys, const LeafSubset& subset,
                                  const GridCover& cover, int n,
                                  long long max_placements = 4'000'000);

}  // namespace leafdim
