#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leafdim/covers.hpp"
#include "leafdim/leaf.hpp"

namespace leafdim {

// D_A(S)^lambda = exp(-lambda * n_{f,A}(S)), evaluated in log-space.
double weight(const System& sys, const LeafSegment& seg, const GridCover& cover,
              double lambda, int n_max = kDefaultNMax);

struct WeightedCover {
  struct Element {
    LeafSegment segment;  // re-based; degenerate for point elements
    double param_lo = 0.0;  // footprint in the covered subset's carrier units
    double param_hi = 0.0;
    bool is_point = false;
    int n_value = 0;
  };
  std::vector<Element> elements;
  int scale = 0;  // every n_value >= scale

  double total_weight(double lambda) const;
  // 1-d interval union check that the elements cover the subset.
  bool covers(const LeafSubset& subset) const;
};

struct OuterMeasure {
  double value = 0.0;
  WeightedCover cover;
  bool capped = false;  // point parts priced at the n_max cap
  int chosen_level = 0;
};

// Approximant of m^x_{A,lambda}(X) at admissibility scale N: segment parts
// are covered by the greedy maximal cover at each uniform level in
// (N, N + delta_levels], keeping the cheapest; point parts ride at the
// n_max cap. The infimum over all countable covers is approximated from
// above by construction.
OuterMeasure outer_measure_approx(const System& sys, const LeafSubset& subset,
                                  const GridCover& cover, double lambda, int scale_n,
                                  int delta_levels = 5, const SweepBudget& budget = {});

struct TrendRow {
  int scale_n = 0;
  double lambda = 0.0;
  double inf_weight = 0.0;
};

enum class TrendStatus { Ok, Indeterminate };

struct CriticalExponentResult {
  double lambda_star = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};  // (largest increasing, smallest decreasing)
  std::vector<TrendRow> trend;
  TrendStatus status = TrendStatus::Ok;
  std::string note;
};

struct CriticalExponentParams {
  int n_lo = 4;
  int n_hi = 12;  // N_range = [n_lo, n_hi]; must span >= 8 values
  int delta_levels = 2;
  double lambda_width = 0.01;  // bisection width per trend edge
  SweepBudget budget{};
};

// h^u_{H,A}(f, X) = inf { lambda : m^x_{A,lambda}(X) = 0 }. A lambda is above
// critical when the approximant falls by a factor >= 2 from the first to the
// last scale in the N range, below critical when it grows by >= 2. Both trend
// edges are bisected to lambda_width and the critical exponent is the center
// of the neutral zone between them (the zone has width ~ log2 / span, so a
// single above/below bisection cannot reach the target width; the center is
// the symmetric point of the two-sided test).
CriticalExponentResult critical_exponent(const System& sys, const LeafSubset& subset,
                                         const GridCover& cover,
                                         const CriticalExponentParams& params = {});

struct HdimParams {
  std::vector<double> deltas{0.1, 0.05};
  std::vector<int> meshes{8, 16, 32};
  int sample_points = 2;
  std::uint64_t seed = 20200828;
  CriticalExponentParams exponent{};
  double inflation = kDefaultInflation;
};

struct HdimResult {
  double value = 0.0;
  std::vector<std::pair<double, double>> delta_values;
  TrendStatus status = TrendStatus::Ok;
  bool empty_trace = false;
  std::vector<CriticalExponentResult> details;
};

// h^u_H(f, Y) via the leaf-ball characterization: sup over sampled x in M
// (and over the mesh family) of the critical exponent of Y traced on the
// closed leaf ball, evaluated per delta with a stability report. Y = torus
// gives h^u_H(f).
HdimResult h_unstable_H(const System& sys, const AmbientSet& set, const HdimParams& params);

}  // namespace leafdim
