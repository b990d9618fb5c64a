#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "leafdim/systems.hpp"

namespace leafdim {

// A closed arc of a 1-dimensional unstable leaf. The segment occupies
//   { base + t * direction (mod 1) : t in [t_lo, t_hi] * rate^level },
// i.e. t_lo/t_hi are mantissa parameters at level 0 and `level` carries the
// scale exponent. Iteration replaces the base point exactly and increments
// the level, leaving the mantissas untouched, so iterate(iterate(S,a),b) and
// iterate(S,a+b) are bit-identical. Lengths are handled in log-space.
struct LeafSegment {
  TorusPoint base;
  std::array<double, 3> direction{};
  double log_rate = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  long long level = 0;
  int dim = 0;

  double scale() const { return std::exp(static_cast<double>(level) * log_rate); }
  double log_length() const {
    return std::log(t_hi - t_lo) + static_cast<double>(level) * log_rate;
  }
  double length() const { return std::exp(log_length()); }
  bool degenerate() const { return t_hi == t_lo; }
};

// Closed leaf ball of radius delta around x in the intrinsic leaf metric.
LeafSegment leaf_ball(const System& sys, const TorusPoint& x, double delta);

// n >= 0: base replaced by f^n(base) (exact), level incremented by n.
LeafSegment iterate_segment(const System& sys, const LeafSegment& seg, long long n);

// Sub-arc [a, b] of seg (in seg's own mantissa units) re-based at an exact
// rational approximation of its left endpoint. The new segment has
// parameters [0, b-a] at the same level, so all later position arithmetic
// stays small. The approximation error is one double rounding (~1e-17),
// far below every cover mesh in use.
LeafSegment subsegment_rebased(const System& sys, const LeafSegment& seg, double a, double b);

// Ambient subsets Y supported for traces: the whole torus, a metric ball,
// a finite rational point set, or the (finite, exact) orbit of a rational
// point. These four kinds cover every verification case in the harness.
struct AmbientSet {
  enum class Kind { Torus, Ball, Points, Orbit };
  Kind kind = Kind::Torus;
  TorusPoint center;               // Ball
  double radius = 0.0;             // Ball
  std::vector<TorusPoint> points;  // Points / Orbit (expanded)
  std::string spec;                // original description

  static AmbientSet torus();
  static AmbientSet ball(TorusPoint center, double radius);
  static AmbientSet finite_points(std::vector<TorusPoint> pts);
  // Expands the exact forward orbit of p (rational points are periodic).
  static AmbientSet orbit(const System& sys, const TorusPoint& p, long long cap = 200000);
};

// "torus" | "ball:c=(..),r=.." | "points:[(..),(..)]" | "orbit:p=(..)"
AmbientSet parse_ambient_set(const System& sys, const std::string& spec);

// A subset of a single leaf: disjoint closed parameter intervals plus a
// finite set of parameter values, all in the carrier's mantissa units.
// An indicator trace keeps the membership predicate and the sampling
// resolution used to extract it.
struct LeafSubset {
  enum class Kind { Segments, Points, Indicator };
  Kind kind = Kind::Segments;
  LeafSegment carrier;
  std::vector<std::pair<double, double>> intervals;  // normalized, disjoint
  std::vector<double> points;                        // sorted parameters
  std::function<bool(double)> indicator;             // on carrier parameter
  double resolution = 0.0;

  bool empty() const { return intervals.empty() && points.empty(); }
  double total_length() const;
  // Merges overlapping intervals, sorts points, drops points inside intervals.
  void normalize();

  static LeafSubset whole_segment(const LeafSegment& seg);
  static LeafSubset from_intervals(const LeafSegment& carrier,
                                   std::vector<std::pair<double, double>> intervals);
  static LeafSubset from_points(const LeafSegment& carrier, std::vector<double> params);
  // Samples the predicate along the carrier at `resolution` (in ambient
  // units), refines each boundary by bisection to resolution/100, and keeps
  // the predicate for later re-evaluation.
  static LeafSubset from_indicator(const LeafSegment& carrier,
                                   std::function<bool(double)> predicate, double resolution);
};

// Trace Y âˆ© S. Ball traces are located by sampling at `resolution` along the
// segment and refining each boundary by bisection to resolution/100. Point
// and orbit traces use the exact rational on-leaf test (a rational point can
// only sit on the leaf of a rational base point at the base itself). An empty
// result is a legal value; downstream entropy of the empty set is 0.
LeafSubset trace_subset(const System& sys, const AmbientSet& set, const LeafSegment& seg,
                        double resolution = 0.0);

// Euclidean distance on the torus (min over integer translates).
double torus_distance(const std::vector<double>& a, const std::vector<double>& b);

// Uniform rational point with 32-bit dyadic coordinates.
TorusPoint random_rational_point(int dim, std::mt19937_64& rng);

// Base points for the sup over x: the origin (or the set's own carrier
// points) plus seeded uniform rational samples drawn from within the set
// where it has interior.
std::vector<TorusPoint> sample_base_points(const System& sys, const AmbientSet& set,
                                           int samples, std::uint64_t seed);

}  // namespace leafdim
