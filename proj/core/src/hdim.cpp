#include "leafdim/hdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leafdim/errors.hpp"
#include "leafdim/parallel.hpp"

namespace leafdim {

double weight(const System& sys, const LeafSegment& seg, const GridCover& cover, double lambda,
              int n_max) {
  const auto r = n_orbit_thinner(sys, seg, cover, n_max);
  return std::exp(-lambda * static_cast<double>(r.n));
}

double WeightedCover::total_weight(double lambda) const {
  double acc = 0.0;
  for (const auto& e : elements) acc += std::exp(-lambda * static_cast<double>(e.n_value));
  return acc;
}

bool WeightedCover::covers(const LeafSubset& subset) const {
  std::vector<std::pair<double, double>> placed;
  for (const auto& e : elements) placed.emplace_back(e.param_lo, e.param_hi);
  std::sort(placed.begin(), placed.end());
  auto is_covered = [&](double a, double b) {
    double reach = a;
    for (const auto& [lo, hi] : placed) {
      if (lo > reach) break;
      reach = std::max(reach, hi);
      if (reach >= b) return true;
    }
    return reach >= b;
  };
  for (const auto& [a, b] : subset.intervals) {
    if (!is_covered(a, b)) return false;
  }
  for (double p : subset.points) {
    if (!is_covered(p, p)) return false;
  }
  return true;
}

namespace {

// Per-part cover counts for a window of levels. Parts are swept separately
// so each can take its own cheapest level; bridging a gap between parts can
// only lower the true infimum, so the sum stays a valid upper approximant
// and unions of disjoint subsets price exactly additively.
struct CostTable {
  std::vector<std::vector<long long>> part_counts;  // [part][level - level_lo]
  int level_lo = 1;
  int level_hi = 0;  // inclusive; may be shrunk by the budget
  long long point_count = 0;
  int n_max = kDefaultNMax;

  bool has_segments() const { return !part_counts.empty(); }

  // Sum over parts of the cheapest admissible level in (scale_n, scale_n+d].
  double cost(double lambda, int scale_n, int delta_levels) const {
    double acc = 0.0;
    for (const auto& counts : part_counts) {
      double best = std::numeric_limits<double>::infinity();
      for (int n = scale_n + 1; n <= std::min(scale_n + delta_levels, level_hi); ++n) {
        const double c = static_cast<double>(counts[static_cast<std::size_t>(n - level_lo)]) *
                         std::exp(-lambda * n);
        best = std::min(best, c);
      }
      acc += best;
    }
    // Point parts ride at arbitrarily deep levels; their infimum contribution
    // for lambda > 0 vanishes in the limit and is priced at the n_max cap
    // only where a concrete cover is materialized.
    if (lambda == 0.0) acc += static_cast<double>(point_count);
    return acc;
  }
};

CostTable build_cost_table(const System& sys, const LeafSubset& subset, const GridCover& cover,
                           int level_lo, int level_hi, const SweepBudget& budget) {
  CostTable t;
  t.level_lo = level_lo;
  t.level_hi = level_hi;
  t.point_count = static_cast<long long>(subset.points.size());
  t.n_max = budget.n_max;
  if (subset.intervals.empty()) return t;
  SweepBudget part_budget = budget;
  part_budget.max_total_placements = std::max<long long>(
      budget.max_total_placements / static_cast<long long>(subset.intervals.size()), 10000);
  int achieved = level_hi;
  for (const auto& iv : subset.intervals) {
    LeafSubset part = LeafSubset::from_intervals(subset.carrier, {iv});
    const auto series = bowen_count_series(sys, part, cover, level_lo, level_hi, part_budget);
    if (series.empty()) {
      achieved = 0;
      break;
    }
    achieved = std::min(achieved, series.back().n);
    std::vector<long long> counts;
    for (const auto& c : series) counts.push_back(c.count);
    t.part_counts.push_back(std::move(counts));
  }
  if (achieved < level_hi) {
    t.level_hi = achieved;
    for (auto& counts : t.part_counts) {
      counts.resize(static_cast<std::size_t>(std::max(0, achieved - level_lo + 1)));
    }
    if (achieved < level_lo) t.part_counts.clear();
  }
  return t;
}

}  // namespace

OuterMeasure outer_measure_approx(const System& sys, const LeafSubset& subset,
                                  const GridCover& cover, double lambda, int scale_n,
                                  int delta_levels, const SweepBudget& budget) {
  if (scale_n < 1) throw Error("outer_measure_approx: scale must be >= 1");
  OuterMeasure out;
  out.cover.scale = scale_n + 1;
  const auto table =
      build_cost_table(sys, subset, cover, scale_n + 1, scale_n + delta_levels, budget);
  if (!subset.intervals.empty() && !table.has_segments()) {
    throw Error("outer_measure_approx: sweep budget too small for scale " +
                std::to_string(scale_n));
  }

  double total = 0.0;
  if (table.has_segments()) {
    std::size_t part_idx = 0;
    for (const auto& iv : subset.intervals) {
      const auto& counts = table.part_counts[part_idx++];
      int best_level = table.level_lo;
      double best = std::numeric_limits<double>::infinity();
      for (int n = table.level_lo; n <= table.level_hi; ++n) {
        const double c = static_cast<double>(counts[static_cast<std::size_t>(n - table.level_lo)]) *
                         std::exp(-lambda * n);
        if (c < best) {
          best = c;
          best_level = n;
        }
      }
      total += best;
      out.chosen_level = best_level;
      LeafSubset part = LeafSubset::from_intervals(subset.carrier, {iv});
      const auto realized = greedy_cover_at_level(sys, part, cover, best_level);
      for (const auto& [a, b] : realized.placed) {
        out.cover.elements.push_back(
            {subsegment_rebased(sys, subset.carrier, a, b), a, b, false, best_level});
      }
    }
  }
  for (double p : subset.points) {
    total += std::exp(-lambda * static_cast<double>(budget.n_max));
    out.capped = true;
    LeafSegment pt = subsegment_rebased(sys, subset.carrier, p, p);
    out.cover.elements.push_back({std::move(pt), p, p, true, budget.n_max});
  }
  out.value = total;
  return out;
}

namespace {

enum class Trend { Above, Below, Neither };

Trend classify(const CostTable& table, double lambda, int n_lo, int n_hi, int delta_levels) {
  const double first = table.cost(lambda, n_lo, delta_levels);
  const double last = table.cost(lambda, n_hi, delta_levels);
  if (!(first > 0) || !std::isfinite(first) || !std::isfinite(last)) return Trend::Neither;
  if (2.0 * last <= first) return Trend::Above;
  if (last >= 2.0 * first) return Trend::Below;
  return Trend::Neither;
}

}  // namespace

CriticalExponentResult critical_exponent(const System& sys, const LeafSubset& subset,
                                         const GridCover& cover,
                                         const CriticalExponentParams& params) {
  CriticalExponentResult out;
  if (subset.empty() || subset.intervals.empty()) {
    // Finite point parts are annihilated by every positive exponent.
    out.lambda_star = 0.0;
    out.bracket = {0.0, 0.0};
    out.note = subset.empty() ? "empty subset" : "finite point set; degenerate covers";
    return out;
  }
  if (params.n_hi - params.n_lo + 1 < 8) {
    throw Error("critical_exponent: N range must span at least 8 values");
  }

  // One count table serves every lambda probe; levels start at 2 so the
  // window can slide down if the budget cuts the top.
  int n_lo = params.n_lo;
  int n_hi = params.n_hi;
  CostTable table =
      build_cost_table(sys, subset, cover, 2, n_hi + params.delta_levels, params.budget);
  if (table.has_segments()) {
    const int max_scale = table.level_hi - params.delta_levels;
    if (max_scale < n_hi) {
      n_hi = max_scale;
      n_lo = std::min(n_lo, std::max(1, n_hi - 9));
    }
  }
  if (!table.has_segments() || n_hi - n_lo + 1 < 6) {
    out.status = TrendStatus::Indeterminate;
    out.note = "level budget too small for a trend window";
    return out;
  }

  const double lambda_max = sys.log_rate() + 1.0;
  auto trend_at = [&](double lambda) {
    return classify(table, lambda, n_lo, n_hi, params.delta_levels);
  };

  if (trend_at(lambda_max) != Trend::Above || trend_at(0.0) != Trend::Below) {
    // Widen the window once before giving up.
    const int wider_hi = n_hi + 2 + params.delta_levels;
    CostTable wider = build_cost_table(sys, subset, cover, 2, wider_hi, params.budget);
    if (wider.has_segments() && wider.level_hi - params.delta_levels > n_hi) {
      table = std::move(wider);
      n_hi = table.level_hi - params.delta_levels;
    }
    if (trend_at(lambda_max) != Trend::Above || trend_at(0.0) != Trend::Below) {
      out.status = TrendStatus::Indeterminate;
      out.note = "no clear trend at the bracket endpoints";
      return out;
    }
  }

  // The factor-2 test has resolution ~ log2/window, so a single bisection
  // stalls in a neutral zone around the critical value. Locate both zone
  // edges and return the midpoint, which is the symmetric center of the
  // two-sided trend test.
  double above_min = lambda_max;
  {
    double lo = 0.0, hi = lambda_max;  // hi is Above, lo is not
    while (hi - lo > params.lambda_width) {
      const double mid = 0.5 * (lo + hi);
      if (trend_at(mid) == Trend::Above) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    above_min = hi;
  }
  double below_max = 0.0;
  {
    double lo = 0.0, hi = above_min;  // lo is Below, hi is not
    while (hi - lo > params.lambda_width) {
      const double mid = 0.5 * (lo + hi);
      if (trend_at(mid) == Trend::Below) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    below_max = lo;
  }
  out.lambda_star = 0.5 * (below_max + above_min);
  out.bracket = {below_max, above_min};
  if (above_min - below_max > 0.8) {
    out.status = TrendStatus::Indeterminate;
    out.note = "neutral zone too wide; counts carry no usable trend";
  }
  for (int n = n_lo; n <= n_hi; ++n) {
    out.trend.push_back({n, out.lambda_star - 0.05,
                         table.cost(out.lambda_star - 0.05, n, params.delta_levels)});
    out.trend.push_back({n, out.lambda_star + 0.05,
                         table.cost(out.lambda_star + 0.05, n, params.delta_levels)});
  }
  return out;
}

namespace {

// Levels reachable before the placement budget runs out, from the affine
// count forecast count(L) ~ 2*delta*mesh*vmax/rho * rate^(L-1). Used only to
// skip meshes whose trend window cannot fill; never enters the estimates.
int forecast_max_level(const System& sys, double delta, int mesh, double inflation,
                       long long budget) {
  double vmax = 0.0;
  for (int i = 0; i < sys.dim(); ++i) {
    vmax = std::max(vmax, std::abs(sys.direction()[static_cast<std::size_t>(i)]));
  }
  const double lam = sys.rate();
  const double coef = 2.0 * delta * mesh * vmax / inflation * lam / (lam - 1.0);
  const double ratio = std::max(1.0, static_cast<double>(budget) / std::max(coef, 1e-12));
  return 1 + static_cast<int>(std::floor(std::log(ratio) / sys.log_rate()));
}

}  // namespace

HdimResult h_unstable_H(const System& sys, const AmbientSet& set, const HdimParams& params) {
  HdimResult out;
  std::vector<double> deltas = params.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  const auto bases = sample_base_points(sys, set, params.sample_points, params.seed);
  if (bases.empty()) throw Error("no base points available for the sup over x");

  struct Task {
    double delta;
    const TorusPoint* base;
    int mesh;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> tasks_per_delta;
  for (double d : deltas) {
    std::vector<int> usable;
    for (int mesh : params.meshes) {
      const int reach =
          forecast_max_level(sys, d, mesh, params.inflation,
                             params.exponent.budget.max_total_placements);
      if (reach >= params.exponent.delta_levels + 8) usable.push_back(mesh);
    }
    if (usable.empty()) usable.push_back(*std::min_element(params.meshes.begin(),
                                                           params.meshes.end()));
    for (const auto& b : bases) {
      for (int mesh : usable) tasks.push_back({d, &b, mesh});
    }
    tasks_per_delta.push_back(bases.size() * usable.size());
  }
  struct Slot {
    bool empty_trace = true;
    CriticalExponentResult result;
  };
  std::vector<Slot> slots(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto& t = tasks[i];
    const LeafSegment ball = leaf_ball(sys, *t.base, t.delta);
    const LeafSubset trace = trace_subset(sys, set, ball);
    if (trace.empty()) return;
    slots[i].empty_trace = false;
    const GridCover cover{t.mesh, params.inflation, sys.dim()};
    slots[i].result = critical_exponent(sys, trace, cover, params.exponent);
  });

  bool any_trace = false;
  std::size_t idx = 0;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double d = deltas[di];
    double sup = 0.0;
    bool delta_has_trace = false;
    for (std::size_t j = 0; j < tasks_per_delta[di]; ++j, ++idx) {
      auto& slot = slots[idx];
      if (slot.empty_trace) continue;
      delta_has_trace = true;
      any_trace = true;
      if (slot.result.status == TrendStatus::Indeterminate) {
        out.status = TrendStatus::Indeterminate;
      }
      sup = std::max(sup, slot.result.lambda_star);
      out.details.push_back(std::move(slot.result));
    }
    out.delta_values.emplace_back(d, delta_has_trace ? sup : 0.0);
  }
  out.empty_trace = !any_trace;
  out.value = out.delta_values.back().second;
  return out;
}

}  // namespace leafdim
