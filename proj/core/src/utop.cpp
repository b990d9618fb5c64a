#include "leafdim/utop.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "leafdim/errors.hpp"
#include "leafdim/parallel.hpp"

namespace leafdim {

namespace {

void fit_tail_slope(GrowthSeries& s) {
  const int count = static_cast<int>(s.ns.size());
  if (count == 0) {
    s.slope = 0.0;
    return;
  }
  // Fit over the top half of the achieved range; the additive constant in
  // log count(n) = n h + O(1) biases small-n points.
  int first = count / 2;
  if (count - first < 2) first = std::max(0, count - 2);
  s.window_lo = s.ns[static_cast<std::size_t>(first)];
  s.window_hi = s.ns.back();
  const int m = count - first;
  if (m < 2) {
    s.slope = 0.0;
    s.slope_stderr = 0.0;
    return;
  }
  double sx = 0, sy = 0;
  for (int i = first; i < count; ++i) {
    sx += s.ns[static_cast<std::size_t>(i)];
    sy += s.log_counts[static_cast<std::size_t>(i)];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (int i = first; i < count; ++i) {
    const double dx = s.ns[static_cast<std::size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (s.log_counts[static_cast<std::size_t>(i)] - my);
  }
  s.slope = sxx > 0 ? sxy / sxx : 0.0;
  if (m > 2 && sxx > 0) {
    double ss = 0;
    for (int i = first; i < count; ++i) {
      const double r = s.log_counts[static_cast<std::size_t>(i)] - my -
                       s.slope * (s.ns[static_cast<std::size_t>(i)] - mx);
      ss += r * r;
    }
    s.slope_stderr = std::sqrt(ss / (m - 2) / sxx);
  } else {
    s.slope_stderr = 0.0;
  }
}

}  // namespace

CompactEntropy entropy_of_compact(const System& sys, const LeafSubset& compact,
                                  const std::vector<int>& meshes, int n_lo, int n_hi,
                                  const SweepBudget& budget, double inflation) {
  if (compact.empty()) throw Error("entropy_of_compact: empty compact set");
  if (meshes.empty()) throw Error("entropy_of_compact: no meshes");
  CompactEntropy out;
  std::vector<int> sorted_meshes = meshes;
  std::sort(sorted_meshes.begin(), sorted_meshes.end());
  for (int mesh : sorted_meshes) {
    const GridCover cover{mesh, inflation, sys.dim()};
    const auto counts = bowen_count_series(sys, compact, cover, n_lo, n_hi, budget);
    GrowthSeries s;
    s.cover_mesh = mesh;
    s.base_point = compact.carrier.base.to_string();
    for (const auto& c : counts) {
      s.ns.push_back(c.n);
      s.counts.push_back(c.count);
      s.log_counts.push_back(std::log(static_cast<double>(c.count)));
    }
    s.budget_capped = counts.empty() || counts.back().n < n_hi;
    fit_tail_slope(s);
    out.series.push_back(std::move(s));
  }
  double best = 0.0;
  for (const auto& s : out.series) best = std::max(best, s.slope);
  out.value = best;
  if (out.series.size() >= 2) {
    // Stabilization across the two finest meshes of the family.
    const double coarse = out.series[out.series.size() - 2].slope;
    const double fine = out.series.back().slope;
    out.stabilization_gap = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-9);
    out.non_stabilized = out.stabilization_gap > 0.05;
  }
  return out;
}

UtopResult unstable_topological_entropy(const System& sys, const UtopParams& params) {
  return entropy_of_subset_cover_style(sys, AmbientSet::torus(), params);
}

UtopResult entropy_of_subset_cover_style(const System& sys, const AmbientSet& set,
                                         const UtopParams& params) {
  if (params.sample_points < 0) throw Error("sample_points must be >= 0");
  UtopResult out;
  std::vector<double> deltas = params.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  const auto bases = sample_base_points(sys, set, params.sample_points, params.seed);
  if (bases.empty()) throw Error("no base points available for the sup over x");

  struct Task {
    double delta;
    const TorusPoint* base;
  };
  std::vector<Task> tasks;
  for (double d : deltas) {
    for (const auto& b : bases) tasks.push_back({d, &b});
  }
  struct Slot {
    bool empty_trace = true;
    CompactEntropy result;
  };
  std::vector<Slot> slots(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto& t = tasks[i];
    const LeafSegment ball = leaf_ball(sys, *t.base, t.delta);
    const LeafSubset trace = trace_subset(sys, set, ball);
    if (trace.empty()) return;
    slots[i].empty_trace = false;
    slots[i].result = entropy_of_compact(sys, trace, params.meshes, params.n_lo, params.n_hi,
                                         params.budget, params.inflation);
  });

  bool any_trace = false;
  std::size_t idx = 0;
  for (double d : deltas) {
    double sup = 0.0;
    bool delta_has_trace = false;
    for (std::size_t b = 0; b < bases.size(); ++b, ++idx) {
      auto& slot = slots[idx];
      if (slot.empty_trace) continue;
      delta_has_trace = true;
      any_trace = true;
      sup = std::max(sup, slot.result.value);
      out.non_stabilized = out.non_stabilized || slot.result.non_stabilized;
      for (auto& s : slot.result.series) {
        s.delta = d;
        out.series.push_back(std::move(s));
      }
    }
    out.delta_values.emplace_back(d, delta_has_trace ? sup : 0.0);
  }
  out.empty_trace = !any_trace;
  out.value = out.delta_values.back().second;  // smallest delta
  return out;
}

}  // namespace leafdim
