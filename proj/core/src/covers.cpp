#include "leafdim/covers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "leafdim/errors.hpp"

namespace leafdim {

namespace {

double wrap01(double x) { return x - std::floor(x); }

// Largest integer strictly below x (handles exact-integer x).
double int_below(double x) { return std::ceil(x) - 1.0; }
// Smallest integer strictly above x.
double int_above(double x) { return std::floor(x) + 1.0; }

// Does [s, s+w] (w >= 0) fit inside a single open cell along one axis?
// Cells along an axis are ((j+0.5-rho/2)/m, (j+0.5+rho/2)/m) mod 1.
bool axis_fits(double s, double w, int mesh, double inflation) {
  const double m = static_cast<double>(mesh);
  if (w * m >= inflation) return false;
  const double hi = s * m - 0.5 + 0.5 * inflation;        // j < hi
  const double lo = (s + w) * m - 0.5 - 0.5 * inflation;  // j > lo
  return int_below(hi) > lo;
}

// Directional room from position s to the farthest open cell edge among the
// cells containing s. Always positive: the cells cover the circle.
double axis_slack(double s, bool rightward, int mesh, double inflation) {
  const double m = static_cast<double>(mesh);
  const double t = s * m - 0.5;
  if (rightward) {
    const double j = int_below(t + 0.5 * inflation);
    return (j + 0.5 + 0.5 * inflation) / m - s;
  }
  const double j = int_above(t - 0.5 * inflation);
  return s - (j + 0.5 - 0.5 * inflation) / m;
}

}  // namespace

bool thinner_than(const LeafSegment& seg, const GridCover& cover) {
  const double log_side = std::log(cover.side());
  const double width = seg.t_hi - seg.t_lo;
  const double log_scaled = width > 0
                                ? std::log(width) + static_cast<double>(seg.level) * seg.log_rate
                                : -std::numeric_limits<double>::infinity();
  // Extent screen first: it is overflow-safe and makes the position
  // arithmetic below small whenever it runs.
  for (int i = 0; i < seg.dim; ++i) {
    const double v = seg.direction[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    if (log_scaled + std::log(std::abs(v)) >= log_side) return false;
  }
  const double sc = std::exp(static_cast<double>(seg.level) * seg.log_rate);
  for (int i = 0; i < seg.dim; ++i) {
    const double v = seg.direction[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    const double t_left = v > 0 ? seg.t_lo : seg.t_hi;
    const double s = wrap01(seg.base.coord_double(i) + t_left * sc * v);
    const double w = width * sc * std::abs(v);
    if (!axis_fits(s, w, cover.mesh_count, cover.inflation)) return false;
  }
  return true;
}

OrbitThinnerResult n_orbit_thinner(const System& sys, const LeafSegment& seg,
                                   const GridCover& cover, int n_max) {
  LeafSegment cur = seg;
  for (int k = 0; k < n_max; ++k) {
    if (!thinner_than(cur, cover)) return {k, false};
    cur = iterate_segment(sys, cur, 1);
  }
  return {n_max, true};
}

OrbitThinnerResult n_orbit_thinner_power(const System& sys, const LeafSegment& seg,
                                         const GridCover& cover, int block, int n_max) {
  if (block < 1) throw Error("power block must be >= 1");
  const ToralAutomorphism power_map = sys.map.power(block);
  LeafSegment block_base = seg;
  for (int kb = 0; kb < n_max; ++kb) {
    LeafSegment inner = block_base;
    for (int i = 0; i < block; ++i) {
      if (!thinner_than(inner, cover)) return {kb, false};
      if (i + 1 < block) inner = iterate_segment(sys, inner, 1);
    }
    // Advance through the exact matrix power; the level moves by a full
    // block so the scale agrees bit-for-bit with the plain iterates.
    block_base.base = apply(power_map, block_base.base, 1);
    block_base.level += block;
  }
  return {n_max, true};
}

namespace {

// Per-level data for sweeping one carrier leaf against one cover: exact base
// orbit fractions (double-rounded once) and the level scales.
struct LevelTable {
  int dim = 0;
  int levels = 0;
  int mesh = 0;
  double inflation = 0.0;
  std::array<double, 3> dir{};
  std::vector<std::array<double, 3>> base_frac;
  std::vector<double> scale;
};

LevelTable build_level_table(const System& sys, const LeafSegment& carrier,
                             const GridCover& cover, int levels) {
  LevelTable t;
  t.dim = carrier.dim;
  t.levels = levels;
  t.mesh = cover.mesh_count;
  t.inflation = cover.inflation;
  t.dir = carrier.direction;
  t.base_frac.resize(static_cast<std::size_t>(levels));
  t.scale.resize(static_cast<std::size_t>(levels));
  TorusPoint p = carrier.base;
  for (int k = 0; k < levels; ++k) {
    for (int i = 0; i < t.dim; ++i) {
      t.base_frac[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = p.coord_double(i);
    }
    t.scale[static_cast<std::size_t>(k)] =
        std::exp(static_cast<double>(carrier.level + k) * carrier.log_rate);
    if (k + 1 < levels) p = apply(sys.map, p, 1);
  }
  return t;
}

// Maximal w such that [t, t+w] stays thinner than the cover for all levels
// k < n, solved in closed form from the per-level directional slacks.
double max_feasible_width(const LevelTable& t, double start, int n) {
  double w = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double sc = t.scale[static_cast<std::size_t>(k)];
    for (int i = 0; i < t.dim; ++i) {
      const double v = t.dir[static_cast<std::size_t>(i)];
      if (v == 0.0) continue;
      const double s =
          wrap01(t.base_frac[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] +
                 start * sc * v);
      const double slack = axis_slack(s, v > 0, t.mesh, t.inflation);
      w = std::min(w, slack / (sc * std::abs(v)));
    }
  }
  return w;
}

struct SweepItem {
  double lo = 0.0;
  double hi = 0.0;  // lo == hi for point items
};

std::vector<SweepItem> sweep_items(const LeafSubset& subset) {
  std::vector<SweepItem> items;
  for (const auto& [a, b] : subset.intervals) items.push_back({a, b});
  for (double p : subset.points) items.push_back({p, p});
  std::sort(items.begin(), items.end(),
            [](const SweepItem& x, const SweepItem& y) { return x.lo < y.lo; });
  return items;
}

struct SweepOutcome {
  long long count = 0;
  bool truncated = false;  // budget exhausted or width underflow
};

SweepOutcome greedy_sweep(const LevelTable& table, const std::vector<SweepItem>& items, int n,
                          long long placement_budget) {
  SweepOutcome out;
  std::size_t idx = 0;
  double covered_to = -std::numeric_limits<double>::infinity();
  while (idx < items.size()) {
    if (items[idx].hi <= covered_to) {  // closed placements cover their ends
      ++idx;
      continue;
    }
    const double start = std::max(items[idx].lo, covered_to);
    if (++out.count > placement_budget) {
      out.truncated = true;
      return out;
    }
    const double w = max_feasible_width(table, start, n) * (1.0 - 1e-12);
    const double end = start + w;
    if (items[idx].lo < items[idx].hi && end == start) {
      // Width underflowed the parameter resolution; the count at this n is
      // astronomically beyond any budget.
      out.truncated = true;
      return out;
    }
    covered_to = end;
    while (idx < items.size() && items[idx].hi <= covered_to) ++idx;
  }
  return out;
}

}  // namespace

BowenCount minimal_bowen_cover(const System& sys, const LeafSubset& subset,
                               const GridCover& cover, int n) {
  if (subset.empty()) throw Error("minimal_bowen_cover: empty subset");
  if (n < 1) throw Error("minimal_bowen_cover: n must be >= 1");
  const auto table = build_level_table(sys, subset.carrier, cover, n);
  const auto items = sweep_items(subset);
  const auto res = greedy_sweep(table, items, n, std::numeric_limits<long long>::max());
  if (res.truncated) {
    throw Error("minimal_bowen_cover: count at n=" + std::to_string(n) +
                " exceeds the parameter resolution");
  }
  return {n, res.count, false};
}

std::vector<BowenCount> bowen_count_series(const System& sys, const LeafSubset& subset,
                                           const GridCover& cover, int n_lo, int n_hi,
                                           const SweepBudget& budget) {
  if (subset.empty()) throw Error("bowen_count_series: empty subset");
  if (n_lo < 1 || n_hi < n_lo) throw Error("bowen_count_series: bad n range");
  const int n_cap = std::min(n_hi, budget.n_max);
  const auto table = build_level_table(sys, subset.carrier, cover, n_cap);
  const auto items = sweep_items(subset);
  std::vector<BowenCount> series;
  long long remaining = budget.max_total_placements;
  for (int n = n_lo; n <= n_cap; ++n) {
    const auto res = greedy_sweep(table, items, n, remaining);
    if (res.truncated) break;
    remaining -= res.count;
    series.push_back({n, res.count, false});
    if (remaining <= 0) break;
  }
  return series;
}

GreedyCover greedy_cover_at_level(const System& sys, const LeafSubset& subset,
                                  const GridCover& cover, int n, long long max_placements) {
  GreedyCover out;
  if (subset.empty()) return out;
  const auto table = build_level_table(sys, subset.carrier, cover, n);
  const auto items = sweep_items(subset);
  std::size_t idx = 0;
  double covered_to = -std::numeric_limits<double>::infinity();
  while (idx < items.size()) {
    if (items[idx].hi <= covered_to) {
      ++idx;
      continue;
    }
    const double start = std::max(items[idx].lo, covered_to);
    if (static_cast<long long>(out.placed.size()) >= max_placements) {
      out.truncated = true;
      return out;
    }
    const double w = max_feasible_width(table, start, n) * (1.0 - 1e-12);
    const double end = start + w;
    if (items[idx].lo < items[idx].hi && end == start) {
      out.truncated = true;
      return out;
    }
    out.placed.emplace_back(start, end);
    covered_to = end;
    while (idx < items.size() && items[idx].hi <= covered_to) ++idx;
  }
  return out;
}

BowenCount minimal_bowen_cover_bisect(const System& sys, const LeafSubset& subset,
                                      const GridCover& cover, int n) {
  if (subset.empty()) throw Error("minimal_bowen_cover_bisect: empty subset");
  const auto items = sweep_items(subset);
  auto feasible = [&](double a, double b) {
    const auto sub = subsegment_rebased(sys, subset.carrier, a, b);
    return n_orbit_thinner(sys, sub, cover, n).n >= n;
  };
  long long count = 0;
  std::size_t idx = 0;
  double covered_to = -std::numeric_limits<double>::infinity();
  const double span_hi = items.back().hi;
  while (idx < items.size()) {
    if (items[idx].hi <= covered_to) {
      ++idx;
      continue;
    }
    const double start = std::max(items[idx].lo, covered_to);
    ++count;
    double lo = start;
    double hi = span_hi;
    double w = 0.0;
    if (hi > lo && feasible(start, hi)) {
      w = hi - lo;
    } else if (hi > lo) {
      // Invariant: [start, start+w_ok] feasible, [start, start+w_bad] not.
      // The tolerance is relative to the bracket so deep levels, whose
      // feasible widths shrink like rate^-n, resolve just as sharply.
      double w_ok = 0.0;
      double w_bad = hi - lo;
      while (w_bad - w_ok > std::max(w_bad * 1e-12, 1e-15)) {
        const double mid = 0.5 * (w_ok + w_bad);
        if (feasible(start, start + mid)) {
          w_ok = mid;
        } else {
          w_bad = mid;
        }
      }
      w = w_ok;
    }
    covered_to = start + w;
    while (idx < items.size() && items[idx].hi <= covered_to) ++idx;
  }
  return {n, count, false};
}

}  // namespace leafdim
