// Independent oracles for expected values: closed forms, a separate
// root-finder, brute-force cover search, and sampled-membership cylinders.
// Nothing here reuses the library's computation paths for the quantity it
// checks.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "leafdim/covers.hpp"
#include "leafdim/leaf.hpp"
#include "leafdim/systems.hpp"

namespace oracle {

// cat2 = [[2,1],[1,1]]: eigenvalues (3 +- sqrt5)/2 by the quadratic formula.
inline constexpr double kCat2LambdaU = 2.618033988749895;
inline constexpr double kCat2LambdaS = 0.3819660112501051;
inline constexpr double kCat2LogLambdaU = 0.9624236501192069;

// paper3(5): roots of t^3 - 6t^2 + 5t - 1, frozen from bisection at 30
// significant digits.
inline constexpr double kPaper3LambdaS = 0.30797852836990413;
inline constexpr double kPaper3LambdaC = 0.6431041321077906;
inline constexpr double kPaper3LambdaU = 5.048917339522305;
inline constexpr double kPaper3LogLambdaU = 1.6191738320894254;
inline constexpr double kPaper3MinusLogLambdaS = 1.1777252115233595;
inline constexpr double kPaper3LogLambdaC = -0.4414486205660660;

// Plain double-precision bisection, independent of the library's integer
// polynomial root isolation.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All roots of the paper3(k0) characteristic cubic t^3-(k0+1)t^2+k0*t-1,
// sorted ascending, by scanning for sign changes.
inline std::vector<double> paper3_roots(long long k0) {
  auto p = [&](double t) {
    return ((t - static_cast<double>(k0 + 1)) * t + static_cast<double>(k0)) * t - 1.0;
  };
  std::vector<double> roots;
  const double bound = static_cast<double>(k0) + 2.0;
  const int steps = 1 << 16;
  double prev_t = -bound, prev_v = p(prev_t);
  for (int i = 1; i <= steps && roots.size() < 3; ++i) {
    const double t = -bound + 2.0 * bound * i / steps;
    const double v = p(t);
    if ((prev_v < 0) != (v < 0)) roots.push_back(bisect_root(p, prev_t, t));
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

// Minimal cover count by greedy over a fixed endpoint grid, with feasibility
// checked through exact-rational re-based candidate segments (independent of
// the library's closed-form slack path). The grid step is set three digits
// below the worst-case feasible width divided by the cover count bound, so
// the total quantization drift stays under one segment and the grid optimum
// equals the continuum optimum. Feasibility is antitone in the right
// endpoint, so the farthest feasible grid point is found by bisection; the
// result is the exact grid-restricted minimum. Only usable at small n.
inline long long brute_force_min_cover(const leafdim::System& sys,
                                       const leafdim::LeafSegment& segment,
                                       const leafdim::GridCover& cover, int n) {
  const double lo = segment.t_lo;
  const double hi = segment.t_hi;
  double vmax = 0.0;
  for (int i = 0; i < sys.dim(); ++i) {
    vmax = std::max(vmax, std::abs(sys.direction()[static_cast<std::size_t>(i)]));
  }
  const double width_floor = (cover.inflation - 1.0) / cover.mesh_count /
                             (vmax * std::exp(static_cast<double>(n - 1) * sys.log_rate()));
  const double count_bound = (hi - lo) / width_floor + 16.0;
  const double grid_step = (hi - lo) / (30000.0 * count_bound);
  const long long points = static_cast<long long>(std::ceil((hi - lo) / grid_step));
  const auto grid = [&](long long i) { return lo + static_cast<double>(i) * grid_step; };
  const auto feasible = [&](double a, long long j) {
    const auto sub = subsegment_rebased(sys, segment, a, std::min(grid(j), hi));
    return n_orbit_thinner(sys, sub, cover, n).n >= n;
  };
  long long count = 0;
  long long cur = 0;
  double cur_t = lo;
  while (cur_t < hi) {
    ++count;
    long long good = cur;  // degenerate is always feasible
    long long bad = points + 1;
    if (feasible(cur_t, points)) {
      good = points;
    } else {
      while (bad - good > 1) {
        const long long mid = good + (bad - good) / 2;
        if (feasible(cur_t, mid)) {
          good = mid;
        } else {
          bad = mid;
        }
      }
    }
    if (good == cur) return -1;  // grid too coarse to make progress
    cur = good;
    cur_t = std::min(grid(cur), hi);
    if (count > 1000000) break;
  }
  return count;
}

// Cylinder length by sampled membership along the plaque: count parameters
// whose first n grid digits match the sample point's.
inline double sampled_cylinder_length(const leafdim::System& sys, const leafdim::TorusPoint& x,
                                      int mesh, int n, double plaque_lo, double plaque_hi,
                                      double step) {
  const int d = sys.dim();
  const auto v = sys.direction();
  std::vector<std::vector<double>> orbit_coords;
  leafdim::TorusPoint xk = x;
  for (int k = 0; k < n; ++k) {
    std::vector<double> c(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = xk.coord_double(i);
    orbit_coords.push_back(std::move(c));
    if (k + 1 < n) xk = leafdim::apply(sys.map, xk, 1);
  }
  auto box_of = [&](double coord) { return std::floor(coord * mesh); };
  long long inside = 0, total = 0;
  for (double t = plaque_lo; t <= plaque_hi; t += step) {
    ++total;
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      const double scale = std::exp(static_cast<double>(k) * sys.log_rate());
      for (int i = 0; i < d; ++i) {
        const double moved = orbit_coords[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] +
                             t * scale * v[static_cast<std::size_t>(i)];
        const double base = orbit_coords[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        if (box_of(moved) != box_of(base)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) ++inside;
  }
  (void)total;
  return static_cast<double>(inside) * step;
}

}  // namespace oracle
