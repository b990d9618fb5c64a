#include "leafdim/umetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "leafdim/errors.hpp"
#include "leafdim/leaf.hpp"

namespace leafdim {

double metric_entropy_jacobian(const System& sys) {
  return sys.log_rate();
}

namespace {

// Parameter interval {t : x_i + t*v stays in the half-open grid box of x}
// along one axis; the box preimage along an affine line is an interval.
struct Interval {
  double lo, hi;
};

Interval axis_interval(double xi, double vi, double scale, int mesh) {
  const double m = static_cast<double>(mesh);
  const double cell = std::floor(xi * m) / m;
  const double lo_edge = cell - xi;
  const double hi_edge = cell + 1.0 / m - xi;
  const double f = vi * scale;
  if (f > 0) return {lo_edge / f, hi_edge / f};
  return {hi_edge / f, lo_edge / f};
}

}  // namespace

InformationSample conditional_information(const System& sys, const TorusPoint& x, int mesh_count,
                                          int n) {
  if (mesh_count < 2) throw Error("conditional_information: mesh must be >= 2");
  if (n < 0) throw Error("conditional_information: n must be >= 0");
  const int d = sys.dim();
  const auto v = sys.direction();

  // Reject points too close to a grid hyperplane: the plaque would be
  // degenerate along some axis.
  for (int i = 0; i < d; ++i) {
    const double xi = x.coord_double(i);
    const double fr = xi * mesh_count - std::floor(xi * mesh_count);
    const double dist = std::min(fr, 1.0 - fr) / mesh_count;
    if (dist < 1e-9) {
      throw DegeneratePlaque("sample point within 1e-9 of a grid hyperplane");
    }
  }

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  TorusPoint xk = x;
  double plaque_len = 0.0, plaque_lo = 0.0, plaque_hi = 0.0;
  for (int k = 0; k < std::max(n, 1); ++k) {
    const double scale = std::exp(static_cast<double>(k) * sys.log_rate());
    for (int i = 0; i < d; ++i) {
      const double vi = v[static_cast<std::size_t>(i)];
      if (vi == 0.0) continue;
      const auto iv = axis_interval(xk.coord_double(i), vi, scale, mesh_count);
      lo = std::max(lo, iv.lo);
      hi = std::min(hi, iv.hi);
    }
    if (k == 0) {
      plaque_len = hi - lo;
      plaque_lo = lo;
      plaque_hi = hi;
    }
    if (k + 1 < std::max(n, 1)) xk = apply(sys.map, xk, 1);
  }

  InformationSample out;
  out.x = x;
  out.n = n;
  out.plaque_length = plaque_len;
  out.plaque_lo = plaque_lo;
  out.plaque_hi = plaque_hi;
  out.cylinder_length = hi - lo;
  if (n == 0) {
    out.cylinder_length = plaque_len;
    out.value = 0.0;
    return out;
  }
  if (!(out.cylinder_length > 0) || !(plaque_len > 0)) {
    throw DegeneratePlaque("cylinder collapsed below the floating point resolution");
  }
  out.value = -std::log(out.cylinder_length / plaque_len) / static_cast<double>(n);
  return out;
}

SmbReport smb_convergence_report(const System& sys, int samples, const std::vector<int>& n_list,
                                 int mesh_count, std::uint64_t seed) {
  if (samples < 1) throw Error("smb_convergence_report: samples must be >= 1");
  SmbReport report;
  report.mesh_count = mesh_count;
  std::mt19937_64 rng(seed);
  std::vector<TorusPoint> pts;
  while (static_cast<int>(pts.size()) < samples) {
    TorusPoint cand = random_rational_point(sys.dim(), rng);
    try {
      conditional_information(sys, cand, mesh_count, 0);
      pts.push_back(std::move(cand));
    } catch (const DegeneratePlaque&) {
      // resample
    }
  }
  std::vector<int> ns = n_list;
  std::sort(ns.begin(), ns.end());
  for (int n : ns) {
    double sum = 0.0, sum2 = 0.0;
    for (const auto& p : pts) {
      const double val = conditional_information(sys, p, mesh_count, n).value;
      sum += val;
      sum2 += val * val;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum2 / samples - mean * mean);
    report.rows.push_back({n, mean, std::sqrt(var), samples});
  }
  if (report.rows.size() >= 2) {
    const double a = report.rows[report.rows.size() - 2].mean;
    const double b = report.rows.back().mean;
    report.converged = std::abs(b - a) <= 0.02 * std::max(std::abs(b), 1e-12);
  }
  return report;
}

}  // namespace leafdim
