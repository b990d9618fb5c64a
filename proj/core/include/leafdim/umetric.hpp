#pragma once

#include <cstdint>
#include <vector>

#include "leafdim/systems.hpp"

namespace leafdim {

// h^u_m(f) for Lebesgue measure on a linear system: the integrated log
// unstable Jacobian, which is constant and equals log(unstable rate).
double metric_entropy_jacobian(const System& sys);

struct InformationSample {
  TorusPoint x;
  int n = 0;
  double value = 0.0;  // I_n(x)/n
  double plaque_length = 0.0;
  double cylinder_length = 0.0;
  double plaque_lo = 0.0;  // parameter window of the plaque around t = 0
  double plaque_hi = 0.0;
};

// I_n(x)/n where I_n is the conditional information of the first n grid-box
// digits given the unstable plaque through x. The plaque is the leaf segment
// through x clipped to its half-open grid box; the n-cylinder is the exact
// intersection of n parameter intervals (preimages of boxes along the affine
// leaf are intervals), and the conditional measure is normalized arclength.
// Throws DegeneratePlaque when x sits within 1e-9 of a grid hyperplane.
InformationSample conditional_information(const System& sys, const TorusPoint& x,
                                          int mesh_count, int n);

struct SmbRow {
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int samples = 0;
};

struct SmbReport {
  std::vector<SmbRow> rows;
  bool converged = false;  // last two n-values agree within 2%
  int mesh_count = 0;
};

// Mean and spread of I_n/n over random rational sample points, per n.
SmbReport smb_convergence_report(const System& sys, int samples,
                                 const std::vector<int>& n_list, int mesh_count,
                                 std::uint64_t seed = 20200828);

}  // namespace leafdim
