#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "leafdim/rational.hpp"

namespace leafdim {

inline constexpr int kMaxDim = 3;
inline constexpr int kDefaultNMax = 60;

// A point on the d-torus with exact rational coordinates in [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<BigRat> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const BigRat& coord(int i) const { return coords_[static_cast<std::size_t>(i)]; }
  double coord_double(int i) const { return rat_to_double(coords_[static_cast<std::size_t>(i)]); }

  bool operator==(const TorusPoint& other) const { return coords_ == other.coords_; }
  bool operator!=(const TorusPoint& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  std::vector<BigRat> coords_;
};

TorusPoint parse_torus_point(const std::string& s);  // "(1/2,0.25)" etc.

enum class BundleLabel { Stable, Center, Unstable };

const char* bundle_label_name(BundleLabel label);

// Eigen-splitting of a toral automorphism, eigenvalues sorted by modulus
// ascending. Exactly one direction is labeled unstable.
struct Splitting {
  std::vector<double> eigenvalues;
  std::vector<std::array<double, 3>> eigenvectors;  // unit vectors
  std::vector<BundleLabel> labels;
  int unstable_index = -1;
  double unstable_rate = 0.0;      // |unstable eigenvalue|, > 1
  double log_unstable_rate = 0.0;  // log(unstable_rate)

  const std::array<double, 3>& unstable_direction() const {
    return eigenvectors[static_cast<std::size_t>(unstable_index)];
  }
};

// Integer unimodular matrix acting on the d-torus.
class ToralAutomorphism {
 public:
  ToralAutomorphism() = default;

  int dim() const { return dim_; }
  int det_sign() const { return det_sign_; }
  long long entry(int i, int j) const {
    return m_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  long long inverse_entry(int i, int j) const {
    return minv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  // Integer matrix power; exponent may be negative (uses the exact inverse).
  ToralAutomorphism power(int exponent) const;

  std::string to_string() const;

 private:
  friend ToralAutomorphism make_toral_automorphism(const std::vector<long long>& flat);

  int dim_ = 0;
  int det_sign_ = 0;
  std::array<std::array<long long, 3>, 3> m_{};
  std::array<std::array<long long, 3>, 3> minv_{};
};

// Validates |det| = 1 and d in {2,3}. The flat list is row-major, length d*d.
ToralAutomorphism make_toral_automorphism(const std::vector<long long>& flat);

enum class Labeling {
  // Unstable <=> the unique modulus above 1; smallest modulus is stable.
  Strict,
  // Labels assigned purely by modulus rank (largest = unstable). Realizes
  // the inverse-map splitting where the expanded direction of f^{-1} is the
  // stable direction of f.
  Ranked,
};

// Real-distinct spectrum required; roots found by sign-change bracketing and
// bisection on the integer characteristic polynomial.
Splitting compute_splitting(const ToralAutomorphism& map, Labeling labeling = Labeling::Strict);

// Exact orbit arithmetic: matrix^k applied to x, reduced mod 1. Negative k
// uses the exact integer inverse; no floating point is involved.
TorusPoint apply(const ToralAutomorphism& map, const TorusPoint& x, long long k);

// An automorphism together with a chosen splitting. Everything downstream
// (leaves, covers, estimators) consumes this bundle. Immutable.
struct System {
  std::string name;
  ToralAutomorphism map;
  Splitting splitting;

  int dim() const { return map.dim(); }
  double rate() const { return splitting.unstable_rate; }
  double log_rate() const { return splitting.log_unstable_rate; }
  const std::array<double, 3>& direction() const { return splitting.unstable_direction(); }

  // System for f^m: exact matrix power, same unstable direction, log rate
  // scaled by exactly m so that iterate scales compose bit-identically.
  System power(int m) const;
};

// log Jac^u at x; constant in x for linear systems (= unstable_rate).
double unstable_jacobian(const System& sys, const TorusPoint& x);

// Registry: "cat2", "paper3" (k0 defaults to 5), "paper3:k0=7",
// "matrix:[2,1,1,1]"; append ":inverse" for the f^{-1} splitting.
System make_system(const std::string& spec);
System cat2_system();
System paper3_system(long long k0 = 5);

}  // namespace leafdim
