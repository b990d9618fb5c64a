#include "leafdim/systems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "leafdim/errors.hpp"

namespace leafdim {

namespace {

BigInt det2(const std::array<std::array<long long, 3>, 3>& m) {
  return BigInt(m[0][0]) * m[1][1] - BigInt(m[0][1]) * m[1][0];
}

BigInt det3(const std::array<std::array<long long, 3>, 3>& m) {
  return BigInt(m[0][0]) * (BigInt(m[1][1]) * m[2][2] - BigInt(m[1][2]) * m[2][1]) -
         BigInt(m[0][1]) * (BigInt(m[1][0]) * m[2][2] - BigInt(m[1][2]) * m[2][0]) +
         BigInt(m[0][2]) * (BigInt(m[1][0]) * m[2][1] - BigInt(m[1][1]) * m[2][0]);
}

// Characteristic polynomial coefficients, monic, ascending degree.
// d=2: t^2 - tr t + det; d=3: t^3 - tr t^2 + c2 t - det.
std::vector<long long> char_poly(const ToralAutomorphism& map) {
  const int d = map.dim();
  if (d == 2) {
    const long long tr = map.entry(0, 0) + map.entry(1, 1);
    const long long det = map.entry(0, 0) * map.entry(1, 1) - map.entry(0, 1) * map.entry(1, 0);
    return {det, -tr, 1};
  }
  long long tr = 0;
  for (int i = 0; i < 3; ++i) tr += map.entry(i, i);
  long long c2 = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      c2 += map.entry(i, i) * map.entry(j, j) - map.entry(i, j) * map.entry(j, i);
    }
  }
  const long long det = map.det_sign();
  return {-det, c2, -tr, 1};
}

double poly_eval(const std::vector<long long>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * t + static_cast<double>(*it);
  }
  return acc;
}

// Bisection after sign-change bracketing; deterministic, no external solver.
double bisect_root(const std::vector<long long>& coeffs, double lo, double hi) {
  double flo = poly_eval(coeffs, lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fmid = poly_eval(coeffs, mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0) == (fmid < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

// All real roots of a monic integer polynomial with distinct real roots,
// isolated by a sign-change scan over the Cauchy bound.
std::vector<double> real_distinct_roots(const std::vector<long long>& coeffs) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  double bound = 0.0;
  for (int i = 0; i < deg; ++i) bound = std::max(bound, std::abs(static_cast<double>(coeffs[i])));
  bound += 1.0;
  const int steps = 1 << 14;
  const double h = 2.0 * bound / steps;
  std::vector<double> roots;
  double prev_t = -bound;
  double prev_v = poly_eval(coeffs, prev_t);
  for (int i = 1; i <= steps && static_cast<int>(roots.size()) < deg; ++i) {
    const double t = -bound + i * h;
    const double v = poly_eval(coeffs, t);
    if (v == 0.0) {
      roots.push_back(t);
    } else if ((prev_v < 0) != (v < 0)) {
      roots.push_back(bisect_root(coeffs, prev_t, t));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

// For d=3 the discriminant of t^3 + b t^2 + c t + d decides three distinct
// real roots (> 0); exact in integer arithmetic.
bool cubic_all_real_distinct(const std::vector<long long>& coeffs) {
  const BigInt d(coeffs[0]), c(coeffs[1]), b(coeffs[2]);
  const BigInt disc = BigInt(18) * b * c * d - BigInt(4) * b * b * b * d + b * b * c * c -
                      BigInt(4) * c * c * c - BigInt(27) * d * d;
  return disc > 0;
}

std::array<double, 3> eigenvector(const ToralAutomorphism& map, double lambda) {
  const int d = map.dim();
  std::array<double, 3> v{};
  if (d == 2) {
    const double a = static_cast<double>(map.entry(0, 0)) - lambda;
    const double b = static_cast<double>(map.entry(0, 1));
    const double c = static_cast<double>(map.entry(1, 0));
    const double dd = static_cast<double>(map.entry(1, 1)) - lambda;
    // Null vector of (A - lambda I); take the row giving the larger candidate.
    const std::array<double, 3> v1{b, -a, 0.0};
    const std::array<double, 3> v2{dd, -c, 0.0};
    const double n1 = std::hypot(v1[0], v1[1]);
    const double n2 = std::hypot(v2[0], v2[1]);
    v = n1 >= n2 ? v1 : v2;
  } else {
    // Cross products of row pairs of (A - lambda I); the null direction is
    // orthogonal to every row, so pick the most stable pair.
    std::array<std::array<double, 3>, 3> r{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        r[i][j] = static_cast<double>(map.entry(i, j)) - (i == j ? lambda : 0.0);
      }
    }
    auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
      return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                   a[0] * b[1] - a[1] * b[0]};
    };
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
      const auto c = cross(r[i], r[(i + 1) % 3]);
      const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
      if (norm > best) {
        best = norm;
        v = c;
      }
    }
  }
  double norm = 0.0;
  for (int i = 0; i < d; ++i) norm += v[i] * v[i];
  norm = std::sqrt(norm);
  for (int i = 0; i < d; ++i) v[i] /= norm;
  // Fix an orientation so the direction is deterministic.
  for (int i = 0; i < d; ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0) {
        for (int j = 0; j < d; ++j) v[j] = -v[j];
      }
      break;
    }
  }
  return v;
}

std::vector<long long> matrix_power_flat(const ToralAutomorphism& map, int exponent) {
  const int d = map.dim();
  const bool inv = exponent < 0;
  const int reps = std::abs(exponent);
  std::vector<BigInt> acc(static_cast<std::size_t>(d) * d, 0);
  for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i) * d + i] = 1;
  for (int r = 0; r < reps; ++r) {
    std::vector<BigInt> next(static_cast<std::size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        BigInt s = 0;
        for (int k = 0; k < d; ++k) {
          const long long e = inv ? map.inverse_entry(k, j) : map.entry(k, j);
          s += acc[static_cast<std::size_t>(i) * d + k] * e;
        }
        next[static_cast<std::size_t>(i) * d + j] = s;
      }
    }
    acc.swap(next);
  }
  std::vector<long long> flat;
  flat.reserve(acc.size());
  for (const auto& e : acc) flat.push_back(e.convert_to<long long>());
  return flat;
}

}  // namespace

namespace {

// cpp_int's string constructor honors octal/hex prefixes; decimal literals
// need leading zeros stripped first.
BigInt parse_decimal_bigint(const std::string& s) {
  std::string digits = s;
  bool negative = false;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    digits.erase(digits.begin());
  }
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("malformed integer '" + s + "'");
  }
  BigInt v(digits);
  return negative ? BigInt(-v) : v;
}

}  // namespace

BigRat parse_rational(const std::string& s) {
  std::string t;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  }
  if (t.empty()) throw ConfigError("empty rational literal");
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const BigInt num = parse_decimal_bigint(t.substr(0, slash));
    const BigInt den = parse_decimal_bigint(t.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
    return BigRat(num, den);
  }
  const auto dot = t.find('.');
  if (dot != std::string::npos) {
    const BigInt num = parse_decimal_bigint(t.substr(0, dot) + t.substr(dot + 1));
    const auto frac_digits = t.size() - dot - 1;
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    return BigRat(num, den);
  }
  return BigRat(parse_decimal_bigint(t));
}

std::string rational_to_string(const BigRat& x) {
  const BigInt num = numerator(x);
  const BigInt den = denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

TorusPoint parse_torus_point(const std::string& s) {
  std::string t;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  }
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
    throw ConfigError("point must look like (a,b[,c]), got '" + s + "'");
  }
  std::vector<BigRat> coords;
  std::stringstream ss(t.substr(1, t.size() - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) coords.push_back(parse_rational(tok));
  if (coords.size() != 2 && coords.size() != 3) {
    throw ConfigError("point must have 2 or 3 coordinates, got '" + s + "'");
  }
  return TorusPoint(std::move(coords));
}

TorusPoint::TorusPoint(std::vector<BigRat> coords) : coords_(std::move(coords)) {
  for (auto& c : coords_) c = rat_frac(c);
}

std::string TorusPoint::to_string() const {
  std::string out = "(";
  for (int i = 0; i < dim(); ++i) {
    if (i) out += ",";
    out += rational_to_string(coord(i));
  }
  out += ")";
  return out;
}

const char* bundle_label_name(BundleLabel label) {
  switch (label) {
    case BundleLabel::Stable: return "stable";
    case BundleLabel::Center: return "center";
    case BundleLabel::Unstable: return "unstable";
  }
  return "?";
}

ToralAutomorphism make_toral_automorphism(const std::vector<long long>& flat) {
  ToralAutomorphism map;
  int d = 0;
  if (flat.size() == 4) {
    d = 2;
  } else if (flat.size() == 9) {
    d = 3;
  } else {
    throw UnsupportedDimension("matrix must be 2x2 or 3x3 (flat length 4 or 9, got " +
                               std::to_string(flat.size()) + ")");
  }
  map.dim_ = d;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      map.m_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          flat[static_cast<std::size_t>(i) * d + j];
    }
  }
  const BigInt det = d == 2 ? det2(map.m_) : det3(map.m_);
  if (det != 1 && det != -1) {
    throw NotUnimodular("matrix determinant is " + det.str() + ", expected +-1");
  }
  map.det_sign_ = det == 1 ? 1 : -1;
  // Exact integer inverse via the adjugate; |det| = 1 keeps it integral.
  const long long s = map.det_sign_;
  auto& m = map.m_;
  auto& inv = map.minv_;
  if (d == 2) {
    inv[0][0] = s * m[1][1];
    inv[0][1] = -s * m[0][1];
    inv[1][0] = -s * m[1][0];
    inv[1][1] = s * m[0][0];
  } else {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
        const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        // adj = cofactor transpose: entry (j,i) cofactor goes to (i,j).
        inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            s * (m[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] *
                     m[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] -
                 m[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c1)] *
                     m[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c0)]);
      }
    }
  }
  return map;
}

ToralAutomorphism ToralAutomorphism::power(int exponent) const {
  return make_toral_automorphism(matrix_power_flat(*this, exponent));
}

std::string ToralAutomorphism::to_string() const {
  std::string out = "[";
  for (int i = 0; i < dim_; ++i) {
    if (i) out += "; ";
    for (int j = 0; j < dim_; ++j) {
      if (j) out += ",";
      out += std::to_string(entry(i, j));
    }
  }
  out += "]";
  return out;
}

Splitting compute_splitting(const ToralAutomorphism& map, Labeling labeling) {
  const int d = map.dim();
  const auto coeffs = char_poly(map);
  if (d == 2) {
    const long long tr = -coeffs[1];
    const long long det = coeffs[0];
    if (tr * tr - 4 * det <= 0) {
      throw ComplexSpectrum("characteristic polynomial has no two distinct real roots");
    }
  } else {
    if (!cubic_all_real_distinct(coeffs)) {
      throw ComplexSpectrum("characteristic polynomial has no three distinct real roots");
    }
  }
  auto roots = real_distinct_roots(coeffs);
  if (static_cast<int>(roots.size()) != d) {
    throw ComplexSpectrum("root isolation found " + std::to_string(roots.size()) +
                          " real roots, expected " + std::to_string(d));
  }
  std::sort(roots.begin(), roots.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });

  Splitting split;
  split.eigenvalues = roots;
  split.labels.assign(static_cast<std::size_t>(d), BundleLabel::Center);
  for (double r : roots) split.eigenvectors.push_back(eigenvector(map, r));

  if (labeling == Labeling::Strict) {
    int expanding = 0;
    for (double r : roots) {
      if (std::abs(r) > 1.0) ++expanding;
    }
    if (expanding == 0) throw NoUnstableDirection("no eigenvalue modulus exceeds 1");
    if (expanding > 1) {
      throw MultipleUnstable("more than one eigenvalue modulus exceeds 1 (dim E^u >= 2)");
    }
  }
  // Moduli ascend, so the rank labeling is positional; in strict mode the
  // checks above make the top eigenvalue the unique expanding one.
  split.labels[0] = BundleLabel::Stable;
  split.labels[static_cast<std::size_t>(d - 1)] = BundleLabel::Unstable;
  split.unstable_index = d - 1;
  split.unstable_rate = std::abs(roots[static_cast<std::size_t>(d - 1)]);
  split.log_unstable_rate = std::log(split.unstable_rate);
  if (split.unstable_rate <= 1.0) {
    throw NoUnstableDirection("designated unstable modulus does not exceed 1");
  }
  return split;
}

TorusPoint apply(const ToralAutomorphism& map, const TorusPoint& x, long long k) {
  const int d = map.dim();
  const bool inv = k < 0;
  long long reps = std::abs(k);
  std::vector<BigRat> cur(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) cur[static_cast<std::size_t>(i)] = x.coord(i);
  for (long long r = 0; r < reps; ++r) {
    std::vector<BigRat> next(static_cast<std::size_t>(d), BigRat(0));
    for (int i = 0; i < d; ++i) {
      BigRat acc(0);
      for (int j = 0; j < d; ++j) {
        const long long e = inv ? map.inverse_entry(i, j) : map.entry(i, j);
        if (e != 0) acc += BigRat(e) * cur[static_cast<std::size_t>(j)];
      }
      next[static_cast<std::size_t>(i)] = rat_frac(acc);
    }
    cur.swap(next);
  }
  return TorusPoint(std::move(cur));
}

System System::power(int m) const {
  System out;
  out.name = name + "^" + std::to_string(m);
  out.map = map.power(m);
  out.splitting = splitting;
  for (auto& ev : out.splitting.eigenvalues) ev = std::pow(ev, m);
  // Same eigenvectors; the scale exponent is an exact integer multiple so
  // iterate scales under f^m and f^{m k} agree bit-for-bit.
  out.splitting.unstable_rate = std::pow(splitting.unstable_rate, m);
  out.splitting.log_unstable_rate = static_cast<double>(m) * splitting.log_unstable_rate;
  return out;
}

double unstable_jacobian(const System& sys, const TorusPoint&) {
  return sys.rate();
}

System cat2_system() {
  System sys;
  sys.name = "cat2";
  sys.map = make_toral_automorphism({2, 1, 1, 1});
  sys.splitting = compute_splitting(sys.map);
  return sys;
}

System paper3_system(long long k0) {
  System sys;
  sys.name = "paper3:k0=" + std::to_string(k0);
  sys.map = make_toral_automorphism({0, 0, 1, 0, 1, -1, -1, -1, k0});
  sys.splitting = compute_splitting(sys.map);
  return sys;
}

namespace {

std::vector<std::string> split_options(const std::string& spec) {
  // Split on ':' outside brackets/parentheses.
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : spec) {
    if (ch == '[' || ch == '(') ++depth;
    if (ch == ']' || ch == ')') --depth;
    if (ch == ':' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<long long> parse_flat_matrix(const std::string& body) {
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
    throw ConfigError("matrix spec must be a bracketed integer list, got '" + body + "'");
  }
  std::vector<long long> flat;
  std::stringstream ss(body.substr(1, body.size() - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    flat.push_back(v);
  }
  return flat;
}

}  // namespace

System make_system(const std::string& spec) {
  const auto parts = split_options(spec);
  bool inverse = false;
  long long k0 = 5;
  std::vector<long long> flat;
  const std::string& head = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& opt = parts[i];
    if (opt == "inverse") {
      inverse = true;
    } else if (opt.rfind("k0=", 0) == 0) {
      k0 = std::stoll(opt.substr(3));
    } else if (head == "matrix" && !opt.empty() && opt.front() == '[') {
      flat = parse_flat_matrix(opt);
    } else {
      throw ConfigError("unknown system option '" + opt + "' in '" + spec + "'");
    }
  }

  ToralAutomorphism base;
  std::string name;
  if (head == "cat2") {
    base = make_toral_automorphism({2, 1, 1, 1});
    name = "cat2";
  } else if (head == "paper3") {
    if (k0 < 5) throw ConfigError("paper3 requires k0 >= 5, got " + std::to_string(k0));
    base = make_toral_automorphism({0, 0, 1, 0, 1, -1, -1, -1, k0});
    name = "paper3:k0=" + std::to_string(k0);
  } else if (head == "matrix") {
    if (flat.empty()) throw ConfigError("matrix spec missing the integer list: '" + spec + "'");
    base = make_toral_automorphism(flat);
    name = "matrix" + base.to_string();
  } else {
    throw ConfigError("unknown system '" + head + "'");
  }

  System sys;
  if (inverse) {
    // f^{-1} as a partially hyperbolic map: the matrix inverse with labels by
    // modulus rank, which swaps the roles of the stable and unstable bundles.
    sys.map = base.power(-1);
    sys.splitting = compute_splitting(sys.map, Labeling::Ranked);
    sys.name = name + ":inverse";
  } else {
    sys.map = base;
    sys.splitting = compute_splitting(sys.map);
    sys.name = name;
  }
  return sys;
}

}  // namespace leafdim
