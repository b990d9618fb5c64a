#include "leafdim/leaf.hpp"

#include <algorithm>
#include <cmath>

#include "leafdim/errors.hpp"

namespace leafdim {

namespace {

double wrap01(double x) { return x - std::floor(x); }

std::vector<double> point_doubles(const TorusPoint& p) {
  std::vector<double> out(static_cast<std::size_t>(p.dim()));
  for (int i = 0; i < p.dim(); ++i) out[static_cast<std::size_t>(i)] = p.coord_double(i);
  return out;
}

// Ambient position of the carrier point at parameter t (current scale).
std::vector<double> segment_point(const LeafSegment& seg, double t) {
  const double sc = seg.scale();
  std::vector<double> out(static_cast<std::size_t>(seg.dim));
  for (int i = 0; i < seg.dim; ++i) {
    out[static_cast<std::size_t>(i)] =
        wrap01(seg.base.coord_double(i) + t * sc * seg.direction[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

double torus_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(wrap01(a[i]) - wrap01(b[i]));
    d = std::min(d, 1.0 - d);
    acc += d * d;
  }
  return std::sqrt(acc);
}

LeafSegment leaf_ball(const System& sys, const TorusPoint& x, double delta) {
  if (!(delta > 0)) throw Error("leaf ball radius must be positive");
  LeafSegment seg;
  seg.base = x;
  seg.direction = sys.direction();
  seg.log_rate = sys.log_rate();
  seg.t_lo = -delta;
  seg.t_hi = delta;
  seg.level = 0;
  seg.dim = sys.dim();
  return seg;
}

LeafSegment iterate_segment(const System& sys, const LeafSegment& seg, long long n) {
  LeafSegment out = seg;
  if (n == 0) return out;
  out.base = apply(sys.map, seg.base, n);
  out.level = seg.level + n;
  return out;
}

LeafSegment subsegment_rebased(const System& sys, const LeafSegment& seg, double a, double b) {
  (void)sys;
  LeafSegment out = seg;
  const double sc = seg.scale();
  std::vector<BigRat> coords(static_cast<std::size_t>(seg.dim));
  for (int i = 0; i < seg.dim; ++i) {
    const double off = a * sc * seg.direction[static_cast<std::size_t>(i)];
    coords[static_cast<std::size_t>(i)] =
        rat_frac(seg.base.coord(i) + rat_from_double_exact(off));
  }
  out.base = TorusPoint(std::move(coords));
  out.t_lo = 0.0;
  out.t_hi = b - a;
  return out;
}

AmbientSet AmbientSet::torus() {
  AmbientSet s;
  s.kind = Kind::Torus;
  s.spec = "torus";
  return s;
}

AmbientSet AmbientSet::ball(TorusPoint center, double radius) {
  if (!(radius > 0)) throw ConfigError("ball radius must be positive");
  AmbientSet s;
  s.kind = Kind::Ball;
  s.center = std::move(center);
  s.radius = radius;
  s.spec = "ball:c=" + s.center.to_string() + ",r=" + std::to_string(radius);
  return s;
}

AmbientSet AmbientSet::finite_points(std::vector<TorusPoint> pts) {
  AmbientSet s;
  s.kind = Kind::Points;
  s.points = std::move(pts);
  s.spec = "points";
  return s;
}

AmbientSet AmbientSet::orbit(const System& sys, const TorusPoint& p, long long cap) {
  AmbientSet s;
  s.kind = Kind::Orbit;
  s.spec = "orbit:p=" + p.to_string();
  TorusPoint cur = p;
  for (long long i = 0; i < cap; ++i) {
    s.points.push_back(cur);
    cur = apply(sys.map, cur, 1);
    if (cur == p) return s;
  }
  throw ConfigError("orbit of " + p.to_string() + " did not close within " +
                    std::to_string(cap) + " steps");
}

AmbientSet parse_ambient_set(const System& sys, const std::string& spec) {
  if (spec == "torus") return AmbientSet::torus();
  auto expect_prefix = [&](const std::string& prefix) {
    return spec.rfind(prefix, 0) == 0;
  };
  if (expect_prefix("ball:")) {
    const std::string body = spec.substr(5);
    const auto cpos = body.find("c=");
    const auto rpos = body.find(",r=");
    if (cpos != 0 || rpos == std::string::npos) {
      throw ConfigError("ball spec must be ball:c=(..),r=.., got '" + spec + "'");
    }
    TorusPoint center = parse_torus_point(body.substr(2, rpos - 2));
    if (center.dim() != sys.dim()) {
      throw ConfigError("ball center dimension " + std::to_string(center.dim()) +
                        " does not match system dimension " + std::to_string(sys.dim()));
    }
    const double radius = std::stod(body.substr(rpos + 3));
    return AmbientSet::ball(std::move(center), radius);
  }
  if (expect_prefix("points:")) {
    std::string body = spec.substr(7);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      throw ConfigError("points spec must be points:[(..),(..)], got '" + spec + "'");
    }
    body = body.substr(1, body.size() - 2);
    std::vector<TorusPoint> pts;
    std::size_t pos = 0;
    while (pos < body.size()) {
      const auto open = body.find('(', pos);
      if (open == std::string::npos) break;
      const auto close = body.find(')', open);
      if (close == std::string::npos) {
        throw ConfigError("unbalanced parentheses in '" + spec + "'");
      }
      pts.push_back(parse_torus_point(body.substr(open, close - open + 1)));
      if (pts.back().dim() != sys.dim()) {
        throw ConfigError("point dimension mismatch in '" + spec + "'");
      }
      pos = close + 1;
    }
    if (pts.empty()) throw ConfigError("points spec lists no points: '" + spec + "'");
    return AmbientSet::finite_points(std::move(pts));
  }
  if (expect_prefix("orbit:")) {
    const std::string body = spec.substr(6);
    const auto ppos = body.find("p=");
    if (ppos != 0) throw ConfigError("orbit spec must be orbit:p=(..), got '" + spec + "'");
    std::string rest = body.substr(2);
    long long cap = 200000;
    const auto comma = rest.find("),cap=");
    if (comma != std::string::npos) {
      cap = std::stoll(rest.substr(comma + 6));
      rest = rest.substr(0, comma + 1);
    }
    TorusPoint p = parse_torus_point(rest);
    if (p.dim() != sys.dim()) throw ConfigError("orbit point dimension mismatch in '" + spec + "'");
    return AmbientSet::orbit(sys, p, cap);
  }
  throw ConfigError("unknown set spec '" + spec + "' (torus | ball:.. | points:.. | orbit:..)");
}

double LeafSubset::total_length() const {
  double acc = 0.0;
  const double sc = carrier.scale();
  for (const auto& [a, b] : intervals) acc += (b - a) * sc;
  return acc;
}

void LeafSubset::normalize() {
  std::sort(intervals.begin(), intervals.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : intervals) {
    if (iv.second < iv.first) continue;
    if (iv.second == iv.first) {
      points.push_back(iv.first);
      continue;
    }
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  intervals = std::move(merged);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<double> keep;
  for (double p : points) {
    bool inside = false;
    for (const auto& [a, b] : intervals) {
      if (p >= a && p <= b) {
        inside = true;
        break;
      }
    }
    if (!inside) keep.push_back(p);
  }
  points = std::move(keep);
}

LeafSubset LeafSubset::whole_segment(const LeafSegment& seg) {
  LeafSubset s;
  s.kind = Kind::Segments;
  s.carrier = seg;
  s.intervals.emplace_back(seg.t_lo, seg.t_hi);
  return s;
}

LeafSubset LeafSubset::from_intervals(const LeafSegment& carrier,
                                      std::vector<std::pair<double, double>> intervals) {
  LeafSubset s;
  s.kind = Kind::Segments;
  s.carrier = carrier;
  s.intervals = std::move(intervals);
  s.normalize();
  return s;
}

LeafSubset LeafSubset::from_points(const LeafSegment& carrier, std::vector<double> params) {
  LeafSubset s;
  s.kind = Kind::Points;
  s.carrier = carrier;
  s.points = std::move(params);
  s.normalize();
  return s;
}

LeafSubset LeafSubset::from_indicator(const LeafSegment& carrier,
                                      std::function<bool(double)> predicate,
                                      double resolution) {
  if (!(resolution > 0)) throw Error("indicator trace needs a positive resolution");
  const double sc = carrier.scale();
  const double step = resolution / std::max(sc, 1.0);
  const int steps =
      std::max(8, static_cast<int>(std::ceil((carrier.t_hi - carrier.t_lo) / step)));
  const double h = (carrier.t_hi - carrier.t_lo) / steps;
  auto refine = [&](double t_out, double t_in) {
    const double tol = h / 100.0;
    while (std::abs(t_in - t_out) > tol) {
      const double mid = 0.5 * (t_in + t_out);
      if (predicate(mid)) {
        t_in = mid;
      } else {
        t_out = mid;
      }
    }
    return 0.5 * (t_in + t_out);
  };

  std::vector<std::pair<double, double>> intervals;
  bool prev = predicate(carrier.t_lo);
  double open_at = prev ? carrier.t_lo : 0.0;
  double prev_t = carrier.t_lo;
  for (int i = 1; i <= steps; ++i) {
    const double t = carrier.t_lo + i * h;
    const bool cur = predicate(t);
    if (cur != prev) {
      if (cur) {
        open_at = refine(prev_t, t);
      } else {
        intervals.emplace_back(open_at, refine(t, prev_t));
      }
      prev = cur;
    }
    prev_t = t;
  }
  if (prev) intervals.emplace_back(open_at, carrier.t_hi);

  LeafSubset out = LeafSubset::from_intervals(carrier, std::move(intervals));
  out.kind = Kind::Indicator;
  out.indicator = std::move(predicate);
  out.resolution = resolution;
  return out;
}

namespace {

// Exact on-leaf test: a rational point q lies on the leaf line of a rational
// base iff q == base (mod 1). Any nonzero offset t*v with rational difference
// would force a rational ratio of eigenvector components, impossible for the
// irrational eigendirections handled here.
bool on_leaf_at_base(const LeafSegment& seg, const TorusPoint& q) {
  if (q.dim() != seg.base.dim()) return false;
  for (int i = 0; i < q.dim(); ++i) {
    if (rat_frac(q.coord(i) - seg.base.coord(i)) != 0) return false;
  }
  return true;
}

}  // namespace

TorusPoint random_rational_point(int dim, std::mt19937_64& rng) {
  const BigInt den = BigInt(1) << 32;
  std::vector<BigRat> coords(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const std::uint64_t num = rng() & 0xFFFFFFFFull;
    coords[static_cast<std::size_t>(i)] = BigRat(BigInt(num), den);
  }
  return TorusPoint(std::move(coords));
}

std::vector<TorusPoint> sample_base_points(const System& sys, const AmbientSet& set,
                                           int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TorusPoint> pts;
  switch (set.kind) {
    case AmbientSet::Kind::Torus: {
      pts.emplace_back(std::vector<BigRat>(static_cast<std::size_t>(sys.dim())));
      for (int i = 0; i < samples; ++i) pts.push_back(random_rational_point(sys.dim(), rng));
      break;
    }
    case AmbientSet::Kind::Ball: {
      pts.push_back(set.center);
      const auto center = point_doubles(set.center);
      int found = 0;
      for (int tries = 0; tries < 1000 * (samples + 1) && found < samples; ++tries) {
        TorusPoint cand = random_rational_point(sys.dim(), rng);
        if (torus_distance(point_doubles(cand), center) < set.radius) {
          pts.push_back(std::move(cand));
          ++found;
        }
      }
      break;
    }
    case AmbientSet::Kind::Points:
    case AmbientSet::Kind::Orbit: {
      for (const auto& p : set.points) {
        pts.push_back(p);
        if (static_cast<int>(pts.size()) > samples + 1) break;
      }
      break;
    }
  }
  return pts;
}

LeafSubset trace_subset(const System& sys, const AmbientSet& set, const LeafSegment& seg,
                        double resolution) {
  (void)sys;
  switch (set.kind) {
    case AmbientSet::Kind::Torus:
      return LeafSubset::whole_segment(seg);
    case AmbientSet::Kind::Points:
    case AmbientSet::Kind::Orbit: {
      std::vector<double> params;
      for (const auto& q : set.points) {
        if (on_leaf_at_base(seg, q) && seg.t_lo <= 0.0 && 0.0 <= seg.t_hi) {
          params.push_back(0.0);
        }
      }
      return LeafSubset::from_points(seg, std::move(params));
    }
    case AmbientSet::Kind::Ball:
      break;
  }

  // Ball trace: the membership indicator sampled along the segment and
  // refined by endpoint bisection.
  const auto center = point_doubles(set.center);
  const double radius = set.radius;
  auto inside = [seg, center, radius](double t) {
    return torus_distance(segment_point(seg, t), center) < radius;
  };
  double res = resolution;
  if (!(res > 0)) {
    res = std::min(set.radius / 50.0, (seg.t_hi - seg.t_lo) / 256.0);
  }
  return LeafSubset::from_indicator(seg, inside, res);
}

}  // namespace leafdim
