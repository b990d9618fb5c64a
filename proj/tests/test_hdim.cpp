#include <doctest.h>

#include <cmath>
#include <random>

#include "leafdim/hdim.hpp"
#include "leafdim/utop.hpp"
#include "oracles.hpp"

using namespace leafdim;

namespace {

const GridCover kCover16{16, 1.125, 2};

LeafSubset cat2_ball_subset(double delta = 0.1) {
  const auto sys = cat2_system();
  return LeafSubset::whole_segment(
      leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 7)}), delta));
}

}  // namespace

TEST_CASE("weights are exponential in the orbit-thinner count") {
  const auto sys = cat2_system();
  const auto seg = leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 16), BigRat(1, 16)}),
                             0.004);
  CHECK(weight(sys, seg, kCover16, 0.0) == doctest::Approx(1.0));

  auto big = seg;
  big.t_lo = -2 * kCover16.side();
  big.t_hi = 2 * kCover16.side();
  CHECK(weight(sys, big, kCover16, 0.7) == doctest::Approx(1.0));  // n = 0

  const double lambda = 0.8;
  const auto n_s = n_orbit_thinner(sys, seg, kCover16);
  REQUIRE(n_s.n >= 1);
  const double w = weight(sys, seg, kCover16, lambda);
  const double w_img = weight(sys, iterate_segment(sys, seg, 1), kCover16, lambda);
  CHECK(w_img == doctest::Approx(std::exp(lambda) * w).epsilon(1e-12));
}

TEST_CASE("outer measure on a segment at lambda = 0 is the cheapest count") {
  const auto sys = cat2_system();
  const auto subset = cat2_ball_subset();
  const int scale_n = 4;
  const auto m = outer_measure_approx(sys, subset, kCover16, 0.0, scale_n, 5);
  long long best = std::numeric_limits<long long>::max();
  for (int n = scale_n + 1; n <= scale_n + 5; ++n) {
    best = std::min(best, minimal_bowen_cover(sys, subset, kCover16, n).count);
  }
  CHECK(m.value == doctest::Approx(static_cast<double>(best)));
  CHECK(m.cover.covers(subset));
  CHECK_FALSE(m.capped);
}

TEST_CASE("outer measure of a point is the capped degenerate weight") {
  const auto sys = cat2_system();
  const auto seg = leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 7)}), 0.1);
  const auto pt = LeafSubset::from_points(seg, {0.01});
  const auto m = outer_measure_approx(sys, pt, kCover16, 0.5, 4);
  CHECK(m.value == doctest::Approx(std::exp(-0.5 * kDefaultNMax)));
  CHECK(m.value <= 1e-10);
  CHECK(m.capped);
}

TEST_CASE("outer measure trends around the critical exponent") {
  const auto sys = cat2_system();
  const auto subset = cat2_ball_subset();
  const double h = oracle::kCat2LogLambdaU;
  const auto value = [&](double lambda, int scale_n) {
    return outer_measure_approx(sys, subset, kCover16, lambda, scale_n, 3).value;
  };
  // Above critical: decreasing by a factor >= 2 across the window; below:
  // increasing by >= 2.
  CHECK(value(h + 0.15, 10) <= 0.5 * value(h + 0.15, 2));
  CHECK(value(h - 0.15, 10) >= 2.0 * value(h - 0.15, 2));
  // Near critical the value stays within a bounded band over the window.
  const double v_lo = value(h, 2), v_hi = value(h, 10);
  CHECK(v_hi / v_lo < 10.0);
  CHECK(v_hi / v_lo > 0.1);
}

TEST_CASE("outer measure is subadditive on disjoint unions") {
  const auto sys = cat2_system();
  const auto seg = leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(2, 7), BigRat(3, 11)}),
                             0.1);
  std::mt19937_64 rng(20200828);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double lambda = 0.6;
  for (int i = 0; i < 200; ++i) {
    const double a1 = -0.1 + 0.07 * unif(rng);
    const double b1 = a1 + 0.02 + 0.05 * unif(rng);
    const double a2 = b1 + 0.005 + 0.03 * unif(rng);
    const double b2 = std::min(0.1, a2 + 0.02 + 0.05 * unif(rng));
    const auto x1 = LeafSubset::from_intervals(seg, {{a1, b1}});
    const auto x2 = LeafSubset::from_intervals(seg, {{a2, b2}});
    const auto both = LeafSubset::from_intervals(seg, {{a1, b1}, {a2, b2}});
    const double mu = outer_measure_approx(sys, both, kCover16, lambda, 3).value;
    const double m1 = outer_measure_approx(sys, x1, kCover16, lambda, 3).value;
    const double m2 = outer_measure_approx(sys, x2, kCover16, lambda, 3).value;
    CHECK(mu <= m1 + m2 + 1e-9);
  }
}

TEST_CASE("critical exponent: points, cat2, paper3") {
  const auto sys = cat2_system();
  const auto seg = leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 7)}), 0.1);

  const auto pts = LeafSubset::from_points(seg, {0.0, 0.05});
  const auto ce_pts = critical_exponent(sys, pts, kCover16);
  CHECK(ce_pts.lambda_star <= 0.01);
  CHECK(ce_pts.status == TrendStatus::Ok);

  const auto ce = critical_exponent(sys, cat2_ball_subset(), kCover16);
  CHECK(ce.status == TrendStatus::Ok);
  CHECK(std::abs(ce.lambda_star - oracle::kCat2LogLambdaU) <= 0.03);
  CHECK(ce.bracket.first <= ce.lambda_star);
  CHECK(ce.bracket.second >= ce.lambda_star);

  const auto p3 = paper3_system(5);
  const GridCover cover8{8, 1.125, 3};
  const auto ball3 = LeafSubset::whole_segment(
      leaf_ball(p3, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 5), BigRat(0)}), 0.1));
  const auto ce3 = critical_exponent(p3, ball3, cover8);
  CHECK(ce3.status == TrendStatus::Ok);
  CHECK(std::abs(ce3.lambda_star - oracle::kPaper3LogLambdaU) <= 0.05);
}

TEST_CASE("critical exponent respects the structural rules") {
  const auto sys = cat2_system();
  const auto seg = leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 7)}),
                             0.02);
  CriticalExponentParams cp;
  cp.delta_levels = 2;

  const auto K = LeafSubset::whole_segment(seg);
  const double lam_K = critical_exponent(sys, K, kCover16, cp).lambda_star;

  SUBCASE("invariance under f") {
    const auto fK = LeafSubset::whole_segment(iterate_segment(sys, seg, 1));
    const double lam_fK = critical_exponent(sys, fK, kCover16, cp).lambda_star;
    CHECK(std::abs(lam_K - lam_fK) <= 0.05);
  }
  SUBCASE("unions take the max") {
    auto with_points = K;
    with_points.points = {0.05, 0.08};
    with_points.normalize();
    const double lam_union = critical_exponent(sys, with_points, kCover16, cp).lambda_star;
    CHECK(std::abs(lam_union - lam_K) <= 0.05);
  }
  SUBCASE("monotone under inclusion") {
    auto sub = seg;
    sub.t_lo *= 0.4;
    sub.t_hi *= 0.5;
    const double lam_sub =
        critical_exponent(sys, LeafSubset::whole_segment(sub), kCover16, cp).lambda_star;
    CHECK(lam_sub <= lam_K + 0.05);
  }
  SUBCASE("power rule") {
    const auto sys2 = sys.power(2);
    const auto K2 = LeafSubset::whole_segment(leaf_ball(sys2, seg.base, 0.02));
    const GridCover cover8{8, 1.125, 2};
    const double lam2 = critical_exponent(sys2, K2, cover8, cp).lambda_star;
    const double lam1 = critical_exponent(sys, LeafSubset::whole_segment(
                                                   leaf_ball(sys, seg.base, 0.02)),
                                          cover8, cp)
                            .lambda_star;
    CHECK(std::abs(lam2 - 2.0 * lam1) <= 0.05 * 2.0 * lam1);
  }
}

TEST_CASE("compact upper bound: exponent never exceeds cover entropy") {
  std::mt19937_64 rng(31);
  const auto sys = cat2_system();
  CriticalExponentParams cp;
  cp.delta_levels = 2;
  for (int i = 0; i < 10; ++i) {
    std::uniform_real_distribution<double> unif(0.02, 0.1);
    const auto seg = leaf_ball(sys, random_rational_point(2, rng), unif(rng));
    const auto K = LeafSubset::whole_segment(seg);
    const auto growth = entropy_of_compact(sys, K, {8, 16}, 2, 14, SweepBudget{400000});
    double lam = 0.0;
    for (int mesh : {8, 16}) {
      const GridCover cover{mesh, 1.125, 2};
      lam = std::max(lam, critical_exponent(sys, K, cover, cp).lambda_star);
    }
    CHECK(lam <= growth.value + 0.05);
  }
}

TEST_CASE("h_unstable_H full estimates") {
  HdimParams params;
  params.sample_points = 1;
  params.exponent.budget.max_total_placements = 800000;

  const auto sys = cat2_system();
  const auto full = h_unstable_H(sys, AmbientSet::torus(), params);
  CHECK(full.status == TrendStatus::Ok);
  CHECK(full.value == doctest::Approx(oracle::kCat2LogLambdaU).epsilon(0.05));

  const auto orbit = h_unstable_H(
      sys, AmbientSet::orbit(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 2), BigRat(1, 2)})),
      params);
  CHECK(orbit.value <= 0.05);

  const auto ball = h_unstable_H(
      sys, AmbientSet::ball(TorusPoint(std::vector<BigRat>{BigRat(3, 10), BigRat(2, 5)}), 0.25),
      params);
  CHECK(std::abs(ball.value - full.value) <= 0.05 * full.value);
}
