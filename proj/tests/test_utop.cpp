#include <doctest.h>

#include <cmath>

#include "leafdim/utop.hpp"
#include "oracles.hpp"

using namespace leafdim;

namespace {

UtopParams quick_params() {
  UtopParams p;
  p.deltas = {0.1, 0.05};
  p.meshes = {8, 16, 32};
  p.sample_points = 1;
  p.budget.max_total_placements = 400000;
  return p;
}

}  // namespace

TEST_CASE("point sets have zero entropy exactly") {
  const auto sys = cat2_system();
  const auto seg = leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 7)}), 0.1);
  const auto pts = LeafSubset::from_points(seg, {-0.05, 0.0, 0.03});
  const auto est = entropy_of_compact(sys, pts, {8, 16}, 2, 12);
  CHECK(est.value == 0.0);
  for (const auto& s : est.series) CHECK(s.slope == 0.0);
}

TEST_CASE("leaf-ball entropy matches the eigenvalue oracle") {
  const auto sys = cat2_system();
  const auto ball = LeafSubset::whole_segment(
      leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(0), BigRat(0)}), 0.1));
  const auto est = entropy_of_compact(sys, ball, {8, 16, 32}, 2, 16, SweepBudget{400000});
  CHECK(est.value == doctest::Approx(oracle::kCat2LogLambdaU).epsilon(0.03));

  const auto p3 = paper3_system(5);
  const auto ball3 = LeafSubset::whole_segment(
      leaf_ball(p3, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 5), BigRat(0)}), 0.1));
  const auto est3 = entropy_of_compact(p3, ball3, {8, 16, 32}, 2, 16, SweepBudget{400000});
  CHECK(est3.value == doctest::Approx(oracle::kPaper3LogLambdaU).epsilon(0.05));
}

TEST_CASE("slopes are stable across meshes and within the analytic band") {
  // Small delta makes deep levels affordable; the tail slope of every series
  // must sit inside [log rate - 0.1, log rate + 0.05].
  const auto sys = cat2_system();
  const auto ball = LeafSubset::whole_segment(
      leaf_ball(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 7)}), 0.002));
  const auto est = entropy_of_compact(sys, ball, {8, 16}, 10, 20, SweepBudget{12000000});
  REQUIRE(est.series.size() == 2);
  for (const auto& s : est.series) {
    CHECK(s.slope >= oracle::kCat2LogLambdaU - 0.1);
    CHECK(s.slope <= oracle::kCat2LogLambdaU + 0.05);
  }
  // Mesh refinement cannot lose entropy beyond fit noise.
  CHECK(est.series[1].slope >= est.series[0].slope - 0.02);

  const auto p3 = paper3_system(5);
  const auto ball3 = LeafSubset::whole_segment(
      leaf_ball(p3, TorusPoint(std::vector<BigRat>{BigRat(1, 3), BigRat(1, 5), BigRat(0)}), 0.002));
  const auto est3 = entropy_of_compact(p3, ball3, {8, 16}, 6, 12, SweepBudget{12000000});
  for (const auto& s : est3.series) {
    CHECK(s.slope >= oracle::kPaper3LogLambdaU - 0.1);
    CHECK(s.slope <= oracle::kPaper3LogLambdaU + 0.05);
  }
}

TEST_CASE("unstable topological entropy at full scale") {
  const auto est = unstable_topological_entropy(cat2_system(), quick_params());
  CHECK(est.value == doctest::Approx(oracle::kCat2LogLambdaU).epsilon(0.03));
  CHECK_FALSE(est.non_stabilized);
  // Linear systems are delta-independent.
  REQUIRE(est.delta_values.size() == 2);
  CHECK(est.delta_values[0].second ==
        doctest::Approx(est.delta_values[1].second).epsilon(0.03));
}

TEST_CASE("subset-style entropy: torus, orbits, balls") {
  const auto sys = cat2_system();
  auto params = quick_params();

  const auto torus = entropy_of_subset_cover_style(sys, AmbientSet::torus(), params);
  CHECK(torus.value == doctest::Approx(oracle::kCat2LogLambdaU).epsilon(0.03));

  const auto orbit_set =
      AmbientSet::orbit(sys, TorusPoint(std::vector<BigRat>{BigRat(1, 2), BigRat(1, 2)}));
  const auto orbit = entropy_of_subset_cover_style(sys, orbit_set, params);
  CHECK(orbit.value == 0.0);

  const auto ball_set = AmbientSet::ball(
      TorusPoint(std::vector<BigRat>{BigRat(3, 10), BigRat(2, 5)}), 0.25);
  const auto ball = entropy_of_subset_cover_style(sys, ball_set, params);
  CHECK(ball.value == doctest::Approx(oracle::kCat2LogLambdaU).epsilon(0.05));
}

TEST_CASE("inverse splitting reproduces the asymmetry relation") {
  auto params = quick_params();
  const auto est_f = unstable_topological_entropy(paper3_system(5), params);
  const auto est_inv = unstable_topological_entropy(make_system("paper3:k0=5:inverse"), params);
  CHECK(est_inv.value == doctest::Approx(oracle::kPaper3MinusLogLambdaS).epsilon(0.05));
  CHECK(est_inv.value < est_f.value);
  CHECK(std::abs(est_inv.value - (est_f.value + oracle::kPaper3LogLambdaC)) <= 0.08);
}
