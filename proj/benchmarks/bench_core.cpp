#include <benchmark/benchmark.h>

#include "leafdim/covers.hpp"
#include "leafdim/hdim.hpp"
#include "leafdim/umetric.hpp"

using namespace leafdim;

namespace {

const System& cat() {
  static const System sys = make_system("cat2");
  return sys;
}

const System& p3() {
  static const System sys = make_system("paper3:k0=5");
  return sys;
}

TorusPoint sample_point(int dim) {
  std::vector<BigRat> c(static_cast<std::size_t>(dim));
  c[0] = BigRat(373, 1021);
  c[1] = BigRat(211, 509);
  if (dim == 3) c[2] = BigRat(97, 251);
  return TorusPoint(std::move(c));
}

void BM_Apply(benchmark::State& state) {
  const auto& sys = state.range(0) == 2 ? cat() : p3();
  const TorusPoint x = sample_point(sys.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply(sys.map, x, state.range(1)));
  }
}
BENCHMARK(BM_Apply)->Args({2, 25})->Args({3, 25})->Args({3, 60});

void BM_OrbitThinner(benchmark::State& state) {
  const auto& sys = state.range(0) == 2 ? cat() : p3();
  const GridCover cover{16, kDefaultInflation, sys.dim()};
  const auto seg = leaf_ball(sys, sample_point(sys.dim()), 1e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(n_orbit_thinner(sys, seg, cover));
  }
}
BENCHMARK(BM_OrbitThinner)->Arg(2)->Arg(3);

void BM_BowenCover(benchmark::State& state) {
  const auto& sys = cat();
  const GridCover cover{16, kDefaultInflation, 2};
  const auto ball = LeafSubset::whole_segment(leaf_ball(sys, sample_point(2), 0.1));
  const int n = static_cast<int>(state.range(0));
  long long count = 0;
  for (auto _ : state) {
    count = minimal_bowen_cover(sys, ball, cover, n).count;
    benchmark::DoNotOptimize(count);
  }
  state.counters["segments"] = static_cast<double>(count);
}
BENCHMARK(BM_BowenCover)->Arg(6)->Arg(10)->Arg(14);

void BM_ConditionalInformation(benchmark::State& state) {
  const auto& sys = state.range(0) == 2 ? cat() : p3();
  const TorusPoint x = sample_point(sys.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_information(sys, x, 16, 25));
  }
}
BENCHMARK(BM_ConditionalInformation)->Arg(2)->Arg(3);

void BM_CriticalExponent(benchmark::State& state) {
  const auto& sys = cat();
  const GridCover cover{16, kDefaultInflation, 2};
  const auto ball = LeafSubset::whole_segment(leaf_ball(sys, sample_point(2), 0.1));
  CriticalExponentParams params;
  params.budget.max_total_placements = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(critical_exponent(sys, ball, cover, params));
  }
}
BENCHMARK(BM_CriticalExponent)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
