#include <benchmark/benchmark.h>

#include <vector>

#include "hodge/fixtures.hpp"
#include "hodge/locus.hpp"
#include "hodge/rng.hpp"

namespace {

void BM_WeightFiltration(benchmark::State& state) {
  hodge::Rng rng(7);
  std::vector<hodge::QMat> mats;
  for (int i = 0; i < 16; ++i) {
    mats.push_back(rng.nilpotent(static_cast<int>(state.range(0))));
  }
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hodge::weight_filtration(mats[k % mats.size()]));
    ++k;
  }
}
BENCHMARK(BM_WeightFiltration)->Arg(4)->Arg(6)->Arg(8);

void BM_LimitingBigrading(benchmark::State& state) {
  hodge::NilpotentOrbit orbit = hodge::fixture_orbit("sym4_elliptic");
  for (auto _ : state) {
    hodge::LimitingMhs lim = hodge::limiting_mhs(orbit);
    benchmark::DoNotOptimize(hodge::deligne_bigrading(lim.mhs));
  }
}
BENCHMARK(BM_LimitingBigrading);

void BM_EnumerateClasses(benchmark::State& state) {
  hodge::NilpotentOrbit orbit = hodge::fixture_orbit("end_elliptic");
  hodge::GVec z{hodge::Gauss(hodge::Rat(0), hodge::Rat(2))};
  hodge::Rat K(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hodge::enumerate_classes(orbit, z, K));
  }
}
BENCHMARK(BM_EnumerateClasses)->Arg(1)->Arg(4)->Arg(9);

void BM_OrbitEvaluation(benchmark::State& state) {
  hodge::NilpotentOrbit orbit = hodge::fixture_orbit("box_e_dual");
  hodge::GVec z{hodge::Gauss(hodge::Rat(1, 3), hodge::Rat(2)),
                hodge::Gauss(hodge::Rat(-1, 2), hodge::Rat(3))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hodge::evaluate_orbit(orbit, z));
  }
}
BENCHMARK(BM_OrbitEvaluation);

}  // namespace

BENCHMARK_MAIN();
