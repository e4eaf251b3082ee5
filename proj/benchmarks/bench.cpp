// Microbenchmarks of the hot paths: angular table construction, the beam
// overlap quadrature, truncated-state construction and evaluation, and the
// two Monte Carlo sampling paths (per-attempt loop vs one-shot aggregate).
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dsq/angular.hpp"
#include "dsq/constants.hpp"
#include "dsq/detection.hpp"
#include "dsq/ensemble.hpp"
#include "dsq/fock.hpp"
#include "dsq/monte_carlo.hpp"

namespace {

using dsq::constants::two_pi;

dsq::HyperfineLevels rb85_levels() {
  return {dsq::HalfInt::whole(3), dsq::HalfInt::whole(2),
          dsq::HalfInt::whole(3)};
}

dsq::IsotopeSpec iso85() {
  dsq::IsotopeSpec iso;
  iso.id = dsq::Iso::rb85;
  iso.levels = rb85_levels();
  iso.ground_splitting = two_pi * 3.035732439e9;
  iso.d_ca = 2.537e-29;
  iso.d_cb = 2.537e-29;
  iso.n_atoms = 1e8;
  return iso;
}

dsq::BeamGeometry geometry() {
  dsq::BeamGeometry geom;
  geom.write.direction = {0, 1, 0};
  geom.write.waist = 4e-4;
  geom.signal.direction = {0, 1, 0};
  geom.signal.waist = 1.5e-4;
  geom.wavenumber_w = two_pi / 7.9498e-7;
  geom.wavenumber_s = two_pi / 7.9498e-7;
  geom.cloud_sigma = {1e-4, 1e-4, 1e-4};
  return geom;
}

dsq::InteractionParams balanced_params() {
  return dsq::InteractionParams::make(0.1 / std::sqrt(2.0),
                                      0.1 / std::sqrt(2.0));
}

dsq::EfficiencyBudget budget() {
  dsq::EfficiencyBudget b;
  b.eps_s_85 = b.eps_s_87 = 0.4;
  b.eps_r_85 = b.eps_r_87 = 0.8;
  b.eps_i_85 = b.eps_i_87 = 0.5;
  return b;
}

void BM_CouplingTable(benchmark::State& state) {
  const dsq::HyperfineLevels levels = rb85_levels();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsq::make_coupling_table(levels));
  }
}
BENCHMARK(BM_CouplingTable);

void BM_ClebschGordan(benchmark::State& state) {
  const dsq::HalfInt three = dsq::HalfInt::whole(3);
  const dsq::HalfInt one = dsq::HalfInt::whole(1);
  const dsq::HalfInt m = dsq::HalfInt::whole(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dsq::clebsch_gordan(three, one, three, m, dsq::HalfInt{}, m));
  }
}
BENCHMARK(BM_ClebschGordan);

void BM_OverlapQuadrature(benchmark::State& state) {
  const dsq::IsotopeSpec iso = iso85();
  const dsq::BeamGeometry geom = geometry();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsq::overlap_A(iso, geom));
  }
}
BENCHMARK(BM_OverlapQuadrature)->Unit(benchmark::kMillisecond);

void BM_BuildState(benchmark::State& state) {
  const dsq::InteractionParams params = balanced_params();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsq::build_entangled_state(params, n_max, 1e-10));
  }
}
BENCHMARK(BM_BuildState)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ExactRate(benchmark::State& state) {
  const dsq::InteractionParams params = balanced_params();
  const dsq::TruncatedFockState psi =
      dsq::build_entangled_state(params, 6, 1e-10);
  const dsq::EfficiencyBudget b = budget();
  const dsq::FringeModel fringe{0.86, 0.0};
  double phi = 0;
  for (auto _ : state) {
    phi += 0.1;
    benchmark::DoNotOptimize(
        dsq::coincidence_rate_exact(psi, b, fringe, 0.0, phi));
  }
}
BENCHMARK(BM_ExactRate)->Unit(benchmark::kMillisecond);

void BM_PerturbativeRate(benchmark::State& state) {
  const dsq::InteractionParams params = balanced_params();
  const dsq::EfficiencyBudget b = budget();
  const dsq::FringeModel fringe{0.86, 0.0};
  double phi = 0;
  for (auto _ : state) {
    phi += 0.1;
    benchmark::DoNotOptimize(
        dsq::coincidence_rate_perturbative(params, b, fringe, 0.0, phi));
  }
}
BENCHMARK(BM_PerturbativeRate);

// Per-attempt sampling path, forced by nonzero phase jitter.
void BM_TrialsPerAttempt(benchmark::State& state) {
  const dsq::InteractionParams params = balanced_params();
  const dsq::EfficiencyBudget b = budget();
  const dsq::PhaseNoise noise{0.05, 0.05};
  const dsq::FringeModel fringe{0.86, 0.0};
  const dsq::BackgroundModel bg{};
  dsq::TrialConfig trial;
  trial.n_trials = 100000;
  const std::vector<dsq::SettingPair> settings = {{0.0, 0.25}};
  for (auto _ : state) {
    ++trial.seed;
    benchmark::DoNotOptimize(
        dsq::run_trials(trial, params, b, noise, fringe, bg, settings));
  }
  state.SetItemsProcessed(state.iterations() * trial.n_trials);
}
BENCHMARK(BM_TrialsPerAttempt)->Unit(benchmark::kMillisecond);

// Aggregate path: identical attempts collapse into one multinomial draw.
void BM_TrialsAggregate(benchmark::State& state) {
  const dsq::InteractionParams params = balanced_params();
  const dsq::EfficiencyBudget b = budget();
  const dsq::PhaseNoise noise{};
  const dsq::FringeModel fringe{0.86, 0.0};
  const dsq::BackgroundModel bg{};
  dsq::TrialConfig trial;
  trial.n_trials = 10000000;
  const std::vector<dsq::SettingPair> settings = {{0.0, 0.25}};
  for (auto _ : state) {
    ++trial.seed;
    benchmark::DoNotOptimize(
        dsq::run_trials(trial, params, b, noise, fringe, bg, settings));
  }
  state.SetItemsProcessed(state.iterations() * trial.n_trials);
}
BENCHMARK(BM_TrialsAggregate);

void BM_FringeFit(benchmark::State& state) {
  std::vector<dsq::FringeSample> samples;
  for (int k = 0; k < 24; ++k) {
    dsq::FringeSample s;
    s.phi_i = two_pi * k / 24;
    s.value = 100.0 * (1 + 0.86 * std::cos(s.phi_i));
    s.weight = 1.0 / std::max(s.value, 1.0);
    samples.push_back(s);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(dsq::fit_fringe(samples));
  }
}
BENCHMARK(BM_FringeFit);

}  // namespace

BENCHMARK_MAIN();
