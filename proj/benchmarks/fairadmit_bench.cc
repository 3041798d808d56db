// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "fairadmit/baselines.h"
#include "fairadmit/fit.h"
#include "fairadmit/search.h"

namespace fairadmit {
namespace {

Population MakePopulation(std::size_t n) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.seed = 17;
  cfg.score_names = {"x0", "x1", "x2"};
  cfg.lower.assign(3, 150.0);
  cfg.upper.assign(3, 850.0);
  AttributeConfig a;
  a.name = "g";
  a.prevalence = 0.4;
  a.designated = {{450, 480, 470}, {100, 100, 100}};
  a.other = {{530, 520, 510}, {100, 100, 100}};
  cfg.attributes = {a};
  cfg.outcome_intercept = 1.0;
  cfg.outcome_slope = 0.004;
  cfg.outcome_weights = {0.5, 0.3, 0.2};
  cfg.noise_std = 0.3;
  return GeneratePopulation(cfg);
}

const WeightVector kWeights({0.5, 0.3, 0.2});

void BM_CalibrateTopK(benchmark::State& state) {
  const Population pop = MakePopulation(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(CalibrateTopK(CoefficientsPolicy{kWeights, 0, {}}, pop, 0.3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CalibrateTopK)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_BonusBinarySearch(benchmark::State& state) {
  const Population pop = MakePopulation(static_cast<std::size_t>(state.range(0)));
  const double tau = std::get<CoefficientsPolicy>(
                         CalibrateTopK(CoefficientsPolicy{kWeights, 0, {}}, pop, 0.3))
                         .threshold;
  const std::vector<BonusTerm> terms{{"g", 30.0, Group::kDesignated}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(CalibrateBonusBinarySearch(kWeights, terms, pop, 0.3, tau));
  }
}
BENCHMARK(BM_BonusBinarySearch)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_SearchBonus(benchmark::State& state) {
  const Population pop = MakePopulation(10000);
  const OutcomeModel m{1.0, 0.004, kWeights};
  const BonusSearchConfig cfg{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(SearchBonus(pop, m, 0.3, {{"g", 10.0}}, "g", cfg));
  }
}
BENCHMARK(BM_SearchBonus)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SearchCoefficients(benchmark::State& state) {
  const Population pop = MakePopulation(10000);
  const OutcomeModel m{1.0, 0.004, kWeights};
  const RotationPlan plan = RotationPlan::AllPlanes(3, 0.05, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SearchCoefficients(pop, m, 0.3, {{"g", 10.0}}, plan));
  }
}
BENCHMARK(BM_SearchCoefficients)->Unit(benchmark::kMillisecond);

void BM_FairRerank(benchmark::State& state) {
  const Population pop = MakePopulation(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(FairRerank(pop, kWeights, 0.3, "g", {0.1, 0.4}));
  }
}
BENCHMARK(BM_FairRerank)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_MedianRepair(benchmark::State& state) {
  const Population pop = MakePopulation(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(MedianRepair(pop, "g"));
}
BENCHMARK(BM_MedianRepair)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

}  // namespace
}  // namespace fairadmit

BENCHMARK_MAIN();
