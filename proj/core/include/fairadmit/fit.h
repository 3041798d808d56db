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

#ifndef FAIRADMIT_FIT_H_
#define FAIRADMIT_FIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairadmit/model.h"
#include "fairadmit/policies.h"

namespace fairadmit {

// Linear expected performance m(x) = intercept + slope * (weights . x).
struct OutcomeModel {
  double intercept = 0.0;
  double slope = 0.0;
  WeightVector weights = WeightVector::Uniform(1);

  double Predict(std::span<const double> x) const {
    return intercept + slope * Dot(weights.values(), x);
  }

  friend bool operator==(const OutcomeModel&, const OutcomeModel&) = default;
};

struct FitResult {
  OutcomeModel model;
  // Unprojected least-squares slopes, one per score dimension.
  std::vector<double> raw_slopes;
  // One entry per slope clipped to zero by the non-negativity projection.
  std::vector<std::string> warnings;
};

// Ordinary least squares of the observed outcomes on the scores, followed by
// the projection slopes -> relu(slopes) and the split into slope * weights
// with |weights|_1 = 1.
FitResult FitOutcomeModel(const Population& pop);

std::string SerializeModel(const OutcomeModel& model,
                           const std::vector<std::string>& score_names);
OutcomeModel ParseModel(const std::string& text);

struct GroupScoreParams {
  std::vector<double> mean;
  std::vector<double> stddev;
};

struct AttributeConfig {
  std::string name;
  // Probability of belonging to the designated group.
  double prevalence = 0.5;
  GroupScoreParams designated;
  GroupScoreParams other;
};

// Synthetic population: attributes are independent Bernoulli draws; each
// score is a normal truncated to [lower, upper] whose mean and stddev are
// the averages of the member groups' parameters over all attributes; the
// outcome is intercept + slope * (weights . x) + N(0, noise_std^2).
struct GeneratorConfig {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> score_names;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<AttributeConfig> attributes;
  double outcome_intercept = 0.0;
  double outcome_slope = 1.0;
  std::vector<double> outcome_weights;
  double noise_std = 0.0;

  // Throws kInvalidArgument naming the offending field.
  void Validate() const;
};

GeneratorConfig ParseGeneratorConfig(const std::string& text);
std::string SerializeGeneratorConfig(const GeneratorConfig& cfg);

Population GeneratePopulation(const GeneratorConfig& cfg);

// Copy of `pop` where only admitted candidates keep their outcome.
Population MaskOutcomes(const Population& pop, const Selection& admitted);

}  // namespace fairadmit

#endif  // FAIRADMIT_FIT_H_
