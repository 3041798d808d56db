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

#ifndef FAIRADMIT_SEARCH_H_
#define FAIRADMIT_SEARCH_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fairadmit/fit.h"
#include "fairadmit/metrics.h"
#include "fairadmit/model.h"
#include "fairadmit/policies.h"

namespace fairadmit {

// Plane rotation of the weight vector inside coordinates (i, j). A positive
// sign moves weight from i towards j.
struct RotationDirection {
  std::size_t i = 0;
  std::size_t j = 1;
  int sign = +1;

  std::string Label() const;
};

struct RotationPlan {
  std::vector<RotationDirection> directions;
  double step_angle = 0.05;
  std::size_t steps = 10;

  // Every coordinate plane of a d-dimensional score space, both orientations.
  static RotationPlan AllPlanes(std::size_t d, double step_angle,
                                std::size_t steps);

  void Validate(std::size_t d) const;
};

// Rotates `w` by `angle` in the plane of `dir`, clamps negative components
// to zero and renormalizes to unit L1 norm.
WeightVector Rotate(const WeightVector& w, const RotationDirection& dir,
                    double angle);

// One evaluated point of a search, in evaluation order.
struct FrontierPoint {
  std::string label;
  double parameter = 0.0;
  Policy policy;
  EvalReport report;
};

struct SearchResult {
  Policy policy;
  EvalReport report;
  std::vector<FrontierPoint> frontier;
  std::vector<std::string> notes;
};

// Rotation search starting at the model weights. Every step is recalibrated;
// the first evaluation with the highest objective wins.
SearchResult SearchCoefficients(const Population& pop,
                                const OutcomeModel& model, double theta,
                                const LambdaMap& lambda,
                                const RotationPlan& plan);

struct BonusRange {
  // h(1 - theta) - g(1 - theta), clamped at zero.
  double value = 0.0;
  // Group that is disadvantaged under the calibrated Coefficients policy.
  Group favored = Group::kDesignated;
  bool swapped = false;
};

BonusRange BDmd(const Population& pop, const WeightVector& w, double theta,
                const std::string& attr);

struct BonusSearchConfig {
  std::size_t granularity = 100;

  void Validate() const;
};

// Grid search over b in {0, e, ..., b_DmD}, e = b_DmD / granularity, with
// weights fixed to the model weights. Thresholds come from the binary-search
// calibrator seeded with the previous grid point's threshold.
SearchResult SearchBonus(const Population& pop, const OutcomeModel& model,
                         double theta, const LambdaMap& lambda,
                         const std::string& attr,
                         const BonusSearchConfig& cfg);

// Quota policy admitting exactly the candidates of a calibrated
// single-attribute Bonus policy.
QuotaPolicy BonusToQuota(const BonusPolicy& bonus, const Population& pop,
                         double theta);

// Smallest bonus (over score-difference breakpoints) whose calibrated policy
// admits `designated_count` members of the designated group. The bonus goes
// to whichever side must gain seats relative to b = 0. Throws kUnreachable
// with the nearest achievable counts.
BonusPolicy MatchBonusToCount(const Population& pop, const WeightVector& w,
                              double theta, const std::string& attr,
                              std::size_t designated_count);

BonusPolicy QuotaToBonus(const QuotaPolicy& quota, const Population& pop,
                         double theta);

// Calibrated Bonus policy with the smallest |DmD| reachable by a bonus for
// the disadvantaged group; the smallest bonus wins ties.
BonusPolicy MinDisparityBonus(const Population& pop, const WeightVector& w,
                              double theta, const std::string& attr);

struct GreedyConfig {
  double increment = 1.0;
  std::size_t max_steps = 1000;

  void Validate() const;
};

// Incremental multi-attribute bonus search over the attributes named in
// `lambda`. Each step tries increment on every attribute and keeps the best
// one if it strictly improves the objective.
SearchResult SearchBonusMulti(const Population& pop, const OutcomeModel& model,
                              double theta, const LambdaMap& lambda,
                              const GreedyConfig& cfg);

}  // namespace fairadmit

#endif  // FAIRADMIT_SEARCH_H_
