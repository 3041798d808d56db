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

#ifndef FAIRADMIT_POLICIES_H_
#define FAIRADMIT_POLICIES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairadmit/model.h"

namespace fairadmit {

// Non-negative score weights with unit L1 norm.
class WeightVector {
 public:
  static constexpr double kNormTolerance = 1e-9;

  // Throws kInvalidArgument unless `w` is non-negative with |w|_1 = 1.
  explicit WeightVector(std::vector<double> w);

  // Divides non-negative `raw` by its L1 norm.
  static WeightVector Normalized(std::vector<double> raw);
  static WeightVector Uniform(std::size_t d);

  std::span<const double> values() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

enum class Group { kDesignated, kOther };

const char* GroupName(Group g);

// Additive bonus for the `favored` side of one attribute.
struct BonusTerm {
  std::string attribute;
  double amount = 0.0;
  Group favored = Group::kDesignated;

  friend bool operator==(const BonusTerm&, const BonusTerm&) = default;
};

// `capacity`, when set, marks a calibrated policy: admission takes the first
// `capacity` candidates at or above the threshold in (score desc, id asc)
// order, so ties at the threshold cannot push the count past k.
struct CoefficientsPolicy {
  WeightVector weights;
  double threshold = 0.0;
  std::optional<std::size_t> capacity;

  friend bool operator==(const CoefficientsPolicy&,
                         const CoefficientsPolicy&) = default;
};

struct BonusPolicy {
  WeightVector weights;
  std::vector<BonusTerm> bonuses;
  double threshold = 0.0;
  std::optional<std::size_t> capacity;

  friend bool operator==(const BonusPolicy&, const BonusPolicy&) = default;
};

// Single-attribute quota: each group is compared against its own threshold.
struct QuotaPolicy {
  WeightVector weights;
  std::string attribute;
  double fraction = 0.0;
  double threshold_designated = 0.0;
  double threshold_other = 0.0;
  std::optional<std::size_t> capacity_designated;
  std::optional<std::size_t> capacity_other;

  friend bool operator==(const QuotaPolicy&, const QuotaPolicy&) = default;
};

using Policy = std::variant<CoefficientsPolicy, BonusPolicy, QuotaPolicy>;

const char* PolicyKindName(const Policy& policy);
const WeightVector& PolicyWeights(const Policy& policy);
bool IsCalibrated(const Policy& policy);

struct Selection {
  // Ascending.
  std::vector<std::int64_t> admitted_ids;
  std::size_t k = 0;
  double theta_effective = 0.0;

  bool Contains(std::int64_t id) const;
  friend bool operator==(const Selection&, const Selection&) = default;
};

Selection MakeSelection(std::vector<std::int64_t> ids, std::size_t population);

// round_half_up(theta * n).
std::size_t TargetCount(double theta, std::size_t n);

double SelectionScore(const Policy& policy, const Population& pop,
                      const Candidate& cand);

// Selection scores for every candidate, in population order.
std::vector<double> SelectionScores(const Policy& policy,
                                    const Population& pop);

// Candidate indices sorted by (score desc, id asc); population index order
// is id order.
std::vector<std::size_t> RankOrder(std::span<const double> scores);

Selection Admit(const Policy& policy, const Population& pop);

// Returns `params` with its threshold(s) set so that exactly
// round_half_up(theta * N) candidates are admitted. For Quota policies the
// designated group receives round_half_up(fraction * k) of the seats.
Policy CalibrateTopK(const Policy& params, const Population& pop, double theta);

// Threshold of the calibrated Bonus policy with the given bonuses, found by
// binary search over the distinct bonus-adjusted scores that lie in
// [max(tau_base, tau_hint), tau_base + total bonus]. `tau_base` must be the
// calibrated Coefficients threshold for `w`.
double CalibrateBonusBinarySearch(const WeightVector& w,
                                  std::span<const BonusTerm> bonuses,
                                  const Population& pop, double theta,
                                  double tau_base,
                                  std::optional<double> tau_hint = std::nullopt);

// Bit-exact JSON round trip. Infinite thresholds are written as strings.
std::string SerializePolicy(const Policy& policy,
                            const std::vector<std::string>& score_names);
Policy ParsePolicy(const std::string& text,
                   std::vector<std::string>* score_names = nullptr);

}  // namespace fairadmit

#endif  // FAIRADMIT_POLICIES_H_
