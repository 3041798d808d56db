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

#ifndef FAIRADMIT_BASELINES_H_
#define FAIRADMIT_BASELINES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fairadmit/fit.h"
#include "fairadmit/model.h"
#include "fairadmit/policies.h"

namespace fairadmit {

// Full quantile repair of every score dimension: a candidate at in-group
// quantile rank beta gets the mean of both groups' inverse CDFs at beta.
// Ties inside a group share their average rank. Score names gain a
// `repaired_` prefix.
Population MedianRepair(const Population& pop, const std::string& attr);

struct FairRankingConfig {
  // Significance of the per-prefix binomial test.
  double alpha = 0.1;
  // Target minimum proportion of protected candidates.
  double rho = 0.5;

  void Validate() const;
};

// P[X <= t] for X ~ Binomial(n, p), summed term by term in log space.
double BinomialCdf(std::size_t t, std::size_t n, double p);

// Entry r - 1 is the smallest t with BinomialCdf(t; r, rho) > alpha.
std::vector<std::size_t> RequiredProtected(std::size_t k, double rho,
                                           double alpha);

struct RankedEntry {
  std::size_t position = 0;
  std::int64_t id = 0;
  bool is_protected = false;
  double score = 0.0;
};

struct FairRanking {
  Selection selection;
  // Every candidate; prefixes of length <= k satisfy the table.
  std::vector<RankedEntry> ranking;
  std::vector<std::size_t> required;
};

// Prefix-constrained re-ranking of w.x with the designated group of `attr`
// as the protected group. Throws kUnreachable naming the first prefix whose
// requirement cannot be met.
FairRanking FairRerank(const Population& pop, const WeightVector& w,
                       double theta, const std::string& attr,
                       const FairRankingConfig& cfg);

std::string RankingToCsv(const FairRanking& ranking);

struct SelectionComparison {
  bool equal = false;
  bool counts_equal = false;
  std::size_t designated_first = 0;
  std::size_t other_first = 0;
  std::size_t designated_second = 0;
  std::size_t other_second = 0;
  std::vector<std::int64_t> only_first;
  std::vector<std::int64_t> only_second;
  double delta_uos = 0.0;
  double delta_dmd = 0.0;
};

SelectionComparison CompareSelections(const Selection& first,
                                      const Selection& second,
                                      const Population& pop,
                                      const std::string& attr,
                                      const OutcomeModel& model);

std::string ComparisonToJson(const SelectionComparison& cmp);

}  // namespace fairadmit

#endif  // FAIRADMIT_BASELINES_H_
