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

#include "fairadmit/baselines.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iterator>
#include <sstream>

#include "fairadmit/error.h"
#include "fairadmit/metrics.h"
#include "json.hpp"

namespace fairadmit {

Population MedianRepair(const Population& pop, const std::string& attr) {
  const std::size_t a = pop.AttributeIndex(attr);
  std::vector<Candidate> repaired(pop.candidates().begin(),
                                  pop.candidates().end());
  for (std::size_t j = 0; j < pop.dimension(); ++j) {
    std::vector<double> designated;
    std::vector<double> other;
    for (const Candidate& c : pop.candidates()) {
      (c.attrs[a] ? designated : other).push_back(c.scores[j]);
    }
    const EmpiricalDist dist_designated(designated);
    const EmpiricalDist dist_other(other);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const Candidate& c = pop[i];
      const auto sorted =
          (c.attrs[a] ? dist_designated : dist_other).sorted_values();
      const double x = c.scores[j];
      const auto below = std::lower_bound(sorted.begin(), sorted.end(), x);
      const auto upto = std::upper_bound(sorted.begin(), sorted.end(), x);
      const double less = static_cast<double>(below - sorted.begin());
      const double tied = static_cast<double>(upto - below);
      const double beta = std::min(
          1.0, (less + (tied + 1.0) / 2.0) / static_cast<double>(sorted.size()));
      repaired[i].scores[j] =
          (dist_designated.InverseCdf(beta) + dist_other.InverseCdf(beta)) / 2.0;
    }
  }
  std::vector<std::string> names;
  for (const std::string& s : pop.score_names()) names.push_back("repaired_" + s);
  return Population(std::move(repaired), pop.attribute_names(),
                    std::move(names));
}

void FairRankingConfig::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1)");
  }
}

double BinomialCdf(std::size_t t, std::size_t n, double p) {
  if (t >= n) return 1.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i <= t; ++i) {
    const double di = static_cast<double>(i);
    const double dn = static_cast<double>(n);
    sum += std::exp(log_n_fact - std::lgamma(di + 1.0) -
                    std::lgamma(dn - di + 1.0) + di * log_p + (dn - di) * log_q);
  }
  return std::min(sum, 1.0);
}

std::vector<std::size_t> RequiredProtected(std::size_t k, double rho,
                                           double alpha) {
  FairRankingConfig{alpha, rho}.Validate();
  std::vector<std::size_t> required(k);
  std::size_t t = 0;
  for (std::size_t r = 1; r <= k; ++r) {
    // The requirement never decreases with r, so the search resumes at the
    // previous value.
    while (BinomialCdf(t, r, rho) <= alpha) ++t;
    required[r - 1] = t;
  }
  return required;
}

FairRanking FairRerank(const Population& pop, const WeightVector& w,
                       double theta, const std::string& attr,
                       const FairRankingConfig& cfg) {
  cfg.Validate();
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, 1]");
  }
  const std::size_t a = pop.AttributeIndex(attr);
  const std::size_t k = TargetCount(theta, pop.size());
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "theta too small: no candidate would be admitted");
  }
  const Policy scoring = CoefficientsPolicy{w, 0.0, {}};
  const std::vector<double> scores = SelectionScores(scoring, pop);
  std::deque<std::size_t> protected_queue;
  std::deque<std::size_t> other_queue;
  for (std::size_t i : RankOrder(scores)) {
    (pop[i].attrs[a] ? protected_queue : other_queue).push_back(i);
  }

  FairRanking out;
  out.required = RequiredProtected(k, cfg.rho, cfg.alpha);
  std::size_t protected_so_far = 0;
  std::vector<std::int64_t> admitted;
  for (std::size_t pos = 1; pos <= pop.size(); ++pos) {
    const std::size_t need = pos <= k ? out.required[pos - 1] : 0;
    bool take_protected;
    if (protected_so_far < need) {
      if (protected_queue.empty()) {
        throw Error(ErrorCode::kUnreachable,
                    "protected candidates exhausted at prefix " +
                        std::to_string(pos) + " (need " + std::to_string(need) +
                        ", have " + std::to_string(protected_so_far) + ")");
      }
      take_protected = true;
    } else if (protected_queue.empty() || other_queue.empty()) {
      take_protected = other_queue.empty();
    } else {
      const std::size_t p = protected_queue.front();
      const std::size_t o = other_queue.front();
      take_protected = scores[p] > scores[o] || (scores[p] == scores[o] && p < o);
    }
    std::deque<std::size_t>& q = take_protected ? protected_queue : other_queue;
    const std::size_t i = q.front();
    q.pop_front();
    if (take_protected) ++protected_so_far;
    out.ranking.push_back({pos, pop[i].id, take_protected, scores[i]});
    if (pos <= k) admitted.push_back(pop[i].id);
  }
  out.selection = MakeSelection(std::move(admitted), pop.size());
  return out;
}

std::string RankingToCsv(const FairRanking& ranking) {
  std::ostringstream out;
  out << "position,id,group,score\n";
  for (const RankedEntry& e : ranking.ranking) {
    out << e.position << ',' << e.id << ','
        << (e.is_protected ? "designated" : "other") << ','
        << FormatReal(e.score) << '\n';
  }
  return out.str();
}

SelectionComparison CompareSelections(const Selection& first,
                                      const Selection& second,
                                      const Population& pop,
                                      const std::string& attr,
                                      const OutcomeModel& model) {
  const std::size_t a = pop.AttributeIndex(attr);
  SelectionComparison cmp;
  for (const Candidate& c : pop.candidates()) {
    if (first.Contains(c.id)) ++(c.attrs[a] ? cmp.designated_first : cmp.other_first);
    if (second.Contains(c.id)) {
      ++(c.attrs[a] ? cmp.designated_second : cmp.other_second);
    }
  }
  std::set_difference(first.admitted_ids.begin(), first.admitted_ids.end(),
                      second.admitted_ids.begin(), second.admitted_ids.end(),
                      std::back_inserter(cmp.only_first));
  std::set_difference(second.admitted_ids.begin(), second.admitted_ids.end(),
                      first.admitted_ids.begin(), first.admitted_ids.end(),
                      std::back_inserter(cmp.only_second));
  cmp.equal = cmp.only_first.empty() && cmp.only_second.empty();
  cmp.counts_equal = cmp.designated_first == cmp.designated_second &&
                     cmp.other_first == cmp.other_second;
  if (!first.admitted_ids.empty() && !second.admitted_ids.empty()) {
    cmp.delta_uos = std::abs(Uos(first, pop, model) - Uos(second, pop, model));
  }
  cmp.delta_dmd = std::abs(Dmd(first, pop, attr) - Dmd(second, pop, attr));
  return cmp;
}

std::string ComparisonToJson(const SelectionComparison& cmp) {
  nlohmann::ordered_json j;
  j["equal"] = cmp.equal;
  j["counts_equal"] = cmp.counts_equal;
  j["first"] = {{"designated", cmp.designated_first}, {"other", cmp.other_first}};
  j["second"] = {{"designated", cmp.designated_second},
                 {"other", cmp.other_second}};
  j["only_first"] = cmp.only_first;
  j["only_second"] = cmp.only_second;
  j["delta_uos"] = nlohmann::ordered_json::parse(FormatReal(cmp.delta_uos));
  j["delta_dmd"] = nlohmann::ordered_json::parse(FormatReal(cmp.delta_dmd));
  return j.dump(2) + "\n";
}

}  // namespace fairadmit
