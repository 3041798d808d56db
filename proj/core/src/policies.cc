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

#include "fairadmit/policies.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairadmit/error.h"
#include "json.hpp"

namespace fairadmit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool InFavoredGroup(const Candidate& c, std::size_t attr, Group favored) {
  return c.attrs[attr] == (favored == Group::kDesignated);
}

double Bonus(const Population& pop, const Candidate& c,
             std::span<const BonusTerm> bonuses) {
  double total = 0.0;
  for (const BonusTerm& b : bonuses) {
    if (InFavoredGroup(c, pop.AttributeIndex(b.attribute), b.favored)) {
      total += b.amount;
    }
  }
  return total;
}

void CheckDimension(const WeightVector& w, const Population& pop) {
  if (w.size() != pop.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "policy has " + std::to_string(w.size()) +
                    " weights, population has " +
                    std::to_string(pop.dimension()) + " scores");
  }
}

void CheckTheta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, 1]");
  }
}

// Indices of the k best-ranked candidates with score >= threshold (all of
// them when `capacity` is empty).
std::vector<std::size_t> TakeEligible(std::span<const double> scores,
                                      const std::vector<std::size_t>& order,
                                      double threshold,
                                      std::optional<std::size_t> capacity) {
  std::vector<std::size_t> taken;
  for (std::size_t i : order) {
    if (capacity && taken.size() == *capacity) break;
    if (scores[i] >= threshold) taken.push_back(i);
  }
  return taken;
}

}  // namespace

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty weight vector");
  }
  double l1 = 0.0;
  for (double x : w_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weights must be finite and non-negative");
    }
    l1 += x;
  }
  if (std::abs(l1 - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "weights must have unit L1 norm");
  }
}

WeightVector WeightVector::Normalized(std::vector<double> raw) {
  double l1 = 0.0;
  for (double x : raw) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weights must be finite and non-negative");
    }
    l1 += x;
  }
  if (l1 <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "weight vector is zero");
  }
  for (double& x : raw) x /= l1;
  return WeightVector(std::move(raw));
}

WeightVector WeightVector::Uniform(std::size_t d) {
  return Normalized(std::vector<double>(d, 1.0));
}

const char* GroupName(Group g) {
  return g == Group::kDesignated ? "designated" : "other";
}

const char* PolicyKindName(const Policy& policy) {
  return std::visit(
      Overloaded{[](const CoefficientsPolicy&) { return "coefficients"; },
                 [](const BonusPolicy&) { return "bonus"; },
                 [](const QuotaPolicy&) { return "quota"; }},
      policy);
}

const WeightVector& PolicyWeights(const Policy& policy) {
  return std::visit(
      [](const auto& p) -> const WeightVector& { return p.weights; }, policy);
}

bool IsCalibrated(const Policy& policy) {
  return std::visit(
      Overloaded{[](const CoefficientsPolicy& p) { return p.capacity.has_value(); },
                 [](const BonusPolicy& p) { return p.capacity.has_value(); },
                 [](const QuotaPolicy& p) {
                   return p.capacity_designated.has_value() &&
                          p.capacity_other.has_value();
                 }},
      policy);
}

bool Selection::Contains(std::int64_t id) const {
  return std::binary_search(admitted_ids.begin(), admitted_ids.end(), id);
}

Selection MakeSelection(std::vector<std::int64_t> ids, std::size_t population) {
  std::sort(ids.begin(), ids.end());
  Selection s;
  s.k = ids.size();
  s.theta_effective =
      population == 0 ? 0.0
                      : static_cast<double>(s.k) / static_cast<double>(population);
  s.admitted_ids = std::move(ids);
  return s;
}

std::size_t TargetCount(double theta, std::size_t n) {
  return static_cast<std::size_t>(std::floor(theta * static_cast<double>(n) + 0.5));
}

double SelectionScore(const Policy& policy, const Population& pop,
                      const Candidate& cand) {
  const WeightVector& w = PolicyWeights(policy);
  if (w.size() != cand.scores.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "candidate " + std::to_string(cand.id) + " has " +
                    std::to_string(cand.scores.size()) +
                    " scores, policy expects " + std::to_string(w.size()));
  }
  const double base = Dot(w.values(), cand.scores);
  if (const auto* b = std::get_if<BonusPolicy>(&policy)) {
    return base + Bonus(pop, cand, b->bonuses);
  }
  return base;
}

std::vector<double> SelectionScores(const Policy& policy,
                                    const Population& pop) {
  CheckDimension(PolicyWeights(policy), pop);
  std::vector<double> scores;
  scores.reserve(pop.size());
  if (const auto* b = std::get_if<BonusPolicy>(&policy)) {
    std::vector<std::pair<std::size_t, const BonusTerm*>> resolved;
    for (const BonusTerm& t : b->bonuses) {
      resolved.emplace_back(pop.AttributeIndex(t.attribute), &t);
    }
    for (const Candidate& c : pop.candidates()) {
      double s = Dot(b->weights.values(), c.scores);
      for (const auto& [attr, term] : resolved) {
        if (InFavoredGroup(c, attr, term->favored)) s += term->amount;
      }
      scores.push_back(s);
    }
    return scores;
  }
  const WeightVector& w = PolicyWeights(policy);
  for (const Candidate& c : pop.candidates()) {
    scores.push_back(Dot(w.values(), c.scores));
  }
  return scores;
}

std::vector<std::size_t> RankOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Population order is id-ascending, so index order breaks ties by id.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

Selection Admit(const Policy& policy, const Population& pop) {
  const std::vector<double> scores = SelectionScores(policy, pop);
  const std::vector<std::size_t> order = RankOrder(scores);
  std::vector<std::int64_t> ids;
  if (const auto* q = std::get_if<QuotaPolicy>(&policy)) {
    const std::size_t attr = pop.AttributeIndex(q->attribute);
    std::size_t taken_designated = 0;
    std::size_t taken_other = 0;
    for (std::size_t i : order) {
      const bool designated = pop[i].attrs[attr];
      const double threshold =
          designated ? q->threshold_designated : q->threshold_other;
      const auto& cap =
          designated ? q->capacity_designated : q->capacity_other;
      std::size_t& taken = designated ? taken_designated : taken_other;
      if (cap && taken == *cap) continue;
      if (scores[i] >= threshold) {
        ids.push_back(pop[i].id);
        ++taken;
      }
    }
    return MakeSelection(std::move(ids), pop.size());
  }
  const auto [threshold, capacity] = std::visit(
      Overloaded{
          [](const CoefficientsPolicy& p) {
            return std::pair{p.threshold, p.capacity};
          },
          [](const BonusPolicy& p) {
            return std::pair{p.threshold, p.capacity};
          },
          [](const QuotaPolicy&) {
            return std::pair{0.0, std::optional<std::size_t>{}};
          }},
      policy);
  for (std::size_t i : TakeEligible(scores, order, threshold, capacity)) {
    ids.push_back(pop[i].id);
  }
  return MakeSelection(std::move(ids), pop.size());
}

Policy CalibrateTopK(const Policy& params, const Population& pop,
                     double theta) {
  CheckTheta(theta);
  const std::size_t k = TargetCount(theta, pop.size());
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "theta too small: no candidate would be admitted");
  }
  const std::vector<double> scores = SelectionScores(params, pop);
  if (const auto* q = std::get_if<QuotaPolicy>(&params)) {
    if (!(q->fraction >= 0.0 && q->fraction <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "quota fraction must lie in [0, 1]");
    }
    const std::size_t attr = pop.AttributeIndex(q->attribute);
    const std::size_t k_designated = TargetCount(q->fraction, k);
    const std::size_t k_other = k - k_designated;
    if (k_designated > pop.GroupSize(attr, true) ||
        k_other > pop.GroupSize(attr, false)) {
      throw Error(ErrorCode::kUnreachable,
                  "quota needs more candidates than a group has");
    }
    QuotaPolicy out = *q;
    out.threshold_designated = kInf;
    out.threshold_other = kInf;
    std::size_t seen_designated = 0;
    std::size_t seen_other = 0;
    for (std::size_t i : RankOrder(scores)) {
      if (pop[i].attrs[attr]) {
        if (++seen_designated == k_designated) out.threshold_designated = scores[i];
      } else {
        if (++seen_other == k_other) out.threshold_other = scores[i];
      }
    }
    out.capacity_designated = k_designated;
    out.capacity_other = k_other;
    return out;
  }
  const std::vector<std::size_t> order = RankOrder(scores);
  const double threshold = scores[order[k - 1]];
  return std::visit(
      [&](auto p) -> Policy {
        if constexpr (!std::is_same_v<decltype(p), QuotaPolicy>) {
          p.threshold = threshold;
          p.capacity = k;
        }
        return p;
      },
      params);
}

double CalibrateBonusBinarySearch(const WeightVector& w,
                                  std::span<const BonusTerm> bonuses,
                                  const Population& pop, double theta,
                                  double tau_base,
                                  std::optional<double> tau_hint) {
  CheckTheta(theta);
  CheckDimension(w, pop);
  double total_bonus = 0.0;
  for (const BonusTerm& b : bonuses) {
    if (!(b.amount >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "bonus must be non-negative");
    }
    total_bonus += b.amount;
  }
  const std::size_t k = TargetCount(theta, pop.size());
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "theta too small: no candidate would be admitted");
  }
  const Policy policy = BonusPolicy{w, {bonuses.begin(), bonuses.end()}, 0.0, {}};
  const std::vector<double> scores = SelectionScores(policy, pop);

  const double lo = tau_hint ? std::max(tau_base, *tau_hint) : tau_base;
  const double hi = tau_base + total_bonus;
  std::vector<double> levels;
  for (double s : scores) {
    if (s >= lo && s <= hi) levels.push_back(s);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto admitted_at = [&](double tau) {
    return static_cast<std::size_t>(
        std::count_if(scores.begin(), scores.end(),
                      [tau](double s) { return s >= tau; }));
  };
  // Largest level that still admits at least k; the admitted count is
  // non-increasing in the threshold.
  std::size_t left = 0;
  std::size_t right = levels.size();
  while (left < right) {
    const std::size_t mid = left + (right - left) / 2;
    if (admitted_at(levels[mid]) >= k) {
      left = mid + 1;
    } else {
      right = mid;
    }
  }
  if (left == 0) {
    throw Error(ErrorCode::kInternal,
                "no threshold in the calibration interval admits k candidates");
  }
  return levels[left - 1];
}

namespace {

using Json = nlohmann::ordered_json;

Json RealToJson(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

double RealFromJson(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw Error(ErrorCode::kParse, "bad real value '" + s + "'");
  }
  return j.get<double>();
}

Json CapacityToJson(const std::optional<std::size_t>& c) {
  return c ? Json(*c) : Json(nullptr);
}

std::optional<std::size_t> CapacityFromJson(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::size_t>();
}

Group GroupFromName(const std::string& s) {
  if (s == "designated") return Group::kDesignated;
  if (s == "other") return Group::kOther;
  throw Error(ErrorCode::kParse, "unknown group '" + s + "'");
}

}  // namespace

std::string SerializePolicy(const Policy& policy,
                            const std::vector<std::string>& score_names) {
  Json j;
  j["kind"] = PolicyKindName(policy);
  j["score_names"] = score_names;
  Json weights = Json::array();
  for (double w : PolicyWeights(policy).values()) weights.push_back(w);
  j["weights"] = std::move(weights);
  std::visit(
      Overloaded{
          [&](const CoefficientsPolicy& p) {
            j["threshold"] = RealToJson(p.threshold);
            j["capacity"] = CapacityToJson(p.capacity);
          },
          [&](const BonusPolicy& p) {
            j["threshold"] = RealToJson(p.threshold);
            j["capacity"] = CapacityToJson(p.capacity);
            Json bonuses = Json::array();
            for (const BonusTerm& b : p.bonuses) {
              bonuses.push_back({{"attribute", b.attribute},
                                 {"amount", b.amount},
                                 {"favored", GroupName(b.favored)}});
            }
            j["bonuses"] = std::move(bonuses);
          },
          [&](const QuotaPolicy& p) {
            j["quota"] = {
                {"attribute", p.attribute},
                {"fraction", p.fraction},
                {"threshold_designated", RealToJson(p.threshold_designated)},
                {"threshold_other", RealToJson(p.threshold_other)},
                {"capacity_designated", CapacityToJson(p.capacity_designated)},
                {"capacity_other", CapacityToJson(p.capacity_other)}};
          }},
      policy);
  return j.dump(2) + "\n";
}

Policy ParsePolicy(const std::string& text,
                   std::vector<std::string>* score_names) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("policy document: ") + e.what());
  }
  try {
    if (score_names != nullptr) {
      *score_names = j.at("score_names").get<std::vector<std::string>>();
    }
    WeightVector w(j.at("weights").get<std::vector<double>>());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "coefficients") {
      return CoefficientsPolicy{std::move(w), RealFromJson(j.at("threshold")),
                                CapacityFromJson(j, "capacity")};
    }
    if (kind == "bonus") {
      BonusPolicy p{std::move(w), {}, RealFromJson(j.at("threshold")),
                    CapacityFromJson(j, "capacity")};
      for (const Json& b : j.at("bonuses")) {
        p.bonuses.push_back(
            BonusTerm{b.at("attribute").get<std::string>(),
                      b.at("amount").get<double>(),
                      GroupFromName(b.at("favored").get<std::string>())});
      }
      return p;
    }
    if (kind == "quota") {
      const Json& q = j.at("quota");
      return QuotaPolicy{std::move(w),
                         q.at("attribute").get<std::string>(),
                         q.at("fraction").get<double>(),
                         RealFromJson(q.at("threshold_designated")),
                         RealFromJson(q.at("threshold_other")),
                         CapacityFromJson(q, "capacity_designated"),
                         CapacityFromJson(q, "capacity_other")};
    }
    throw Error(ErrorCode::kParse, "unknown policy kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("policy document: ") + e.what());
  }
}

}  // namespace fairadmit
