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

#include "fairadmit/search.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fairadmit/error.h"

namespace fairadmit {

namespace {

SearchResult Best(std::vector<FrontierPoint> frontier) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < frontier.size(); ++i) {
    if (frontier[i].report.objective > frontier[best].report.objective) {
      best = i;
    }
  }
  SearchResult r{frontier[best].policy, frontier[best].report, {}, {}};
  r.frontier = std::move(frontier);
  return r;
}

std::size_t DesignatedAdmitted(const Selection& s, const Population& pop,
                               std::size_t attr) {
  std::size_t n = 0;
  for (const Candidate& c : pop.candidates()) {
    if (c.attrs[attr] && s.Contains(c.id)) ++n;
  }
  return n;
}

BonusPolicy CalibratedBonus(const WeightVector& w, std::vector<BonusTerm> terms,
                            const Population& pop, double theta) {
  return std::get<BonusPolicy>(
      CalibrateTopK(BonusPolicy{w, std::move(terms), 0.0, {}}, pop, theta));
}

}  // namespace

std::string RotationDirection::Label() const {
  return std::to_string(i) + (sign > 0 ? "->" : "<-") + std::to_string(j);
}

RotationPlan RotationPlan::AllPlanes(std::size_t d, double step_angle,
                                     std::size_t steps) {
  RotationPlan plan;
  plan.step_angle = step_angle;
  plan.steps = steps;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      plan.directions.push_back({i, j, +1});
      plan.directions.push_back({i, j, -1});
    }
  }
  return plan;
}

void RotationPlan::Validate(std::size_t d) const {
  if (!(step_angle > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step angle must be positive");
  }
  if (step_angle * static_cast<double>(steps) >= std::numbers::pi / 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "step angle times steps must stay below pi/2");
  }
  if (!directions.empty() && d < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "rotations need at least two score dimensions");
  }
  for (const RotationDirection& dir : directions) {
    if (dir.i == dir.j || dir.i >= d || dir.j >= d ||
        (dir.sign != 1 && dir.sign != -1)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid rotation direction " + dir.Label());
    }
  }
}

WeightVector Rotate(const WeightVector& w, const RotationDirection& dir,
                    double angle) {
  std::vector<double> v(w.values().begin(), w.values().end());
  const double t = dir.sign * angle;
  const double wi = v[dir.i];
  const double wj = v[dir.j];
  v[dir.i] = std::cos(t) * wi - std::sin(t) * wj;
  v[dir.j] = std::sin(t) * wi + std::cos(t) * wj;
  for (double& x : v) x = std::max(x, 0.0);
  return WeightVector::Normalized(std::move(v));
}

SearchResult SearchCoefficients(const Population& pop,
                                const OutcomeModel& model, double theta,
                                const LambdaMap& lambda,
                                const RotationPlan& plan) {
  plan.Validate(pop.dimension());
  std::vector<FrontierPoint> frontier;
  auto evaluate = [&](const WeightVector& w, std::string label, double param) {
    Policy p = CalibrateTopK(CoefficientsPolicy{w, 0.0, {}}, pop, theta);
    EvalReport r = Evaluate(p, pop, model, lambda);
    frontier.push_back({std::move(label), param, std::move(p), std::move(r)});
  };
  evaluate(model.weights, "start", 0.0);
  for (const RotationDirection& dir : plan.directions) {
    WeightVector w = model.weights;
    for (std::size_t s = 1; s <= plan.steps; ++s) {
      w = Rotate(w, dir, plan.step_angle);
      evaluate(w, dir.Label(), plan.step_angle * static_cast<double>(s));
    }
  }
  return Best(std::move(frontier));
}

BonusRange BDmd(const Population& pop, const WeightVector& w, double theta,
                const std::string& attr) {
  const Policy base = CalibrateTopK(CoefficientsPolicy{w, 0.0, {}}, pop, theta);
  const double rate_gap = Dmd(Admit(base, pop), pop, attr);
  BonusRange range;
  if (rate_gap > 0.0) {
    range.favored = Group::kOther;
    range.swapped = true;
  }
  const double beta = 1.0 - theta;
  if (beta <= 0.0) return range;
  const double g = GroupScoreDist(pop, attr, true, w.values()).InverseCdf(beta);
  const double h = GroupScoreDist(pop, attr, false, w.values()).InverseCdf(beta);
  range.value = std::max(0.0, range.swapped ? g - h : h - g);
  return range;
}

void BonusSearchConfig::Validate() const {
  if (granularity < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid granularity must be >= 1");
  }
}

SearchResult SearchBonus(const Population& pop, const OutcomeModel& model,
                         double theta, const LambdaMap& lambda,
                         const std::string& attr,
                         const BonusSearchConfig& cfg) {
  cfg.Validate();
  const WeightVector& w = model.weights;
  const BonusRange range = BDmd(pop, w, theta, attr);
  const double tau_base = std::get<CoefficientsPolicy>(
                              CalibrateTopK(CoefficientsPolicy{w, 0.0, {}}, pop,
                                            theta))
                              .threshold;
  const std::size_t k = TargetCount(theta, pop.size());
  const std::size_t points = range.value > 0.0 ? cfg.granularity : 0;

  std::vector<FrontierPoint> frontier;
  std::optional<double> hint;
  for (std::size_t i = 0; i <= points; ++i) {
    const double b = points == 0 ? 0.0
                                 : range.value * static_cast<double>(i) /
                                       static_cast<double>(points);
    const std::vector<BonusTerm> terms{{attr, b, range.favored}};
    const double tau =
        CalibrateBonusBinarySearch(w, terms, pop, theta, tau_base, hint);
    hint = tau;
    Policy p = BonusPolicy{w, terms, tau, k};
    EvalReport r = Evaluate(p, pop, model, lambda);
    frontier.push_back({"bonus", b, std::move(p), std::move(r)});
  }
  SearchResult result = Best(std::move(frontier));
  if (range.swapped) {
    result.notes.push_back("designated group of " + attr +
                           " is advantaged; bonus applied to the other group");
  }
  if (points == 0) {
    result.notes.push_back("b_DmD is zero for " + attr +
                           "; returning the zero-bonus policy");
  }
  return result;
}

QuotaPolicy BonusToQuota(const BonusPolicy& bonus, const Population& pop,
                         double theta) {
  if (!bonus.capacity || *bonus.capacity != TargetCount(theta, pop.size())) {
    throw Error(ErrorCode::kNotCalibrated,
                "bonus policy is not calibrated for this theta");
  }
  if (bonus.bonuses.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "quota conversion needs a single-attribute bonus policy");
  }
  const std::string& attr = bonus.bonuses.front().attribute;
  const std::size_t a = pop.AttributeIndex(attr);
  const Selection s = Admit(bonus, pop);
  const std::size_t k = s.k;
  const std::size_t k_designated = DesignatedAdmitted(s, pop, a);

  QuotaPolicy q{bonus.weights, attr,
                static_cast<double>(k_designated) / static_cast<double>(k),
                std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(),
                k_designated, k - k_designated};
  // Per-group thresholds are the lowest raw score admitted from each group.
  for (const Candidate& c : pop.candidates()) {
    if (!s.Contains(c.id)) continue;
    const double raw = Dot(bonus.weights.values(), c.scores);
    double& t = c.attrs[a] ? q.threshold_designated : q.threshold_other;
    t = std::isinf(t) ? raw : std::min(t, raw);
  }
  return q;
}

BonusPolicy MatchBonusToCount(const Population& pop, const WeightVector& w,
                              double theta, const std::string& attr,
                              std::size_t designated_count) {
  const std::size_t a = pop.AttributeIndex(attr);
  const std::size_t k = TargetCount(theta, pop.size());
  const BonusPolicy zero = CalibratedBonus(w, {{attr, 0.0, Group::kDesignated}},
                                           pop, theta);
  const std::size_t natural = DesignatedAdmitted(Admit(zero, pop), pop, a);
  if (designated_count == natural) return zero;

  const Group favored =
      designated_count > natural ? Group::kDesignated : Group::kOther;
  const bool favor_designated = favored == Group::kDesignated;
  const std::size_t target =
      favor_designated ? designated_count : k - std::min(designated_count, k);
  auto favored_count = [&](const BonusPolicy& p) {
    const std::size_t d = DesignatedAdmitted(Admit(p, pop), pop, a);
    return favor_designated ? d : k - d;
  };

  // The admitted set only changes where a favored candidate's bonus-adjusted
  // score crosses an unfavored candidate's score. Seats are decided among
  // each group's top k, so only those pairs matter.
  std::vector<double> favored_scores;
  std::vector<double> unfavored_scores;
  for (const Candidate& c : pop.candidates()) {
    const double s = Dot(w.values(), c.scores);
    (c.attrs[a] == favor_designated ? favored_scores : unfavored_scores)
        .push_back(s);
  }
  auto top = [k](std::vector<double>& v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    if (v.size() > k + 1) v.resize(k + 1);
  };
  top(favored_scores);
  top(unfavored_scores);
  std::vector<double> breakpoints;
  for (double u : unfavored_scores) {
    for (double f : favored_scores) {
      if (u > f) breakpoints.push_back(u - f);
    }
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());
  // Each breakpoint may or may not flip under the id tie rule; the midpoint
  // to the next breakpoint is past the crossing for sure.
  std::vector<double> levels{0.0};
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    levels.push_back(breakpoints[i]);
    const double next = i + 1 < breakpoints.size()
                            ? breakpoints[i + 1]
                            : breakpoints[i] + std::max(1.0, breakpoints[i]);
    levels.push_back(breakpoints[i] + (next - breakpoints[i]) / 2);
  }

  auto policy_at = [&](double b) {
    return CalibratedBonus(w, {{attr, b, favored}}, pop, theta);
  };
  // Smallest level reaching the target; the count is non-decreasing in b.
  std::size_t lo = 0;
  std::size_t hi = levels.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (favored_count(policy_at(levels[mid])) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  auto designated_of = [&](std::size_t favored_seats) {
    return favor_designated ? favored_seats : k - favored_seats;
  };
  if (lo == levels.size()) {
    const std::size_t best = favored_count(policy_at(levels.back()));
    throw Error(ErrorCode::kUnreachable,
                "designated count " + std::to_string(designated_count) +
                    " is unreachable by a bonus; nearest achievable is " +
                    std::to_string(designated_of(best)));
  }
  BonusPolicy found = policy_at(levels[lo]);
  const std::size_t got = favored_count(found);
  if (got != target) {
    const std::size_t below =
        lo > 0 ? favored_count(policy_at(levels[lo - 1])) : got;
    throw Error(ErrorCode::kUnreachable,
                "designated count " + std::to_string(designated_count) +
                    " is unreachable under the tie rule; nearest achievable "
                    "counts are " +
                    std::to_string(designated_of(below)) + " and " +
                    std::to_string(designated_of(got)));
  }
  return found;
}

BonusPolicy QuotaToBonus(const QuotaPolicy& quota, const Population& pop,
                         double theta) {
  if (!quota.capacity_designated || !quota.capacity_other ||
      *quota.capacity_designated + *quota.capacity_other !=
          TargetCount(theta, pop.size())) {
    throw Error(ErrorCode::kNotCalibrated,
                "quota policy is not calibrated for this theta");
  }
  return MatchBonusToCount(pop, quota.weights, theta, quota.attribute,
                           *quota.capacity_designated);
}

BonusPolicy MinDisparityBonus(const Population& pop, const WeightVector& w,
                              double theta, const std::string& attr) {
  const std::size_t a = pop.AttributeIndex(attr);
  const std::size_t k = TargetCount(theta, pop.size());
  const std::size_t n_designated = pop.GroupSize(a, true);
  const std::size_t n_other = pop.GroupSize(a, false);
  const BonusRange range = BDmd(pop, w, theta, attr);
  const Policy base = CalibrateTopK(CoefficientsPolicy{w, 0.0, {}}, pop, theta);
  const std::size_t natural = DesignatedAdmitted(Admit(base, pop), pop, a);

  // Candidate designated counts reachable by favoring the disadvantaged side,
  // ordered by |DmD| and then by distance from the natural count (smaller
  // bonus first).
  std::vector<std::size_t> counts;
  const std::size_t min_designated = k > n_other ? k - n_other : 0;
  const std::size_t max_designated = std::min(k, n_designated);
  if (range.favored == Group::kDesignated) {
    for (std::size_t t = natural; t <= max_designated; ++t) counts.push_back(t);
  } else {
    for (std::size_t t = natural + 1; t-- > min_designated;) counts.push_back(t);
  }
  auto gap = [&](std::size_t t) {
    return std::abs(static_cast<double>(t) / static_cast<double>(n_designated) -
                    static_cast<double>(k - t) / static_cast<double>(n_other));
  };
  std::stable_sort(counts.begin(), counts.end(),
                   [&](std::size_t x, std::size_t y) { return gap(x) < gap(y); });
  for (std::size_t t : counts) {
    try {
      return MatchBonusToCount(pop, w, theta, attr, t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachable) throw;
    }
  }
  throw Error(ErrorCode::kInternal, "no reachable bonus policy");
}

void GreedyConfig::Validate() const {
  if (!(increment > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bonus increment must be positive");
  }
  if (max_steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_steps must be positive");
  }
}

SearchResult SearchBonusMulti(const Population& pop, const OutcomeModel& model,
                              double theta, const LambdaMap& lambda,
                              const GreedyConfig& cfg) {
  cfg.Validate();
  std::vector<std::string> attrs;
  for (const std::string& name : pop.attribute_names()) {
    if (lambda.count(name) != 0) attrs.push_back(name);
  }
  for (const auto& [name, l] : lambda) pop.AttributeIndex(name);
  if (attrs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "multi-attribute search needs at least one attribute");
  }
  const WeightVector& w = model.weights;
  std::vector<BonusTerm> terms;
  std::vector<std::string> notes;
  for (const std::string& name : attrs) {
    const BonusRange range = BDmd(pop, w, theta, name);
    terms.push_back({name, 0.0, range.favored});
    if (range.swapped) {
      notes.push_back("designated group of " + name +
                             " is advantaged; bonus applied to the other group");
    }
  }
  auto evaluate = [&](const std::vector<BonusTerm>& t, std::string label,
                      double param) {
    Policy p = CalibratedBonus(w, t, pop, theta);
    EvalReport r = Evaluate(p, pop, model, lambda);
    return FrontierPoint{std::move(label), param, std::move(p), std::move(r)};
  };

  FrontierPoint current = evaluate(terms, "start", 0.0);
  std::vector<FrontierPoint> accepted{current};
  for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
    std::optional<FrontierPoint> best;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      std::vector<BonusTerm> trial = terms;
      trial[i].amount += cfg.increment;
      FrontierPoint p = evaluate(trial, trial[i].attribute, trial[i].amount);
      if (!best || p.report.objective > best->report.objective) {
        best = std::move(p);
      }
    }
    if (!(best->report.objective > current.report.objective)) break;
    current = std::move(*best);
    terms = std::get<BonusPolicy>(current.policy).bonuses;
    accepted.push_back(current);
  }
  return SearchResult{current.policy, current.report, std::move(accepted),
                      std::move(notes)};
}

}  // namespace fairadmit
