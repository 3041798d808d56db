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

#include "fairadmit/fit.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "fairadmit/error.h"
#include "json.hpp"

namespace fairadmit {

FitResult FitOutcomeModel(const Population& pop) {
  const std::size_t d = pop.dimension();
  const std::size_t n = pop.ObservedOutcomes();
  if (n < d + 2) {
    throw Error(ErrorCode::kInsufficientData,
                "need at least " + std::to_string(d + 2) +
                    " observed outcomes, found " + std::to_string(n));
  }
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  std::size_t row = 0;
  for (const Candidate& c : pop.candidates()) {
    if (!c.outcome) continue;
    for (std::size_t j = 0; j < d; ++j) x(row, j) = c.scores[j];
    y(row) = *c.outcome;
    ++row;
  }
  // Centering removes the intercept column and keeps the QR well scaled.
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
  if (qr.rank() < static_cast<Eigen::Index>(d)) {
    throw Error(ErrorCode::kRankDeficient,
                "score matrix of observed candidates is rank deficient");
  }
  const Eigen::VectorXd beta = qr.solve(yc);

  FitResult result;
  result.raw_slopes.assign(beta.data(), beta.data() + d);
  std::vector<double> projected(d);
  double l1 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (beta(j) < 0.0) {
      result.warnings.push_back("slope for " + pop.score_names()[j] + " (" +
                                FormatRoundTrip(beta(j)) + ") clipped to 0");
      projected[j] = 0.0;
    } else {
      projected[j] = beta(j);
    }
    l1 += projected[j];
  }
  if (!(l1 > 0.0)) {
    throw Error(ErrorCode::kInsufficientData,
                "no non-negative signal: every slope is negative or zero");
  }
  result.model.slope = l1;
  result.model.weights = WeightVector::Normalized(std::move(projected));
  result.model.intercept = y_mean - x_mean.dot(beta);
  return result;
}

namespace {

using Json = nlohmann::ordered_json;

template <class T>
T Field(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kParse, "missing field '" + path + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kParse, "field '" + path + key + "' has the wrong type");
  }
}

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "field '" + field + "' " + what);
}

// Deterministic across standard libraries, unlike std::normal_distribution.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Normal() {
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double TruncatedNormal(double mean, double sd, double lo, double hi,
                         const std::string& what) {
    constexpr int kMaxAttempts = 100000;
    for (int i = 0; i < kMaxAttempts; ++i) {
      const double v = mean + sd * Normal();
      if (v >= lo && v <= hi) return v;
    }
    throw Error(ErrorCode::kInvalidArgument,
                "truncated normal for " + what +
                    " rejects almost every draw; widen [lo, hi]");
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::string SerializeModel(const OutcomeModel& model,
                           const std::vector<std::string>& score_names) {
  Json j;
  j["intercept"] = model.intercept;
  j["slope"] = model.slope;
  j["score_names"] = score_names;
  j["weights"] = std::vector<double>(model.weights.values().begin(),
                                     model.weights.values().end());
  return j.dump(2) + "\n";
}

OutcomeModel ParseModel(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("model document: ") + e.what());
  }
  OutcomeModel m;
  m.intercept = Field<double>(j, "intercept", "");
  m.slope = Field<double>(j, "slope", "");
  if (!(m.slope >= 0.0)) Invalid("slope", "must be non-negative");
  m.weights = WeightVector(Field<std::vector<double>>(j, "weights", ""));
  return m;
}

void GeneratorConfig::Validate() const {
  const std::size_t d = score_names.size();
  if (n < 2) Invalid("N", "must be at least 2");
  if (d == 0) Invalid("scores", "must list at least one score");
  if (lower.size() != d || upper.size() != d) {
    Invalid("scores", "needs lo and hi for every score");
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!(lower[j] < upper[j])) {
      Invalid("scores[" + std::to_string(j) + "]", "needs lo < hi");
    }
  }
  if (attributes.empty()) Invalid("attributes", "must list at least one");
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    const AttributeConfig& attr = attributes[a];
    const std::string path = "attributes[" + std::to_string(a) + "]";
    if (attr.name.empty()) Invalid(path + ".name", "must be non-empty");
    if (!(attr.prevalence > 0.0 && attr.prevalence < 1.0)) {
      Invalid(path + ".prevalence", "must lie in (0, 1)");
    }
    for (const auto& [label, g] :
         {std::pair{"designated", &attr.designated},
          std::pair{"other", &attr.other}}) {
      const std::string gp = path + "." + label;
      if (g->mean.size() != d) Invalid(gp + ".mean", "needs one value per score");
      if (g->stddev.size() != d) Invalid(gp + ".std", "needs one value per score");
      for (double s : g->stddev) {
        if (!(s > 0.0)) Invalid(gp + ".std", "must be positive");
      }
    }
  }
  if (outcome_weights.size() != d) {
    Invalid("outcome.weights", "needs one value per score");
  }
  try {
    WeightVector check(outcome_weights);
  } catch (const Error&) {
    Invalid("outcome.weights", "must be non-negative with unit L1 norm");
  }
  if (!(outcome_slope >= 0.0)) Invalid("outcome.slope", "must be non-negative");
  if (!(noise_std >= 0.0)) Invalid("outcome.noise_std", "must be non-negative");
}

GeneratorConfig ParseGeneratorConfig(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("generator config: ") + e.what());
  }
  GeneratorConfig cfg;
  const long long n = Field<long long>(j, "N", "");
  if (n < 2) Invalid("N", "must be at least 2");
  cfg.n = static_cast<std::size_t>(n);
  cfg.seed = Field<std::uint64_t>(j, "seed", "");
  const Json scores = Field<Json>(j, "scores", "");
  for (std::size_t s = 0; s < scores.size(); ++s) {
    const std::string path = "scores[" + std::to_string(s) + "].";
    cfg.score_names.push_back(Field<std::string>(scores[s], "name", path));
    cfg.lower.push_back(Field<double>(scores[s], "lo", path));
    cfg.upper.push_back(Field<double>(scores[s], "hi", path));
  }
  const Json attrs = Field<Json>(j, "attributes", "");
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    const std::string path = "attributes[" + std::to_string(a) + "].";
    AttributeConfig ac;
    ac.name = Field<std::string>(attrs[a], "name", path);
    ac.prevalence = Field<double>(attrs[a], "prevalence", path);
    for (const auto& [label, g] :
         {std::pair{"designated", &ac.designated}, std::pair{"other", &ac.other}}) {
      const Json group = Field<Json>(attrs[a], label, path);
      const std::string gp = path + label + ".";
      g->mean = Field<std::vector<double>>(group, "mean", gp);
      g->stddev = Field<std::vector<double>>(group, "std", gp);
    }
    cfg.attributes.push_back(std::move(ac));
  }
  const Json outcome = Field<Json>(j, "outcome", "");
  cfg.outcome_intercept = Field<double>(outcome, "intercept", "outcome.");
  cfg.outcome_slope = Field<double>(outcome, "slope", "outcome.");
  cfg.outcome_weights =
      Field<std::vector<double>>(outcome, "weights", "outcome.");
  cfg.noise_std = Field<double>(outcome, "noise_std", "outcome.");
  cfg.Validate();
  return cfg;
}

std::string SerializeGeneratorConfig(const GeneratorConfig& cfg) {
  Json j;
  j["N"] = cfg.n;
  j["seed"] = cfg.seed;
  Json scores = Json::array();
  for (std::size_t s = 0; s < cfg.score_names.size(); ++s) {
    scores.push_back(
        {{"name", cfg.score_names[s]}, {"lo", cfg.lower[s]}, {"hi", cfg.upper[s]}});
  }
  j["scores"] = std::move(scores);
  Json attrs = Json::array();
  for (const AttributeConfig& a : cfg.attributes) {
    attrs.push_back({{"name", a.name},
                     {"prevalence", a.prevalence},
                     {"designated",
                      {{"mean", a.designated.mean}, {"std", a.designated.stddev}}},
                     {"other", {{"mean", a.other.mean}, {"std", a.other.stddev}}}});
  }
  j["attributes"] = std::move(attrs);
  j["outcome"] = {{"intercept", cfg.outcome_intercept},
                  {"slope", cfg.outcome_slope},
                  {"weights", cfg.outcome_weights},
                  {"noise_std", cfg.noise_std}};
  return j.dump(2) + "\n";
}

Population GeneratePopulation(const GeneratorConfig& cfg) {
  cfg.Validate();
  const std::size_t d = cfg.score_names.size();
  const std::size_t m = cfg.attributes.size();
  const WeightVector true_weights(cfg.outcome_weights);
  NormalSampler rng(cfg.seed);

  std::vector<Candidate> candidates;
  candidates.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Candidate c;
    c.id = static_cast<std::int64_t>(i + 1);
    for (const AttributeConfig& a : cfg.attributes) {
      c.attrs.push_back(rng.Uniform() < a.prevalence);
    }
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0;
      double sd = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        const GroupScoreParams& g =
            c.attrs[a] ? cfg.attributes[a].designated : cfg.attributes[a].other;
        mean += g.mean[j];
        sd += g.stddev[j];
      }
      mean /= static_cast<double>(m);
      sd /= static_cast<double>(m);
      c.scores.push_back(rng.TruncatedNormal(mean, sd, cfg.lower[j],
                                             cfg.upper[j], cfg.score_names[j]));
    }
    double y = cfg.outcome_intercept +
               cfg.outcome_slope * Dot(true_weights.values(), c.scores);
    if (cfg.noise_std > 0.0) y += cfg.noise_std * rng.Normal();
    c.outcome = y;
    candidates.push_back(std::move(c));
  }
  std::vector<std::string> names;
  for (const AttributeConfig& a : cfg.attributes) names.push_back(a.name);
  return Population(std::move(candidates), std::move(names), cfg.score_names);
}

Population MaskOutcomes(const Population& pop, const Selection& admitted) {
  std::vector<Candidate> out(pop.candidates().begin(), pop.candidates().end());
  for (Candidate& c : out) {
    if (!admitted.Contains(c.id)) c.outcome.reset();
  }
  return Population(std::move(out), pop.attribute_names(), pop.score_names());
}

}  // namespace fairadmit
