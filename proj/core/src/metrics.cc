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

#include "fairadmit/metrics.h"

#include <cmath>
#include <cstdio>

#include "fairadmit/error.h"
#include "json.hpp"

namespace fairadmit {

double Uos(const Selection& selection, const Population& pop,
           const OutcomeModel& model) {
  if (selection.admitted_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "UoS of an empty selection");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (const Candidate& c : pop.candidates()) {
    if (selection.Contains(c.id)) {
      sum += model.Predict(c.scores);
      ++count;
    }
  }
  if (count != selection.admitted_ids.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "selection contains ids outside the population");
  }
  return sum / static_cast<double>(count);
}

double Dmd(const Selection& selection, const Population& pop,
           const std::string& attr) {
  const std::size_t a = pop.AttributeIndex(attr);
  std::size_t admitted_designated = 0;
  std::size_t admitted_other = 0;
  for (const Candidate& c : pop.candidates()) {
    if (!selection.Contains(c.id)) continue;
    if (c.attrs[a]) {
      ++admitted_designated;
    } else {
      ++admitted_other;
    }
  }
  return static_cast<double>(admitted_designated) /
             static_cast<double>(pop.GroupSize(a, true)) -
         static_cast<double>(admitted_other) /
             static_cast<double>(pop.GroupSize(a, false));
}

double Objective(double uos, const std::map<std::string, double>& dmd,
                 const LambdaMap& lambda) {
  double phi = uos;
  for (const auto& [attr, l] : lambda) {
    if (!(l >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lambda for " + attr + " must be non-negative");
    }
    auto it = dmd.find(attr);
    if (it == dmd.end()) {
      throw Error(ErrorCode::kUnknownAttribute,
                  "no disparity value for attribute " + attr);
    }
    phi -= l * std::abs(it->second);
  }
  return phi;
}

EvalReport EvaluateSelection(Selection selection, const Population& pop,
                             const OutcomeModel& model,
                             const LambdaMap& lambda) {
  EvalReport r;
  r.uos = Uos(selection, pop, model);
  for (const std::string& attr : pop.attribute_names()) {
    r.dmd[attr] = Dmd(selection, pop, attr);
  }
  r.objective = Objective(r.uos, r.dmd, lambda);
  r.lambda = lambda;
  r.selection = std::move(selection);
  return r;
}

EvalReport Evaluate(const Policy& policy, const Population& pop,
                    const OutcomeModel& model, const LambdaMap& lambda) {
  return EvaluateSelection(Admit(policy, pop), pop, model, lambda);
}

std::string FormatReal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string ReportToJson(const EvalReport& report) {
  // Reals go through FormatReal so the JSON carries the same 9 digits as
  // the CSV output.
  nlohmann::ordered_json j;
  auto real = [](double v) {
    return nlohmann::ordered_json::parse(std::isfinite(v) ? FormatReal(v)
                                                          : "null");
  };
  j["uos"] = real(report.uos);
  nlohmann::ordered_json dmd = nlohmann::ordered_json::object();
  for (const auto& [a, v] : report.dmd) dmd[a] = real(v);
  j["dmd"] = std::move(dmd);
  nlohmann::ordered_json lambda = nlohmann::ordered_json::object();
  for (const auto& [a, v] : report.lambda) lambda[a] = real(v);
  j["lambda"] = std::move(lambda);
  j["objective"] = real(report.objective);
  j["admitted"] = report.selection.k;
  j["theta_effective"] = real(report.selection.theta_effective);
  j["admitted_ids"] = report.selection.admitted_ids;
  return j.dump(2) + "\n";
}

std::string ReportCsvHeader(const std::vector<std::string>& attrs) {
  std::string h = "uos";
  for (const std::string& a : attrs) h += ",dmd_" + a;
  h += ",objective,admitted";
  return h;
}

std::string ReportCsvRow(const EvalReport& report,
                         const std::vector<std::string>& attrs) {
  std::string row = FormatReal(report.uos);
  for (const std::string& a : attrs) {
    auto it = report.dmd.find(a);
    if (it == report.dmd.end()) {
      throw Error(ErrorCode::kUnknownAttribute, "no disparity value for " + a);
    }
    row += "," + FormatReal(it->second);
  }
  row += "," + FormatReal(report.objective);
  row += "," + std::to_string(report.selection.k);
  return row;
}

}  // namespace fairadmit
