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

#ifndef FAIRADMIT_METRICS_H_
#define FAIRADMIT_METRICS_H_

#include <map>
#include <string>
#include <vector>

#include "fairadmit/fit.h"
#include "fairadmit/model.h"
#include "fairadmit/policies.h"

namespace fairadmit {

using LambdaMap = std::map<std::string, double>;

struct EvalReport {
  double uos = 0.0;
  // Keyed by attribute name, for every attribute of the population.
  std::map<std::string, double> dmd;
  double objective = 0.0;
  LambdaMap lambda;
  Selection selection;
};

// Mean predicted outcome over the admitted candidates.
double Uos(const Selection& selection, const Population& pop,
           const OutcomeModel& model);

// Admission rate of the designated group minus that of the other group.
double Dmd(const Selection& selection, const Population& pop,
           const std::string& attr);

// uos - sum_i lambda_i * |dmd_i|. Attributes missing from `dmd` are an error;
// attributes missing from `lambda` carry no penalty.
double Objective(double uos, const std::map<std::string, double>& dmd,
                 const LambdaMap& lambda);

EvalReport EvaluateSelection(Selection selection, const Population& pop,
                             const OutcomeModel& model,
                             const LambdaMap& lambda);

EvalReport Evaluate(const Policy& policy, const Population& pop,
                    const OutcomeModel& model, const LambdaMap& lambda);

// Reports use 9 significant digits.
std::string FormatReal(double value);
std::string ReportToJson(const EvalReport& report);
// Header and row share the attribute order of `attrs`.
std::string ReportCsvHeader(const std::vector<std::string>& attrs);
std::string ReportCsvRow(const EvalReport& report,
                         const std::vector<std::string>& attrs);

}  // namespace fairadmit

#endif  // FAIRADMIT_METRICS_H_
