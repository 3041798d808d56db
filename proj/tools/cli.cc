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

#include "cli.h"

#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fairadmit/baselines.h"
#include "fairadmit/error.h"
#include "fairadmit/fit.h"
#include "fairadmit/model.h"
#include "fairadmit/policies.h"
#include "fairadmit/search.h"
#include "json.hpp"

#ifndef FAIRADMIT_VERSION
#define FAIRADMIT_VERSION "unknown"
#endif

namespace fairadmit::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string out;
  std::string config;
  std::string model;
  std::string policy;
  std::string report;
  std::string first;
  std::string second;
  std::string mode = "bonus";
  std::string format = "csv";
  std::string directions = "all";
  std::vector<std::string> attrs;
  std::vector<std::string> lambdas;
  double theta = 0.3;
  std::size_t grid_k = 100;
  double step_angle = 0.05;
  std::size_t steps = 10;
  double increment = 1.0;
  std::size_t max_steps = 1000;
  double alpha = 0.1;
  double rho = 0.5;
  std::optional<std::uint64_t> seed;
  // CSV layout.
  std::string id_column = "id";
  std::vector<std::string> attr_columns;
  std::vector<std::string> score_columns;
  std::string outcome_column;
  std::string designated_label;
  std::string other_label;
};

// Everything a command produces, written only after it has fully succeeded.
struct RunOutput {
  std::string primary;
  // Secondary files such as --report.
  std::vector<std::pair<std::string, std::string>> extra;
  std::vector<std::string> inputs;
  std::string config_text;
  std::string summary;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

std::string SingleAttr(const Options& o) {
  Require(o.attrs.size() == 1, "exactly one --attr is required");
  return o.attrs.front();
}

CsvSchema Schema(const Options& o) {
  CsvSchema s;
  s.id_column = o.id_column;
  s.attribute_columns = o.attr_columns;
  if (s.attribute_columns.empty()) {
    s.attribute_columns = o.attrs;
    for (const std::string& e : o.lambdas) {
      const auto eq = e.find('=');
      if (eq == std::string::npos) continue;
      const std::string name = e.substr(0, eq);
      if (std::find(s.attribute_columns.begin(), s.attribute_columns.end(),
                    name) == s.attribute_columns.end()) {
        s.attribute_columns.push_back(name);
      }
    }
  }
  s.score_columns = o.score_columns;
  s.outcome_column = o.outcome_column;
  s.designated_label = o.designated_label;
  s.other_label = o.other_label;
  return s;
}

Population LoadInput(const Options& o, RunOutput& run) {
  Require(!o.input.empty(), "--input is required");
  run.inputs.push_back(o.input);
  return LoadPopulationFile(o.input, Schema(o));
}

OutcomeModel LoadOrFitModel(const Options& o, const Population& pop,
                            RunOutput& run) {
  if (!o.model.empty()) {
    run.inputs.push_back(o.model);
    OutcomeModel m = ParseModel(ReadFile(o.model));
    if (m.weights.size() != pop.dimension()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "model has " + std::to_string(m.weights.size()) +
                      " weights but the population has " +
                      std::to_string(pop.dimension()) + " scores");
    }
    return m;
  }
  if (pop.ObservedOutcomes() == 0) {
    throw Error(ErrorCode::kInsufficientData,
                "no outcome data and no model supplied (use --model)");
  }
  FitResult fit = FitOutcomeModel(pop);
  for (const std::string& w : fit.warnings) spdlog::warn("fit: {}", w);
  return fit.model;
}

Policy LoadPolicy(const std::string& path, const Population& pop,
                  RunOutput& run) {
  run.inputs.push_back(path);
  std::vector<std::string> names;
  Policy p = ParsePolicy(ReadFile(path), &names);
  if (names != pop.score_names()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "policy " + path + " was built for different score columns");
  }
  return p;
}

std::string ReportText(const EvalReport& r, const Options& o,
                       const Population& pop) {
  if (o.format == "json") return ReportToJson(r);
  const std::vector<std::string>& attrs =
      o.attrs.empty() ? pop.attribute_names() : o.attrs;
  return ReportCsvHeader(attrs) + "\n" + ReportCsvRow(r, attrs) + "\n";
}

std::string Summary(const EvalReport& r) {
  std::string s = "uos=" + FormatReal(r.uos);
  for (const auto& [name, v] : r.dmd) s += " dmd_" + name + "=" + FormatReal(v);
  return s + " objective=" + FormatReal(r.objective) +
         " admitted=" + std::to_string(r.selection.admitted_ids.size());
}

void EmitSearch(const SearchResult& r, const Population& pop, const Options& o,
                RunOutput& run) {
  run.primary = SerializePolicy(r.policy, pop.score_names());
  if (!o.report.empty()) run.extra.emplace_back(o.report, ReportText(r.report, o, pop));
  for (const std::string& note : r.notes) spdlog::info("{}", note);
  run.summary = Summary(r.report);
}

RotationPlan ParsePlan(const Options& o, std::size_t d) {
  RotationPlan plan;
  if (o.directions == "all") {
    plan = RotationPlan::AllPlanes(d, o.step_angle, o.steps);
  } else if (o.directions != "none") {
    std::stringstream in(o.directions);
    std::string item;
    while (std::getline(in, item, ',')) {
      const bool forward = item.find("->") != std::string::npos;
      const auto pos = item.find(forward ? "->" : "<-");
      Require(pos != std::string::npos, "bad rotation direction '" + item + "'");
      RotationDirection dir;
      try {
        dir.i = std::stoul(item.substr(0, pos));
        dir.j = std::stoul(item.substr(pos + 2));
      } catch (const std::exception&) {
        Require(false, "bad rotation direction '" + item + "'");
      }
      dir.sign = forward ? +1 : -1;
      plan.directions.push_back(dir);
    }
  }
  plan.step_angle = o.step_angle;
  plan.steps = o.steps;
  plan.Validate(d);
  return plan;
}

// --- commands -------------------------------------------------------------

void Simulate(const Options& o, RunOutput& run) {
  Require(!o.config.empty(), "--config is required");
  run.inputs.push_back(o.config);
  run.config_text = ReadFile(o.config);
  GeneratorConfig cfg = ParseGeneratorConfig(run.config_text);
  if (o.seed) cfg.seed = *o.seed;
  std::ostringstream csv;
  WritePopulation(csv, GeneratePopulation(cfg));
  run.primary = csv.str();
  run.summary = "generated " + std::to_string(cfg.n) + " candidates";
}

void Fit(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const FitResult fit = FitOutcomeModel(pop);
  for (const std::string& w : fit.warnings) spdlog::warn("fit: {}", w);
  run.primary = SerializeModel(fit.model, pop.score_names());
  run.summary = "intercept=" + FormatReal(fit.model.intercept) +
                " slope=" + FormatReal(fit.model.slope);
}

void EvaluateCmd(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  Require(!o.policy.empty(), "--policy is required");
  Policy p = LoadPolicy(o.policy, pop, run);
  if (!IsCalibrated(p)) p = CalibrateTopK(p, pop, o.theta);
  const EvalReport r = Evaluate(p, pop, m, ParseLambda(o.lambdas, o.attrs));
  run.primary = ReportText(r, o, pop);
  run.summary = Summary(r);
}

void SearchCoeffs(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  EmitSearch(SearchCoefficients(pop, m, o.theta, ParseLambda(o.lambdas, o.attrs),
                                ParsePlan(o, pop.dimension())),
             pop, o, run);
}

void SearchBonusCmd(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  const std::string attr = SingleAttr(o);
  EmitSearch(SearchBonus(pop, m, o.theta, ParseLambda(o.lambdas, o.attrs), attr,
                         BonusSearchConfig{o.grid_k}),
             pop, o, run);
}

void SearchBonusMultiCmd(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  EmitSearch(SearchBonusMulti(pop, m, o.theta, ParseLambda(o.lambdas, o.attrs),
                              GreedyConfig{o.increment, o.max_steps}),
             pop, o, run);
}

void BonusToQuotaCmd(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  Require(!o.policy.empty(), "--policy is required");
  const Policy p = LoadPolicy(o.policy, pop, run);
  const auto* bonus = std::get_if<BonusPolicy>(&p);
  Require(bonus != nullptr, "--policy must be a bonus policy");
  BonusPolicy calibrated = *bonus;
  if (!IsCalibrated(p)) {
    calibrated = std::get<BonusPolicy>(CalibrateTopK(p, pop, o.theta));
  }
  const QuotaPolicy q = BonusToQuota(calibrated, pop, o.theta);
  run.primary = SerializePolicy(q, pop.score_names());
  run.summary = "quota=" + FormatReal(q.fraction);
}

void QuotaToBonusCmd(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  Require(!o.policy.empty(), "--policy is required");
  Policy p = LoadPolicy(o.policy, pop, run);
  Require(std::holds_alternative<QuotaPolicy>(p), "--policy must be a quota policy");
  if (!IsCalibrated(p)) p = CalibrateTopK(p, pop, o.theta);
  const BonusPolicy b = QuotaToBonus(std::get<QuotaPolicy>(p), pop, o.theta);
  run.primary = SerializePolicy(b, pop.score_names());
  run.summary = "bonus=" + FormatReal(b.bonuses.at(0).amount);
}

void BaselineMedian(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  std::ostringstream csv;
  WritePopulation(csv, MedianRepair(pop, SingleAttr(o)));
  run.primary = csv.str();
  run.summary = "repaired " + std::to_string(pop.size()) + " candidates";
}

FairRankingConfig FairConfig(const Options& o) { return {o.alpha, o.rho}; }

void BaselineFair(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  const FairRanking r = FairRerank(pop, m.weights, o.theta, SingleAttr(o), FairConfig(o));
  if (o.format == "json") {
    Json j;
    j["admitted"] = r.selection.admitted_ids;
    j["required"] = r.required;
    run.primary = j.dump(2) + "\n";
  } else {
    run.primary = RankingToCsv(r);
  }
  run.summary = "admitted " + std::to_string(r.selection.admitted_ids.size());
}

// A selection named on the command line: a policy file or a baseline.
Selection ResolveSelection(const std::string& source, const Population& pop,
                           const OutcomeModel& m, const Options& o,
                           RunOutput& run) {
  const std::string attr = SingleAttr(o);
  if (source == "median") {
    const Population repaired = MedianRepair(pop, attr);
    return Admit(CalibrateTopK(CoefficientsPolicy{m.weights, 0, {}}, repaired, o.theta),
                 repaired);
  }
  if (source == "fair") {
    return FairRerank(pop, m.weights, o.theta, attr, FairConfig(o)).selection;
  }
  if (source == "min-disparity") {
    return Admit(MinDisparityBonus(pop, m.weights, o.theta, attr), pop);
  }
  Policy p = LoadPolicy(source, pop, run);
  if (!IsCalibrated(p)) p = CalibrateTopK(p, pop, o.theta);
  return Admit(p, pop);
}

void Compare(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  Require(!o.first.empty() && !o.second.empty(), "--first and --second are required");
  const Selection a = ResolveSelection(o.first, pop, m, o, run);
  const Selection b = ResolveSelection(o.second, pop, m, o, run);
  const SelectionComparison cmp = CompareSelections(a, b, pop, SingleAttr(o), m);
  run.primary = ComparisonToJson(cmp);
  run.summary = std::string(cmp.equal ? "identical" : "different") + " selections";
}

void Frontier(const Options& o, RunOutput& run) {
  const Population pop = LoadInput(o, run);
  const OutcomeModel m = LoadOrFitModel(o, pop, run);
  const std::vector<std::string>& attrs =
      o.attrs.empty() ? pop.attribute_names() : o.attrs;

  // One objective column per distinct requested lambda value, applied to
  // every reported attribute.
  std::vector<double> levels;
  for (const std::string& e : o.lambdas) {
    const auto eq = e.find('=');
    const LambdaMap one = ParseLambda({eq == std::string::npos ? e : e.substr(eq + 1)},
                                      {"_"});
    const double v = one.at("_");
    if (std::find(levels.begin(), levels.end(), v) == levels.end()) levels.push_back(v);
  }
  if (levels.empty()) levels.push_back(0.0);

  SearchResult result = [&] {
    if (o.mode == "bonus") {
      Require(!attrs.empty(), "bonus mode needs --attr");
      return SearchBonus(pop, m, o.theta, {}, attrs.front(), BonusSearchConfig{o.grid_k});
    }
    Require(o.mode == "coefficients", "--mode must be bonus or coefficients");
    return SearchCoefficients(pop, m, o.theta, {}, ParsePlan(o, pop.dimension()));
  }();

  std::vector<std::string> header{"label", "param", "uos"};
  for (const std::string& a : attrs) header.push_back("dmd_" + a);
  for (double v : levels) header.push_back("phi_" + FormatReal(v));
  header.push_back("quota");

  std::vector<std::vector<std::string>> rows;
  for (const FrontierPoint& p : result.frontier) {
    std::vector<std::string> row{p.label, FormatReal(p.parameter), FormatReal(p.report.uos)};
    LambdaMap dmd;
    for (const std::string& a : attrs) {
      const double d = p.report.dmd.at(a);
      dmd[a] = d;
      row.push_back(FormatReal(d));
    }
    for (double v : levels) {
      LambdaMap lambda;
      for (const std::string& a : attrs) lambda[a] = v;
      row.push_back(FormatReal(Objective(p.report.uos, dmd, lambda)));
    }
    if (const auto* b = std::get_if<BonusPolicy>(&p.policy)) {
      row.push_back(FormatReal(BonusToQuota(*b, pop, o.theta).fraction));
    } else {
      row.emplace_back();
    }
    rows.push_back(std::move(row));
  }

  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json obj;
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == 0) {
          obj[header[c]] = row[c];
        } else if (row[c].empty()) {
          obj[header[c]] = nullptr;
        } else {
          obj[header[c]] = Json::parse(row[c]);
        }
      }
      arr.push_back(std::move(obj));
    }
    run.primary = arr.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    for (std::size_t c = 0; c < header.size(); ++c) csv << (c ? "," : "") << header[c];
    csv << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << row[c];
      csv << '\n';
    }
    run.primary = csv.str();
  }
  run.summary = std::to_string(rows.size()) + " frontier points";
}

// --- output handling ------------------------------------------------------

std::string Hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

// Writes every file through a temporary sibling and renames it into place.
// On any failure, files already placed by this run are removed again.
void WriteAll(const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  std::vector<fs::path> placed;
  auto cleanup = [&] {
    std::error_code ec;
    for (const fs::path& p : temps) fs::remove(p, ec);
    for (const fs::path& p : placed) fs::remove(p, ec);
  };
  try {
    for (const auto& [path, content] : files) {
      fs::path tmp = path + ".tmp." + std::to_string(::getpid());
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::error_code ec;
      fs::rename(temps[i], files[i].first, ec);
      if (ec) throw Error(ErrorCode::kIo, "cannot write " + files[i].first + ": " + ec.message());
      placed.push_back(files[i].first);
    }
  } catch (...) {
    cleanup();
    throw;
  }
}

std::string Manifest(const std::string& command, const Options& o,
                     const RunOutput& run, const std::vector<std::string>& outputs,
                     const std::string& effective_config) {
  Json j;
  j["command"] = command;
  j["inputs"] = run.inputs;
  j["theta"] = o.theta;
  Json lambda = Json::object();
  for (const auto& [k, v] : ParseLambda(o.lambdas, o.attrs)) lambda[k] = v;
  j["lambda"] = lambda;
  if (o.seed) {
    j["seed"] = *o.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["config_digest"] = Hex(Fnv1a(effective_config + run.config_text));
  j["outputs"] = outputs;
  j["version"] = FAIRADMIT_VERSION;
  return j.dump(2) + "\n";
}

void ConfigureLogging() {
  static bool done = [] {
    auto logger = spdlog::stderr_color_mt("fairadmit");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    spdlog::cfg::load_env_levels();
    return true;
  }();
  (void)done;
}

}  // namespace

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

LambdaMap ParseLambda(const std::vector<std::string>& entries,
                      const std::vector<std::string>& attrs) {
  LambdaMap out;
  for (const std::string& e : entries) {
    const auto eq = e.find('=');
    const std::string value = eq == std::string::npos ? e : e.substr(eq + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "bad --lambda value '" + e + "'");
    }
    if (v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "--lambda must be non-negative: '" + e + "'");
    }
    if (eq != std::string::npos) {
      Require(eq > 0, "bad --lambda value '" + e + "'");
      out[e.substr(0, eq)] = v;
      continue;
    }
    Require(!attrs.empty(), "a bare --lambda value needs at least one --attr");
    for (const std::string& a : attrs) out[a] = v;
  }
  return out;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ConfigureLogging();
  Options o;
  CLI::App app{"Design, calibrate and search affirmative-action admission policies",
               "fairadmit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FAIRADMIT_VERSION);

  using Handler = std::function<void(const Options&, RunOutput&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--out", o.out, "Output path (stdout when omitted)");
    commands.emplace_back(sub, std::move(h));
    return sub;
  };
  auto schema = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Population CSV");
    sub->add_option("--id-column", o.id_column, "Identifier column");
    sub->add_option("--attr-columns", o.attr_columns,
                    "Binary attribute columns (default: --attr and --lambda names)")
        ->delimiter(',');
    sub->add_option("--score-columns", o.score_columns,
                    "Score columns (default: all remaining columns)")
        ->delimiter(',');
    sub->add_option("--outcome-column", o.outcome_column, "Observed outcome column");
    sub->add_option("--designated-label", o.designated_label,
                    "Text accepted as 1 in attribute columns");
    sub->add_option("--other-label", o.other_label,
                    "Text accepted as 0 in attribute columns");
  };
  auto theta = [&](CLI::App* sub) {
    sub->add_option("--theta", o.theta, "Admitted fraction")->check(CLI::Range(0.0, 1.0));
  };
  auto lambda = [&](CLI::App* sub) {
    sub->add_option("--lambda", o.lambdas,
                    "Disparity weight ATTR=FLOAT, or FLOAT for every --attr");
  };
  auto attr = [&](CLI::App* sub) {
    sub->add_option("--attr", o.attrs, "Sensitive attribute");
  };
  auto model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "Outcome model JSON (default: fit inline)");
  };
  auto format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto analysis = [&](CLI::App* sub) {
    schema(sub);
    theta(sub);
    lambda(sub);
    attr(sub);
    model(sub);
  };

  CLI::App* simulate = add("simulate", "Generate a synthetic population", Simulate);
  simulate->add_option("--config", o.config, "Generator configuration JSON");
  simulate->add_option("--seed", o.seed, "Override the configured seed");

  schema(add("fit", "Fit the outcome model", Fit));

  CLI::App* evaluate = add("evaluate", "Evaluate a policy", EvaluateCmd);
  analysis(evaluate);
  format(evaluate);
  evaluate->add_option("--policy", o.policy, "Policy JSON");

  auto report = [&](CLI::App* sub) {
    analysis(sub);
    format(sub);
    sub->add_option("--report", o.report, "Also write the evaluation report here");
  };
  CLI::App* coeffs = add("search-coeffs", "Rotation search over score weights", SearchCoeffs);
  report(coeffs);
  coeffs->add_option("--step-angle", o.step_angle, "Rotation step in radians");
  coeffs->add_option("--steps", o.steps, "Rotations per direction");
  coeffs->add_option("--directions", o.directions,
                     "all, none, or a list like 0->1,0<-1");

  CLI::App* bonus = add("search-bonus", "Grid search for a single-attribute bonus",
                        SearchBonusCmd);
  report(bonus);
  bonus->add_option("--grid-k", o.grid_k, "Grid granularity");

  CLI::App* multi = add("search-bonus-multi", "Greedy multi-attribute bonus search",
                        SearchBonusMultiCmd);
  report(multi);
  multi->add_option("--increment", o.increment, "Bonus increment per step");
  multi->add_option("--max-steps", o.max_steps, "Step limit");

  for (auto [name, help, fn] :
       {std::tuple{"bonus-to-quota", "Equivalent quota policy of a bonus policy",
                   Handler(BonusToQuotaCmd)},
        std::tuple{"quota-to-bonus", "Smallest bonus matching a quota policy",
                   Handler(QuotaToBonusCmd)}}) {
    CLI::App* sub = add(name, help, fn);
    schema(sub);
    theta(sub);
    sub->add_option("--policy", o.policy, "Policy JSON");
  }

  CLI::App* median = add("baseline-median", "Quantile repair of the scores", BaselineMedian);
  schema(median);
  attr(median);

  auto fair_params = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "Significance of the prefix test");
    sub->add_option("--rho", o.rho, "Target protected proportion");
  };
  CLI::App* fair = add("baseline-fair", "Prefix-constrained fair re-ranking", BaselineFair);
  analysis(fair);
  format(fair);
  fair_params(fair);

  CLI::App* compare = add("compare", "Compare two selections", Compare);
  analysis(compare);
  fair_params(compare);
  compare->add_option("--first", o.first,
                      "Policy JSON, or one of median, fair, min-disparity");
  compare->add_option("--second", o.second, "Same forms as --first");

  CLI::App* frontier = add("frontier", "Emit one row per evaluated grid point", Frontier);
  report(frontier);
  frontier->add_option("--mode", o.mode, "bonus or coefficients")
      ->check(CLI::IsMember({"bonus", "coefficients"}));
  frontier->add_option("--grid-k", o.grid_k, "Grid granularity");
  frontier->add_option("--step-angle", o.step_angle, "Rotation step in radians");
  frontier->add_option("--steps", o.steps, "Rotations per direction");
  frontier->add_option("--directions", o.directions, "all, none, or a list like 0->1");

  std::vector<const char*> argv{"fairadmit"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    const std::string name = sub->get_name();
    try {
      RunOutput run;
      handler(o, run);
      if (o.out.empty()) {
        out << run.primary;
        for (const auto& [path, content] : run.extra) WriteAll({{path, content}});
        if (!run.summary.empty()) spdlog::info("{}: {}", name, run.summary);
        return 0;
      }
      std::vector<std::pair<std::string, std::string>> files{{o.out, run.primary}};
      files.insert(files.end(), run.extra.begin(), run.extra.end());
      std::vector<std::string> outputs;
      for (const auto& f : files) outputs.push_back(f.first);
      files.emplace_back(o.out + ".manifest.json",
                         Manifest(name, o, run, outputs, sub->config_to_str(true, false)));
      WriteAll(files);
      if (!run.summary.empty()) out << name << ": " << run.summary << '\n';
      return 0;
    } catch (const Error& e) {
      err << "fairadmit " << name << ": " << ErrorCodeName(e.code()) << " error: "
          << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      err << "fairadmit " << name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 1;
}

}  // namespace fairadmit::cli
