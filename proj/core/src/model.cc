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

#include "fairadmit/model.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fairadmit/error.h"

namespace fairadmit {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kMissingColumn: return "missing_column";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kEmptyGroup: return "empty_group";
    case ErrorCode::kUnknownAttribute: return "unknown_attribute";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNotCalibrated: return "not_calibrated";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kUnreachable: return "unreachable";
    case ErrorCode::kInternal: return "internal";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Population::Population(std::vector<Candidate> candidates,
                       std::vector<std::string> attribute_names,
                       std::vector<std::string> score_names)
    : candidates_(std::move(candidates)),
      attribute_names_(std::move(attribute_names)),
      score_names_(std::move(score_names)) {
  std::sort(candidates_.begin(), candidates_.end(),
            [](const Candidate& a, const Candidate& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < candidates_.size(); ++i) {
    if (candidates_[i].id == candidates_[i - 1].id) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate candidate id " +
                      std::to_string(candidates_[i].id));
    }
  }
  std::set<std::string> seen(attribute_names_.begin(), attribute_names_.end());
  if (seen.size() != attribute_names_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate attribute name");
  }
  designated_counts_.assign(attribute_names_.size(), 0);
  for (const Candidate& c : candidates_) {
    if (c.id < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative candidate id " + std::to_string(c.id));
    }
    if (c.scores.size() != score_names_.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "candidate " + std::to_string(c.id) + " has " +
                      std::to_string(c.scores.size()) + " scores, expected " +
                      std::to_string(score_names_.size()));
    }
    if (c.attrs.size() != attribute_names_.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "candidate " + std::to_string(c.id) +
                      " has the wrong number of attributes");
    }
    for (std::size_t a = 0; a < c.attrs.size(); ++a) {
      if (c.attrs[a]) ++designated_counts_[a];
    }
  }
  for (std::size_t a = 0; a < attribute_names_.size(); ++a) {
    if (designated_counts_[a] == 0 ||
        designated_counts_[a] == candidates_.size()) {
      throw Error(ErrorCode::kEmptyGroup,
                  "attribute " + attribute_names_[a] + " has an empty group");
    }
  }
}

std::size_t Population::AttributeIndex(const std::string& name) const {
  auto it = std::find(attribute_names_.begin(), attribute_names_.end(), name);
  if (it == attribute_names_.end()) {
    throw Error(ErrorCode::kUnknownAttribute, "unknown attribute " + name);
  }
  return static_cast<std::size_t>(it - attribute_names_.begin());
}

bool Population::HasAttribute(const std::string& name) const {
  return std::find(attribute_names_.begin(), attribute_names_.end(), name) !=
         attribute_names_.end();
}

std::size_t Population::GroupSize(std::size_t attr, bool designated) const {
  return designated ? designated_counts_.at(attr)
                    : candidates_.size() - designated_counts_.at(attr);
}

std::size_t Population::ObservedOutcomes() const {
  return static_cast<std::size_t>(
      std::count_if(candidates_.begin(), candidates_.end(),
                    [](const Candidate& c) { return c.outcome.has_value(); }));
}

Population Population::Scaled(double factor) const {
  std::vector<Candidate> scaled = candidates_;
  for (Candidate& c : scaled) {
    for (double& x : c.scores) x *= factor;
  }
  return Population(std::move(scaled), attribute_names_, score_names_);
}

EmpiricalDist::EmpiricalDist(std::vector<double> values)
    : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty distribution");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDist::Cdf(double s) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), s);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalDist::InverseCdf(double beta) const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "inverse_cdf level must lie in (0, 1]");
  }
  // Cdf at sorted_[i] is at least (i + 1) / n; it reaches beta first at the
  // smallest i with (i + 1) / n >= beta, computed with the same division that
  // Cdf uses so that InverseCdf(Cdf(v)) == v holds exactly.
  const std::size_t n = sorted_.size();
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (Cdf(sorted_[mid]) >= beta) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return sorted_[lo];
}

double Dot(std::span<const double> w, std::span<const double> x) {
  if (w.size() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight vector has length " + std::to_string(w.size()) +
                    ", scores have length " + std::to_string(x.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

EmpiricalDist GroupScoreDist(const Population& pop, const std::string& attr,
                             bool designated, std::span<const double> w) {
  const std::size_t a = pop.AttributeIndex(attr);
  if (w.size() != pop.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight vector does not match population dimension");
  }
  std::vector<double> values;
  values.reserve(pop.GroupSize(a, designated));
  for (const Candidate& c : pop.candidates()) {
    if (c.attrs[a] == designated) values.push_back(Dot(w, c.scores));
  }
  return EmpiricalDist(std::move(values));
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line,
                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string Trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void RowError(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

double ParseReal(const std::string& text, std::size_t line_no,
                 const std::string& column) {
  const std::string s = Trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    RowError(line_no, "column " + column + ": '" + text + "' is not a number");
  }
  return value;
}

}  // namespace

Population LoadPopulation(std::istream& in, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (Trim(line).empty()) continue;
    header = SplitCsvLine(line, line_no);
    break;
  }
  if (header.empty()) {
    throw Error(ErrorCode::kParse, "missing header row");
  }
  for (std::string& h : header) h = Trim(h);

  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column_index.emplace(header[i], i).second) {
      throw Error(ErrorCode::kParse, "duplicate column " + header[i]);
    }
  }
  auto require = [&](const std::string& name) {
    auto it = column_index.find(name);
    if (it == column_index.end()) {
      throw Error(ErrorCode::kMissingColumn, "missing column " + name);
    }
    return it->second;
  };

  const std::size_t id_col = require(schema.id_column);
  std::vector<std::size_t> attr_cols;
  for (const std::string& a : schema.attribute_columns) {
    attr_cols.push_back(require(a));
  }
  std::optional<std::size_t> outcome_col;
  if (!schema.outcome_column.empty()) {
    outcome_col = require(schema.outcome_column);
  } else if (column_index.count("outcome") != 0) {
    outcome_col = column_index.at("outcome");
  }

  std::vector<std::string> score_names = schema.score_columns;
  if (score_names.empty()) {
    std::unordered_set<std::size_t> reserved(attr_cols.begin(),
                                             attr_cols.end());
    reserved.insert(id_col);
    if (outcome_col) reserved.insert(*outcome_col);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (reserved.count(i) == 0) score_names.push_back(header[i]);
    }
  }
  std::vector<std::size_t> score_cols;
  for (const std::string& s : score_names) score_cols.push_back(require(s));
  if (score_cols.empty()) {
    throw Error(ErrorCode::kMissingColumn, "no score columns");
  }

  std::vector<Candidate> candidates;
  std::map<std::int64_t, std::size_t> first_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitCsvLine(line, line_no);
    if (fields.size() != header.size()) {
      RowError(line_no, "expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()));
    }
    Candidate c;
    {
      const std::string s = Trim(fields[id_col]);
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), c.id);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
          c.id < 0) {
        RowError(line_no, "id '" + fields[id_col] +
                              "' is not a non-negative integer");
      }
    }
    auto [it, inserted] = first_line.emplace(c.id, line_no);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id " +
                      std::to_string(c.id) + " (first seen on line " +
                      std::to_string(it->second) + ")");
    }
    for (std::size_t a = 0; a < attr_cols.size(); ++a) {
      const std::string v = Trim(fields[attr_cols[a]]);
      if (v == "1" || (!schema.designated_label.empty() &&
                       v == schema.designated_label)) {
        c.attrs.push_back(true);
      } else if (v == "0" ||
                 (!schema.other_label.empty() && v == schema.other_label)) {
        c.attrs.push_back(false);
      } else {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": attribute column " +
                        schema.attribute_columns[a] + " is not binary ('" + v +
                        "')");
      }
    }
    for (std::size_t s = 0; s < score_cols.size(); ++s) {
      c.scores.push_back(
          ParseReal(fields[score_cols[s]], line_no, score_names[s]));
    }
    if (outcome_col && !Trim(fields[*outcome_col]).empty()) {
      c.outcome = ParseReal(fields[*outcome_col], line_no, header[*outcome_col]);
    }
    candidates.push_back(std::move(c));
  }
  return Population(std::move(candidates), schema.attribute_columns,
                    std::move(score_names));
}

Population LoadPopulationFile(const std::string& path,
                              const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return LoadPopulation(in, schema);
}

std::string FormatRoundTrip(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WritePopulation(std::ostream& out, const Population& pop) {
  const bool has_outcome = pop.ObservedOutcomes() > 0;
  out << "id";
  for (const std::string& a : pop.attribute_names()) out << ',' << a;
  for (const std::string& s : pop.score_names()) out << ',' << s;
  if (has_outcome) out << ",outcome";
  out << '\n';
  for (const Candidate& c : pop.candidates()) {
    out << c.id;
    for (bool a : c.attrs) out << ',' << (a ? '1' : '0');
    for (double x : c.scores) out << ',' << FormatRoundTrip(x);
    if (has_outcome) {
      out << ',';
      if (c.outcome) out << FormatRoundTrip(*c.outcome);
    }
    out << '\n';
  }
}

}  // namespace fairadmit
