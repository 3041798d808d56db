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

#ifndef FAIRADMIT_MODEL_H_
#define FAIRADMIT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fairadmit {

// One applicant. `attrs[i]` is true when the candidate belongs to the
// designated group of the population's i-th attribute.
struct Candidate {
  std::int64_t id = 0;
  std::vector<bool> attrs;
  std::vector<double> scores;
  std::optional<double> outcome;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Immutable, validated candidate collection ordered by ascending id. Every
// attribute splits the candidates into two non-empty groups.
class Population {
 public:
  Population(std::vector<Candidate> candidates,
             std::vector<std::string> attribute_names,
             std::vector<std::string> score_names);

  std::span<const Candidate> candidates() const { return candidates_; }
  const Candidate& operator[](std::size_t i) const { return candidates_[i]; }
  std::size_t size() const { return candidates_.size(); }
  std::size_t dimension() const { return score_names_.size(); }

  const std::vector<std::string>& attribute_names() const {
    return attribute_names_;
  }
  const std::vector<std::string>& score_names() const { return score_names_; }

  // Throws kUnknownAttribute.
  std::size_t AttributeIndex(const std::string& name) const;
  bool HasAttribute(const std::string& name) const;

  std::size_t GroupSize(std::size_t attr, bool designated) const;

  // Number of candidates with an observed outcome.
  std::size_t ObservedOutcomes() const;

  // Copy with every score dimension multiplied by `factor`.
  Population Scaled(double factor) const;

 private:
  std::vector<Candidate> candidates_;
  std::vector<std::string> attribute_names_;
  std::vector<std::string> score_names_;
  std::vector<std::size_t> designated_counts_;
};

// Empirical distribution over a finite sample.
class EmpiricalDist {
 public:
  explicit EmpiricalDist(std::vector<double> values);

  std::span<const double> sorted_values() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

  // Fraction of values <= s.
  double Cdf(double s) const;

  // Smallest sample value v with Cdf(v) >= beta; beta must lie in (0, 1].
  double InverseCdf(double beta) const;

 private:
  std::vector<double> sorted_;
};

double Dot(std::span<const double> w, std::span<const double> x);

// Distribution of w.x over the candidates whose membership in `attr` equals
// `designated`.
EmpiricalDist GroupScoreDist(const Population& pop, const std::string& attr,
                             bool designated, std::span<const double> w);

struct CsvSchema {
  std::string id_column = "id";
  std::vector<std::string> attribute_columns;
  // Empty means every column that is not id, attribute or outcome.
  std::vector<std::string> score_columns;
  // Empty means "use a column named `outcome` when present".
  std::string outcome_column;
  // Optional textual labels accepted besides 1/0.
  std::string designated_label;
  std::string other_label;
};

Population LoadPopulation(std::istream& in, const CsvSchema& schema);
Population LoadPopulationFile(const std::string& path,
                              const CsvSchema& schema);

// Writes id, attribute columns, score columns and (when any candidate has
// one) an outcome column. Reals use the shortest round-trip representation.
void WritePopulation(std::ostream& out, const Population& pop);

// Shortest decimal string that parses back to exactly `value`.
std::string FormatRoundTrip(double value);

}  // namespace fairadmit

#endif  // FAIRADMIT_MODEL_H_
