// Copyright 2026 The metaembed Authors.
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

#ifndef METAEMBED_STATS_HPP_
#define METAEMBED_STATS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "metaembed/sentvec.hpp"

namespace metaembed {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
// relative accuracy ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct TTestResult {
  // Embedding dimension, or nullopt for the test on vector norms.
  std::optional<std::size_t> dimension;
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

// Two-sided Welch test of mean(a) == mean(b). Sample variances use n - 1;
// df comes from Welch-Satterthwaite. Throws kInvalidArgument when a sample
// has fewer than 2 values and kDegenerateSample when both variances are 0.
TTestResult welch_t(std::span<const double> a, std::span<const double> b,
                    double alpha = 0.05);

struct GroupTestReport {
  std::vector<TTestResult> dimensions;
  TTestResult norm;
  std::size_t significant_dimensions = 0;
  double alpha = 0.05;
};

// Literal vs metaphor: one Welch test per dimension plus one on Euclidean
// norms. Both classes need at least 2 members. A dimension constant within
// both classes gets t = 0, p = 1 when the constants agree and t = +/-inf,
// p = 0 otherwise.
GroupTestReport group_ttest(std::span<const SentenceVector> vectors, double alpha = 0.05);

// TSV with header `dimension\tt\tdf\tp\tsignificant`; the norm row is
// labelled `norm`.
void write_ttest_report(std::ostream& out, const GroupTestReport& report);
void save_ttest_report(const std::filesystem::path& path, const GroupTestReport& report);

}  // namespace metaembed

#endif  // METAEMBED_STATS_HPP_
