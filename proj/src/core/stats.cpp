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

#include "metaembed/stats.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "metaembed/error.hpp"
#include "metaembed/matrix.hpp"
#include "metaembed/text_io.hpp"

namespace metaembed {
namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 1000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) return h;
  }
  throw Error(ErrorCode::kNumeric, "incomplete beta continued fraction did not converge");
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // n - 1 denominator
};

Moments moments(std::span<const double> xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(xs.size() - 1);
  return m;
}

TTestResult welch_from_moments(const Moments& ma, std::size_t na, const Moments& mb,
                               std::size_t nb, double alpha) {
  const double va = ma.variance / static_cast<double>(na);
  const double vb = mb.variance / static_cast<double>(nb);
  TTestResult r;
  r.t_statistic = (ma.mean - mb.mean) / std::sqrt(va + vb);
  r.degrees_of_freedom = (va + vb) * (va + vb) /
                         (va * va / static_cast<double>(na - 1) +
                          vb * vb / static_cast<double>(nb - 1));
  r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
  r.significant = r.p_value < alpha;
  return r;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::kDomain, "incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kDomain, "incomplete beta needs 0 <= x <= 1");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::kDomain, "degrees of freedom must be positive");
  if (std::isnan(t)) throw Error(ErrorCode::kDomain, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double p = regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return std::min(1.0, std::max(0.0, p));
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b, double alpha) {
  check_alpha(alpha);
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "each sample needs at least 2 values");
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  if (ma.variance == 0.0 && mb.variance == 0.0) {
    throw Error(ErrorCode::kDegenerateSample, "both samples have zero variance");
  }
  return welch_from_moments(ma, a.size(), mb, b.size(), alpha);
}

GroupTestReport group_ttest(std::span<const SentenceVector> vectors, double alpha) {
  check_alpha(alpha);
  std::vector<const SentenceVector*> lit;
  std::vector<const SentenceVector*> met;
  for (const SentenceVector& v : vectors) {
    (v.label == Label::kMetaphor ? met : lit).push_back(&v);
  }
  if (lit.size() < 2 || met.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "both classes need at least 2 vectors (literal " + std::to_string(lit.size()) +
                    ", metaphor " + std::to_string(met.size()) + ")");
  }
  const std::size_t dim = vectors.front().values.size();
  for (const SentenceVector& v : vectors) {
    if (v.values.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "sentence vectors differ in dimension");
    }
  }

  auto test = [&](auto&& value_of) {
    std::vector<double> a;
    std::vector<double> b;
    a.reserve(lit.size());
    b.reserve(met.size());
    for (const SentenceVector* v : lit) a.push_back(value_of(*v));
    for (const SentenceVector* v : met) b.push_back(value_of(*v));
    const Moments ma = moments(a);
    const Moments mb = moments(b);
    if (ma.variance == 0.0 && mb.variance == 0.0) {
      TTestResult r;
      r.degrees_of_freedom = static_cast<double>(a.size() + b.size() - 2);
      if (ma.mean != mb.mean) {
        r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(),
                                      ma.mean - mb.mean);
        r.p_value = 0.0;
      }
      r.significant = r.p_value < alpha;
      return r;
    }
    return welch_from_moments(ma, a.size(), mb, b.size(), alpha);
  };

  GroupTestReport report;
  report.alpha = alpha;
  report.dimensions.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    TTestResult r = test([k](const SentenceVector& v) { return v.values[k]; });
    r.dimension = k;
    if (r.significant) ++report.significant_dimensions;
    report.dimensions.push_back(r);
  }
  report.norm = test([](const SentenceVector& v) { return norm(v.values); });
  return report;
}

void write_ttest_report(std::ostream& out, const GroupTestReport& report) {
  out << "dimension\tt\tdf\tp\tsignificant\n";
  auto row = [&](const TTestResult& r) {
    if (r.dimension) {
      out << *r.dimension;
    } else {
      out << "norm";
    }
    out << '\t' << format_double(r.t_statistic) << '\t'
        << format_double(r.degrees_of_freedom) << '\t' << format_double(r.p_value) << '\t'
        << (r.significant ? "true" : "false") << '\n';
  };
  for (const TTestResult& r : report.dimensions) row(r);
  row(report.norm);
}

void save_ttest_report(const std::filesystem::path& path, const GroupTestReport& report) {
  std::ofstream out = open_output(path);
  write_ttest_report(out, report);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace metaembed
