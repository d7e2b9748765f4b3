#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sleepgraph/hypnogram.hpp"
#include "sleepgraph/markov.hpp"
#include "sleepgraph/stage.hpp"

namespace sleepgraph {

// Survival-function values below the smallest normal double are clamped to
// it and flagged; reports print them as "< 2.2e-308" rather than 0.
inline constexpr double kMinPValue = std::numeric_limits<double>::min();

inline bool p_value_underflowed(double p) { return p <= kMinPValue; }

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series expansion.
// Converges quickly for x < a+1.
inline double gamma_p_series(double a, double x) {
  const double gln = std::lgamma(a);
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  const double logp = -x + a * std::log(x) - gln;
  return sum * std::exp(logp);
}

// Regularized upper incomplete gamma Q(a,x) by modified Lentz continued
// fraction. Converges quickly for x >= a+1.
inline double gamma_q_contfrac(double a, double x) {
  const double gln = std::lgamma(a);
  const double fpmin = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace detail

// Chi-square survival function: Q(df/2, x/2), the regularized upper
// incomplete gamma. Series branch for x < df+1, continued fraction
// otherwise. Result clamped to [kMinPValue, 1].
inline double chi_square_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_square_sf: df must be >= 1");
  if (!(x >= 0.0)) throw std::invalid_argument("chi_square_sf: x must be >= 0");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * df;
  const double x2 = 0.5 * x;
  double q = (x2 < a + 1.0) ? 1.0 - detail::gamma_p_series(a, x2)
                            : detail::gamma_q_contfrac(a, x2);
  if (q > 1.0) q = 1.0;
  if (q < kMinPValue) q = kMinPValue;  // underflow clamp
  return q;
}

struct ChiSquareTest {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::size_t categories = 0;           // admitted categories after drops
  std::vector<std::string> dropped_categories;
};

// Pearson chi-square on a 2xK contingency table with rows a and b.
// Categories with zero combined count have zero expected count and are
// dropped, reducing df accordingly. With fewer than two admitted categories
// (or an empty row) the test degenerates to statistic 0, df 0, p 1; callers
// that consider that an error must check df themselves.
inline ChiSquareTest pearson_two_sample(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b,
                                        const std::vector<std::string>& names) {
  if (a.size() != b.size() || a.size() != names.size())
    throw std::invalid_argument("pearson_two_sample: size mismatch");

  ChiSquareTest t;
  std::vector<std::size_t> admitted;
  std::int64_t row_a = 0, row_b = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] + b[k] == 0) {
      t.dropped_categories.push_back(names[k]);
      continue;
    }
    admitted.push_back(k);
    row_a += a[k];
    row_b += b[k];
  }
  t.categories = admitted.size();
  if (admitted.size() < 2 || row_a == 0 || row_b == 0) return t;

  const double grand = static_cast<double>(row_a + row_b);
  double stat = 0.0;
  for (std::size_t k : admitted) {
    const double col = static_cast<double>(a[k] + b[k]);
    const double ea = static_cast<double>(row_a) * col / grand;
    const double eb = static_cast<double>(row_b) * col / grand;
    const double da = static_cast<double>(a[k]) - ea;
    const double db = static_cast<double>(b[k]) - eb;
    stat += da * da / ea + db * db / eb;
  }
  t.statistic = stat;
  t.df = static_cast<int>(admitted.size()) - 1;
  t.p_value = chi_square_sf(stat, t.df);
  return t;
}

inline std::string pair_name(SleepStage from, SleepStage to) {
  return std::string(stage_name(from)) + "->" + stage_name(to);
}

// Overall cohort comparison: Pearson chi-square on the 2xK table of
// transition categories (the 20 ordered non-self pairs when exclude_self,
// all 25 otherwise). df = K-1 with zero-expected categories dropped.
inline ChiSquareTest chi_square_overall(const TransitionCounts& a, const TransitionCounts& b,
                                        bool exclude_self) {
  std::vector<std::int64_t> ca, cb;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kNumStages; ++i) {
    for (std::size_t j = 0; j < kNumStages; ++j) {
      if (exclude_self && i == j) continue;
      ca.push_back(a.counts[i][j]);
      cb.push_back(b.counts[i][j]);
      names.push_back(pair_name(stage_from_index(i), stage_from_index(j)));
    }
  }
  std::int64_t tot_a = 0, tot_b = 0;
  for (std::size_t k = 0; k < ca.size(); ++k) {
    tot_a += ca[k];
    tot_b += cb[k];
  }
  if (tot_a == 0 || tot_b == 0)
    throw input_error("chi_square_overall: a cohort has no admitted transitions");
  ChiSquareTest t = pearson_two_sample(ca, cb, names);
  if (t.df < 1) throw input_error("chi_square_overall: fewer than 2 admitted categories");
  return t;
}

struct TransitionTestResult {
  SleepStage from = SleepStage::W;
  SleepStage to = SleepStage::W;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool significant = false;
};

// One 2x2 Pearson test per ordered non-self pair (no continuity
// correction): [this transition vs. all other non-self transitions] x
// [cohort]. Pairs absent from both cohorts get statistic 0, p 1. Results in
// canonical pair order.
inline std::vector<TransitionTestResult> per_transition_tests(const TransitionCounts& a,
                                                              const TransitionCounts& b,
                                                              double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("per_transition_tests: alpha must be in (0,1)");
  const std::int64_t nonself_a = a.nonself_total();
  const std::int64_t nonself_b = b.nonself_total();

  std::vector<TransitionTestResult> out;
  out.reserve(nonself_pairs().size());
  for (const auto& [from, to] : nonself_pairs()) {
    const std::size_t i = stage_index(from), j = stage_index(to);
    TransitionTestResult r;
    r.from = from;
    r.to = to;
    const std::int64_t pa = a.counts[i][j];
    const std::int64_t pb = b.counts[i][j];
    const ChiSquareTest t = pearson_two_sample({pa, nonself_a - pa}, {pb, nonself_b - pb},
                                               {pair_name(from, to), "other"});
    if (t.df >= 1) {
      r.statistic = t.statistic;
      r.df = t.df;
      r.p_value = t.p_value;
    }
    r.significant = r.p_value < alpha;
    out.push_back(r);
  }
  return out;
}

inline std::array<std::int64_t, kNumStages> stage_occupancy(
    const std::vector<const Hypnogram*>& slice) {
  std::array<std::int64_t, kNumStages> occ{};
  for (const Hypnogram* h : slice)
    for (SleepStage s : h->stages) ++occ[stage_index(s)];
  return occ;
}

// Pearson chi-square on the 2x5 stage-occupancy table (epoch counts per
// stage). Stages unseen in both cohorts are dropped with df reduced.
inline ChiSquareTest stage_frequency_test(const std::array<std::int64_t, kNumStages>& a,
                                          const std::array<std::int64_t, kNumStages>& b) {
  std::vector<std::int64_t> ca(a.begin(), a.end()), cb(b.begin(), b.end());
  std::vector<std::string> names;
  for (SleepStage s : kAllStages) names.emplace_back(stage_name(s));
  std::int64_t tot_a = 0, tot_b = 0;
  for (std::size_t k = 0; k < ca.size(); ++k) {
    tot_a += ca[k];
    tot_b += cb[k];
  }
  if (tot_a == 0 || tot_b == 0) throw input_error("stage_frequency_test: empty slice");
  return pearson_two_sample(ca, cb, names);
}

inline ChiSquareTest stage_frequency_test(const std::vector<const Hypnogram*>& a,
                                          const std::vector<const Hypnogram*>& b) {
  if (a.empty() || b.empty()) throw input_error("stage_frequency_test: empty slice");
  return stage_frequency_test(stage_occupancy(a), stage_occupancy(b));
}

}  // namespace sleepgraph
