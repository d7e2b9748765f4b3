#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "sleepgraph/dataset.hpp"
#include "sleepgraph/hypnogram.hpp"
#include "sleepgraph/stage.hpp"

namespace sleepgraph {

// Raw first-order transition tallies in canonical stage order. Each
// recording of length L contributes exactly L-1 adjacent pairs; pairs never
// span recording boundaries.
struct TransitionCounts {
  std::array<std::array<std::int64_t, kNumStages>, kNumStages> counts{};
  std::int64_t total_epochs = 0;
  std::int64_t recordings = 0;

  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& row : counts)
      for (std::int64_t c : row) t += c;
    return t;
  }

  std::int64_t row_total(std::size_t i, bool exclude_self) const {
    std::int64_t t = 0;
    for (std::size_t j = 0; j < kNumStages; ++j) {
      if (exclude_self && j == i) continue;
      t += counts[i][j];
    }
    return t;
  }

  std::int64_t nonself_total() const {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < kNumStages; ++i) t += row_total(i, true);
    return t;
  }
};

inline void accumulate_transitions(TransitionCounts& tc, const Hypnogram& h) {
  for (std::size_t t = 0; t + 1 < h.stages.size(); ++t)
    ++tc.counts[stage_index(h.stages[t])][stage_index(h.stages[t + 1])];
  tc.total_epochs += static_cast<std::int64_t>(h.stages.size());
  tc.recordings += 1;
}

// Single-recording tally. A length-1 recording yields zero transitions.
inline TransitionCounts count_transitions(const Hypnogram& h) {
  TransitionCounts tc;
  accumulate_transitions(tc, h);
  return tc;
}

// Dataset tally in manifest order, optionally restricted to one cohort.
// Requires a non-empty selection with at least one recording of length >= 2.
inline TransitionCounts count_transitions(const CohortDataset& d,
                                          std::optional<Cohort> cohort_filter = {}) {
  TransitionCounts tc;
  for (const Hypnogram& h : d.recordings) {
    if (cohort_filter && h.cohort != *cohort_filter) continue;
    accumulate_transitions(tc, h);
  }
  if (tc.recordings == 0)
    throw input_error(std::string("count_transitions: empty selection") +
                      (cohort_filter ? std::string(" for cohort ") + cohort_name(*cohort_filter)
                                     : std::string()));
  if (tc.total() == 0)
    throw input_error("count_transitions: no recording of length >= 2 in selection");
  return tc;
}

// Row-conditional transition probabilities. With exclude_self the diagonal
// is identically zero and each row is normalized over its off-diagonal
// outgoing count. Rows with zero support stay all-zero and are flagged via
// row_support.
struct TransitionMatrix {
  std::array<std::array<double, kNumStages>, kNumStages> probs{};
  bool exclude_self = true;
  std::array<std::int64_t, kNumStages> row_support{};

  bool zero_support(std::size_t row) const { return row_support[row] == 0; }
};

inline TransitionMatrix transition_matrix(const TransitionCounts& c, bool exclude_self) {
  TransitionMatrix m;
  m.exclude_self = exclude_self;
  for (std::size_t i = 0; i < kNumStages; ++i) {
    const std::int64_t support = c.row_total(i, exclude_self);
    m.row_support[i] = support;
    if (support == 0) continue;
    for (std::size_t j = 0; j < kNumStages; ++j) {
      if (exclude_self && j == i) continue;
      m.probs[i][j] = static_cast<double>(c.counts[i][j]) / static_cast<double>(support);
    }
  }
  return m;
}

// Per-state KL divergence between row distributions, natural log. Each
// admitted cell gets an additive epsilon before renormalization so that
// zeros on either side stay finite. average_kl is the unweighted mean over
// the states with outgoing support in both matrices.
struct DivergenceReport {
  std::array<double, kNumStages> per_state_kl{};
  std::array<bool, kNumStages> state_supported{};
  double average_kl = 0.0;
  double smoothing_epsilon = 0.0;
};

inline DivergenceReport kl_divergence(const TransitionMatrix& p, const TransitionMatrix& q,
                                      double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("kl_divergence: epsilon must be > 0");
  if (p.exclude_self != q.exclude_self)
    throw std::invalid_argument("kl_divergence: matrices disagree on exclude_self");

  DivergenceReport rep;
  rep.smoothing_epsilon = epsilon;
  double sum = 0.0;
  int supported = 0;
  for (std::size_t i = 0; i < kNumStages; ++i) {
    rep.state_supported[i] = p.row_support[i] > 0 && q.row_support[i] > 0;
    if (!rep.state_supported[i]) continue;

    double ps = 0.0, qs = 0.0;
    std::array<double, kNumStages> pc{}, qc{};
    for (std::size_t j = 0; j < kNumStages; ++j) {
      if (p.exclude_self && j == i) continue;
      pc[j] = p.probs[i][j] + epsilon;
      qc[j] = q.probs[i][j] + epsilon;
      ps += pc[j];
      qs += qc[j];
    }
    double kl = 0.0;
    for (std::size_t j = 0; j < kNumStages; ++j) {
      if (p.exclude_self && j == i) continue;
      const double pj = pc[j] / ps;
      const double qj = qc[j] / qs;
      kl += pj * std::log(pj / qj);
    }
    rep.per_state_kl[i] = kl;
    sum += kl;
    ++supported;
  }
  rep.average_kl = supported > 0 ? sum / supported : 0.0;
  return rep;
}

}  // namespace sleepgraph
