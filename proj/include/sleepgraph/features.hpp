#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sleepgraph/dataset.hpp"
#include "sleepgraph/hypnogram.hpp"
#include "sleepgraph/stage.hpp"
#include "sleepgraph/util.hpp"

namespace sleepgraph {

// Canonical 27-dimensional structural/sequential descriptor of a recording:
//   [0..19]  non-self bigram relative frequencies, canonical pair order
//   [20]     average run length (epochs)
//   [21]     maximum run length (epochs)
//   [22]     Shannon entropy (bits) of the stage-occupancy distribution
//   [23..26] stage proportions N1, N2, N3, REM (W dropped: proportions sum to 1)
inline constexpr std::size_t kNumFeatures = 27;

struct FeatureVector {
  std::array<double, kNumFeatures> values{};
};

inline const std::array<std::string, kNumFeatures>& feature_names() {
  static const std::array<std::string, kNumFeatures> names = [] {
    std::array<std::string, kNumFeatures> out;
    std::size_t k = 0;
    for (const auto& [from, to] : nonself_pairs())
      out[k++] = std::string("bigram_") + stage_name(from) + "_" + stage_name(to);
    out[k++] = "avg_run_length";
    out[k++] = "max_run_length";
    out[k++] = "stage_entropy";
    out[k++] = "prop_N1";
    out[k++] = "prop_N2";
    out[k++] = "prop_N3";
    out[k++] = "prop_REM";
    return out;
  }();
  return names;
}

inline std::optional<std::size_t> feature_index(std::string_view name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

inline double average_run_length(const Hypnogram& h) {
  if (h.stages.empty()) throw std::invalid_argument("average_run_length: empty hypnogram");
  std::size_t runs = 1;
  for (std::size_t i = 1; i < h.stages.size(); ++i)
    if (h.stages[i] != h.stages[i - 1]) ++runs;
  return static_cast<double>(h.stages.size()) / static_cast<double>(runs);
}

inline std::int64_t max_run_length(const Hypnogram& h) {
  if (h.stages.empty()) throw std::invalid_argument("max_run_length: empty hypnogram");
  std::int64_t best = 1, cur = 1;
  for (std::size_t i = 1; i < h.stages.size(); ++i) {
    cur = (h.stages[i] == h.stages[i - 1]) ? cur + 1 : 1;
    if (cur > best) best = cur;
  }
  return best;
}

// Shannon entropy in bits of the empirical stage distribution.
inline double stage_entropy(const Hypnogram& h) {
  if (h.stages.empty()) throw std::invalid_argument("stage_entropy: empty hypnogram");
  std::array<std::int64_t, kNumStages> occ{};
  for (SleepStage s : h.stages) ++occ[stage_index(s)];
  const double n = static_cast<double>(h.stages.size());
  double ent = 0.0;
  for (std::int64_t c : occ) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / n;
    ent -= q * std::log2(q);
  }
  return ent;
}

// Counts of ordered non-self adjacent pairs normalized by the total number
// of non-self pairs; all-zero when the sequence never changes stage.
inline std::array<double, 20> bigram_frequencies(const Hypnogram& h) {
  if (h.stages.empty()) throw std::invalid_argument("bigram_frequencies: empty hypnogram");
  std::array<std::array<std::int64_t, kNumStages>, kNumStages> counts{};
  std::int64_t total = 0;
  for (std::size_t t = 0; t + 1 < h.stages.size(); ++t) {
    const std::size_t i = stage_index(h.stages[t]);
    const std::size_t j = stage_index(h.stages[t + 1]);
    if (i == j) continue;
    ++counts[i][j];
    ++total;
  }
  std::array<double, 20> out{};
  if (total == 0) return out;
  std::size_t k = 0;
  for (const auto& [from, to] : nonself_pairs()) {
    out[k++] = static_cast<double>(counts[stage_index(from)][stage_index(to)]) /
               static_cast<double>(total);
  }
  return out;
}

inline FeatureVector extract_features(const Hypnogram& h) {
  FeatureVector fv;
  const auto bigrams = bigram_frequencies(h);
  std::size_t k = 0;
  for (double v : bigrams) fv.values[k++] = v;
  fv.values[k++] = average_run_length(h);
  fv.values[k++] = static_cast<double>(max_run_length(h));
  fv.values[k++] = stage_entropy(h);

  std::array<std::int64_t, kNumStages> occ{};
  for (SleepStage s : h.stages) ++occ[stage_index(s)];
  const double n = static_cast<double>(h.stages.size());
  fv.values[k++] = static_cast<double>(occ[stage_index(SleepStage::N1)]) / n;
  fv.values[k++] = static_cast<double>(occ[stage_index(SleepStage::N2)]) / n;
  fv.values[k++] = static_cast<double>(occ[stage_index(SleepStage::N3)]) / n;
  fv.values[k++] = static_cast<double>(occ[stage_index(SleepStage::REM)]) / n;
  return fv;
}

// Feature matrix CSV: subject_id, cohort, then the 27 canonical feature
// columns; one row per recording in manifest order; LF line endings.
inline std::string features_to_csv(const CohortDataset& d) {
  std::string out = "subject_id,cohort";
  for (const std::string& name : feature_names()) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (const Hypnogram& h : d.recordings) {
    out += h.subject_id;
    out += ',';
    out += cohort_name(h.cohort);
    const FeatureVector fv = extract_features(h);
    for (double v : fv.values) {
      out += ',';
      out += format_sig(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace sleepgraph
