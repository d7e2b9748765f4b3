#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sleepgraph/stage.hpp"
#include "sleepgraph/util.hpp"

namespace sleepgraph {

enum class Cohort : std::uint8_t { patient = 0, healthy = 1 };

inline constexpr const char* cohort_name(Cohort c) {
  return c == Cohort::patient ? "patient" : "healthy";
}

// Strict: manifest labels are exactly "patient" or "healthy".
inline std::optional<Cohort> parse_cohort(std::string_view token) {
  if (token == "patient") return Cohort::patient;
  if (token == "healthy") return Cohort::healthy;
  return std::nullopt;
}

// One scored recording: a stage per 30 s epoch, indices implicit and
// zero-based. epoch_seconds is carried for provenance only; the analysis is
// epoch-count based throughout.
struct Hypnogram {
  std::string subject_id;
  Cohort cohort = Cohort::healthy;
  std::vector<SleepStage> stages;
  int epoch_seconds = 30;

  std::size_t size() const { return stages.size(); }
};

// Maximal contiguous segment without a stage change.
struct Run {
  SleepStage stage;
  std::size_t start = 0;   // epoch index of first epoch in the run
  std::size_t length = 0;  // epochs, >= 1
};

inline std::vector<Run> run_length_encode(const std::vector<SleepStage>& stages) {
  std::vector<Run> runs;
  if (stages.empty()) return runs;
  runs.push_back({stages[0], 0, 1});
  for (std::size_t i = 1; i < stages.size(); ++i) {
    if (stages[i] == runs.back().stage) {
      ++runs.back().length;
    } else {
      runs.push_back({stages[i], i, 1});
    }
  }
  return runs;
}

inline std::vector<Run> run_length_encode(const Hypnogram& h) {
  return run_length_encode(h.stages);
}

inline std::vector<SleepStage> run_length_decode(const std::vector<Run>& runs) {
  std::vector<SleepStage> stages;
  for (const Run& r : runs) stages.insert(stages.end(), r.length, r.stage);
  return stages;
}

// Parses the hypnogram CSV format: header `epoch,stage`, one row per epoch,
// epoch column strictly increasing. LF and CRLF are both accepted; blank
// lines are skipped. Stage tokens are matched case-insensitively with the
// aliases from parse_stage.
inline Hypnogram parse_hypnogram(std::string_view csv_text, std::string subject_id,
                                 Cohort cohort) {
  Hypnogram h;
  h.subject_id = std::move(subject_id);
  h.cohort = cohort;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  long long prev_epoch = -1;

  while (pos <= csv_text.size()) {
    std::size_t eol = csv_text.find('\n', pos);
    std::string_view line = csv_text.substr(
        pos, eol == std::string_view::npos ? csv_text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? csv_text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    if (!header_seen) {
      if (to_lower(trim(line)) != "epoch,stage")
        throw input_error("hypnogram " + h.subject_id + ": expected header 'epoch,stage' on line " +
                          std::to_string(line_no));
      header_seen = true;
      continue;
    }

    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw input_error("hypnogram " + h.subject_id + ": malformed row on line " +
                        std::to_string(line_no));

    const std::string epoch_str = trim(line.substr(0, comma));
    char* end = nullptr;
    const long long epoch = std::strtoll(epoch_str.c_str(), &end, 10);
    if (epoch_str.empty() || end == epoch_str.c_str() || *end != '\0')
      throw input_error("hypnogram " + h.subject_id + ": bad epoch index '" + epoch_str +
                        "' on line " + std::to_string(line_no));
    if (epoch <= prev_epoch)
      throw input_error("hypnogram " + h.subject_id + ": non-monotonic epoch index " +
                        std::to_string(epoch) + " on line " + std::to_string(line_no));
    prev_epoch = epoch;

    const std::string tok = trim(line.substr(comma + 1));
    const auto stage = parse_stage(tok);
    if (!stage)
      throw input_error("hypnogram " + h.subject_id + ": unknown stage token '" + tok +
                        "' on line " + std::to_string(line_no));
    h.stages.push_back(*stage);
  }

  if (!header_seen)
    throw input_error("hypnogram " + h.subject_id + ": empty file");
  if (h.stages.empty())
    throw input_error("hypnogram " + h.subject_id + ": empty body");
  return h;
}

// Canonical serialization: LF line endings, canonical stage spellings,
// implicit zero-based epoch index. Round-trips byte-stably with
// parse_hypnogram for canonical input.
inline std::string hypnogram_to_csv(const Hypnogram& h) {
  std::string out = "epoch,stage\n";
  for (std::size_t i = 0; i < h.stages.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += stage_name(h.stages[i]);
    out += '\n';
  }
  return out;
}

}  // namespace sleepgraph
