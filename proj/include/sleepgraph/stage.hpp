#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "sleepgraph/util.hpp"

namespace sleepgraph {

// Five-stage alphabet in canonical index order. Every matrix, feature
// layout and serialized artifact in this library uses this order.
enum class SleepStage : std::uint8_t { W = 0, N1 = 1, N2 = 2, N3 = 3, REM = 4 };

inline constexpr std::size_t kNumStages = 5;

inline constexpr std::array<SleepStage, kNumStages> kAllStages = {
    SleepStage::W, SleepStage::N1, SleepStage::N2, SleepStage::N3, SleepStage::REM};

inline constexpr std::size_t stage_index(SleepStage s) {
  return static_cast<std::size_t>(s);
}

inline SleepStage stage_from_index(std::size_t i) {
  if (i >= kNumStages) throw std::out_of_range("stage index out of range");
  return static_cast<SleepStage>(i);
}

inline constexpr const char* stage_name(SleepStage s) {
  switch (s) {
    case SleepStage::W: return "W";
    case SleepStage::N1: return "N1";
    case SleepStage::N2: return "N2";
    case SleepStage::N3: return "N3";
    case SleepStage::REM: return "REM";
  }
  return "?";
}

// Case-insensitive. "wake" and "r" are accepted as input aliases; output is
// always the canonical spelling. The alphabet is closed: anything else
// (including N4 -- corpora are expected to arrive with N3/N4 already merged)
// is rejected by returning nullopt.
inline std::optional<SleepStage> parse_stage(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "w" || t == "wake") return SleepStage::W;
  if (t == "n1") return SleepStage::N1;
  if (t == "n2") return SleepStage::N2;
  if (t == "n3") return SleepStage::N3;
  if (t == "rem" || t == "r") return SleepStage::REM;
  return std::nullopt;
}

// The 20 ordered non-self stage pairs in canonical row-major order. This is
// the shared category set for per-transition tests, the bigram feature block
// and graph edge ordering.
inline const std::array<std::pair<SleepStage, SleepStage>, 20>& nonself_pairs() {
  static const std::array<std::pair<SleepStage, SleepStage>, 20> pairs = [] {
    std::array<std::pair<SleepStage, SleepStage>, 20> out{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < kNumStages; ++i)
      for (std::size_t j = 0; j < kNumStages; ++j)
        if (i != j) out[k++] = {stage_from_index(i), stage_from_index(j)};
    return out;
  }();
  return pairs;
}

}  // namespace sleepgraph
