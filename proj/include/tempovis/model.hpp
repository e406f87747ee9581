#pragma once

// Shared domain types for bar-level tempo data.
//
// Types are plain aggregates so that inconsistent data read from disk can be
// represented and reported by the validators below; every consumer validates
// (or receives already-validated data from ingest) before computing on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tempovis {

/// One bar of a performance: the atomic measurement.
struct BarRecord {
  int bar_index = 0;  // 1-based score position
  int n_beats = 0;
  double duration_s = 0.0;
  double bpm = 0.0;
};

/// Ordered bars for one recording.
struct TempoSeries {
  std::string recording_id;
  std::vector<BarRecord> bars;

  std::size_t size() const noexcept { return bars.size(); }
  bool empty() const noexcept { return bars.empty(); }
  int first_bar() const { return bars.front().bar_index; }
  int last_bar() const { return bars.back().bar_index; }

  std::vector<double> bpm_values() const {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.push_back(b.bpm);
    return out;
  }
};

/// Display metadata for one recording.
struct RecordingMeta {
  std::string recording_id;
  std::string label;
  std::optional<int> year_first;
  std::optional<int> year_last;
  std::optional<std::string> color;  // "#RRGGBB"
};

/// Inclusive bar range.
struct BarRange {
  int first = 1;
  int last = 1;

  int count() const noexcept { return last - first + 1; }
  bool contains(int bar) const noexcept { return bar >= first && bar <= last; }
};

struct Section {
  std::string name;
  int start_bar = 1;
  int end_bar = 1;

  BarRange range() const noexcept { return {start_bar, end_bar}; }
};

/// Named, contiguous formal divisions shared across recordings.
struct SectionMap {
  std::vector<Section> sections;

  bool empty() const noexcept { return sections.empty(); }
  std::size_t size() const noexcept { return sections.size(); }
  int first_bar() const { return sections.front().start_bar; }
  int last_bar() const { return sections.back().end_bar; }

  const Section* find(const std::string& name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }

  /// Index of the section containing `bar`, if any.
  std::optional<std::size_t> section_of(int bar) const {
    for (std::size_t i = 0; i < sections.size(); ++i)
      if (sections[i].range().contains(bar)) return i;
    return std::nullopt;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& s : sections) out.push_back(s.name);
    return out;
  }
};

struct SummaryStats {
  double mean_bpm = 0.0;
  double std_bpm = 0.0;  // population form (divide by N)
  int n_bars = 0;
  double total_duration_s = 0.0;
};

/// A single broken invariant. `bar_index` is 0 for series-level problems.
struct Violation {
  int bar_index = 0;
  std::string rule;
  std::string message;
};

inline constexpr double kBpmConsistencyTolerance = 1e-9;

/// True when bpm × duration_s = n_beats × 60 within relative 1e-9.
inline bool bar_is_consistent(const BarRecord& bar) {
  const double expected = static_cast<double>(bar.n_beats) * 60.0;
  const double actual = bar.bpm * bar.duration_s;
  return std::abs(actual - expected) <= kBpmConsistencyTolerance * std::abs(expected);
}

/// Checks every BarRecord and TempoSeries invariant. Violations are returned,
/// never thrown; an empty result means the series is valid.
inline std::vector<Violation> validate_series(const TempoSeries& series) {
  std::vector<Violation> out;
  if (series.bars.empty()) {
    out.push_back({0, "non-empty", "series '" + series.recording_id + "' has no bars"});
    return out;
  }
  int expected_index = 1;
  for (const auto& bar : series.bars) {
    const int i = bar.bar_index;
    const std::string at = "bar " + std::to_string(i) + ": ";
    if (i != expected_index) {
      if (i > expected_index && expected_index > 1) {
        out.push_back({i, "contiguous",
                       at + "gap after bar " + std::to_string(expected_index - 1)});
      } else if (expected_index == 1) {
        out.push_back({i, "contiguous", at + "series must start at bar 1"});
      } else {
        out.push_back({i, "increasing",
                       at + "bar index not strictly increasing (previous " +
                           std::to_string(expected_index - 1) + ")"});
      }
    }
    expected_index = i + 1;

    bool usable = true;
    if (bar.n_beats < 1) {
      out.push_back({i, "n_beats", at + "n_beats must be >= 1"});
      usable = false;
    }
    if (!(bar.duration_s > 0.0) || !std::isfinite(bar.duration_s)) {
      out.push_back({i, "duration", at + "duration_s must be positive and finite"});
      usable = false;
    }
    if (!(bar.bpm > 0.0) || !std::isfinite(bar.bpm)) {
      out.push_back({i, "bpm", at + "bpm must be positive and finite"});
      usable = false;
    }
    if (usable && !bar_is_consistent(bar)) {
      out.push_back({i, "consistency",
                     at + "bpm x duration_s != n_beats x 60 (" +
                         std::to_string(bar.bpm * bar.duration_s) + " vs " +
                         std::to_string(bar.n_beats * 60) + ")"});
    }
  }
  return out;
}

/// Checks ordering, contiguity and coverage-from-bar-1 of a section map.
/// Each violation's bar_index holds the offending section's start bar.
inline std::vector<Violation> validate_section_map(const SectionMap& map) {
  std::vector<Violation> out;
  if (map.sections.empty()) {
    out.push_back({0, "non-empty", "section map has no sections"});
    return out;
  }
  int expected_start = 1;
  for (const auto& s : map.sections) {
    const std::string at = "section '" + s.name + "': ";
    if (s.end_bar < s.start_bar) {
      out.push_back({s.start_bar, "ordered",
                     at + "end_bar " + std::to_string(s.end_bar) + " precedes start_bar " +
                         std::to_string(s.start_bar)});
    }
    if (s.start_bar != expected_start) {
      if (expected_start == 1) {
        out.push_back({s.start_bar, "contiguous", at + "first section must start at bar 1"});
      } else if (s.start_bar > expected_start) {
        out.push_back({s.start_bar, "contiguous",
                       at + "gap after bar " + std::to_string(expected_start - 1)});
      } else {
        out.push_back({s.start_bar, "overlap",
                       at + "starts at bar " + std::to_string(s.start_bar) +
                           " but previous section ends at bar " +
                           std::to_string(expected_start - 1)});
      }
    }
    expected_start = std::max(expected_start, s.end_bar + 1);
  }
  return out;
}

}  // namespace tempovis
