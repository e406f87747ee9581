#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempovis/error.hpp"
#include "tempovis/model.hpp"

namespace tempovis {

/// Per-section durations for one recording, in section-map order.
struct SectionDurations {
  std::string recording_id;
  std::vector<std::pair<std::string, double>> entries;  // (section name, seconds)

  double total() const {
    double sum = 0.0;
    for (const auto& [name, seconds] : entries) sum += seconds;
    return sum;
  }
};

/// Mean and population standard deviation of bar-level BPM over `range`
/// (the whole series when absent). Each bar counts once regardless of its
/// duration, so the mean is not total beats over total time.
inline SummaryStats summary_stats(const TempoSeries& series,
                                  std::optional<BarRange> range = std::nullopt) {
  if (series.empty()) throw domain_error("summary of empty series '" + series.recording_id + "'");
  if (range) {
    if (range->last < range->first) {
      throw domain_error("bar range " + std::to_string(range->first) + "-" +
                         std::to_string(range->last) + " is reversed");
    }
    if (range->first < series.first_bar() || range->last > series.last_bar()) {
      throw domain_error("bar range " + std::to_string(range->first) + "-" +
                         std::to_string(range->last) + " is outside '" + series.recording_id +
                         "' (bars " + std::to_string(series.first_bar()) + "-" +
                         std::to_string(series.last_bar()) + ")");
    }
  }

  SummaryStats s;
  double sum = 0.0;
  for (const auto& b : series.bars) {
    if (range && !range->contains(b.bar_index)) continue;
    sum += b.bpm;
    s.total_duration_s += b.duration_s;
    ++s.n_bars;
  }
  if (s.n_bars == 0) throw domain_error("empty bar selection in '" + series.recording_id + "'");
  s.mean_bpm = sum / s.n_bars;
  double ss = 0.0;
  for (const auto& b : series.bars) {
    if (range && !range->contains(b.bar_index)) continue;
    ss += (b.bpm - s.mean_bpm) * (b.bpm - s.mean_bpm);
  }
  s.std_bpm = std::sqrt(ss / s.n_bars);
  return s;
}

/// Sums bar durations per section. The map must cover exactly the series'
/// bar range.
inline SectionDurations section_durations(const TempoSeries& series, const SectionMap& map) {
  if (series.empty()) throw domain_error("section durations of empty series");
  if (map.empty()) throw domain_error("section durations need a non-empty section map");
  if (map.first_bar() != series.first_bar() || map.last_bar() != series.last_bar()) {
    std::string uncovered;
    if (series.first_bar() < map.first_bar()) {
      uncovered += "bars " + std::to_string(series.first_bar()) + "-" +
                   std::to_string(map.first_bar() - 1) + " of the series are not in any section";
    }
    if (series.last_bar() > map.last_bar()) {
      if (!uncovered.empty()) uncovered += "; ";
      uncovered += "bars " + std::to_string(map.last_bar() + 1) + "-" +
                   std::to_string(series.last_bar()) + " of the series are not in any section";
    }
    if (map.last_bar() > series.last_bar()) {
      if (!uncovered.empty()) uncovered += "; ";
      uncovered += "section map extends to bar " + std::to_string(map.last_bar()) + " but '" +
                   series.recording_id + "' ends at bar " + std::to_string(series.last_bar());
    }
    if (map.first_bar() < series.first_bar()) {
      if (!uncovered.empty()) uncovered += "; ";
      uncovered += "section map starts at bar " + std::to_string(map.first_bar()) + " but '" +
                   series.recording_id + "' starts at bar " + std::to_string(series.first_bar());
    }
    throw domain_error("section map does not match '" + series.recording_id + "': " + uncovered);
  }

  SectionDurations out{series.recording_id, {}};
  out.entries.reserve(map.size());
  for (const auto& s : map.sections) out.entries.emplace_back(s.name, 0.0);
  std::size_t k = 0;
  for (const auto& b : series.bars) {
    while (k < map.size() && b.bar_index > map.sections[k].end_bar) ++k;
    if (k == map.size() || b.bar_index < map.sections[k].start_bar) {
      throw domain_error("bar " + std::to_string(b.bar_index) + " is not in any section");
    }
    out.entries[k].second += b.duration_s;
  }
  return out;
}

/// A one-section map spanning the whole series; used when no map is given.
inline SectionMap whole_series_map(const TempoSeries& series, std::string name = "Movement") {
  return SectionMap{{{std::move(name), series.first_bar(), series.last_bar()}}};
}

}  // namespace tempovis
