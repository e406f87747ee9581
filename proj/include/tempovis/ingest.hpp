#pragma once

// Timing, section and metadata CSV ingestion.
//
// Timing files come in two schemas, detected from the header:
//   recording_id,bar_index,n_beats,timestamp_ms   (cumulative lap-timer output)
//   recording_id,bar_index,n_beats,bpm            (direct bar-level tempo)
// In the timestamp schema a row with bar_index 0 sets the timer anchor
// (start_ms) for its recording; without one the anchor is 0.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tempovis/error.hpp"
#include "tempovis/model.hpp"

namespace tempovis {

// ---------------------------------------------------------------------------
// Tempo arithmetic
// ---------------------------------------------------------------------------

/// BPM of a bar with `n_beats` beats lasting `duration_s` seconds.
/// `bar_index` only feeds the error message.
inline double bpm_from_bar(int n_beats, double duration_s, int bar_index = 0) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw domain_error("bar " + std::to_string(bar_index) +
                       ": duration must be positive, got " + std::to_string(duration_s));
  }
  if (n_beats < 1) {
    throw domain_error("bar " + std::to_string(bar_index) + ": n_beats must be >= 1");
  }
  return static_cast<double>(n_beats) * 60.0 / duration_s;
}

/// Inverse of bpm_from_bar.
inline double duration_from_bpm(int n_beats, double bpm, int bar_index = 0) {
  if (!(bpm > 0.0) || !std::isfinite(bpm)) {
    throw domain_error("bar " + std::to_string(bar_index) + ": bpm must be positive, got " +
                       std::to_string(bpm));
  }
  if (n_beats < 1) {
    throw domain_error("bar " + std::to_string(bar_index) + ": n_beats must be >= 1");
  }
  return 60.0 * static_cast<double>(n_beats) / bpm;
}

/// Converts cumulative end-of-bar timestamps to bar durations in seconds.
/// Errors carry the 1-based position of the offending timestamp as row().
inline std::vector<double> cumulative_to_durations(std::span<const std::int64_t> timestamps_ms,
                                                   std::int64_t start_ms = 0) {
  if (start_ms < 0) throw parse_error("start_ms must be non-negative");
  std::vector<double> out;
  out.reserve(timestamps_ms.size());
  std::int64_t previous = start_ms;
  for (std::size_t k = 0; k < timestamps_ms.size(); ++k) {
    const std::int64_t t = timestamps_ms[k];
    if (t <= previous) {
      throw parse_error("timestamp " + std::to_string(t) +
                            " ms is not after the previous barline (" +
                            std::to_string(previous) + " ms)",
                        k + 1);
    }
    out.push_back(static_cast<double>(t - previous) / 1000.0);
    previous = t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

struct CsvLine {
  std::size_t row = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

/// Splits text into non-blank lines of trimmed comma-separated fields.
inline std::vector<CsvLine> split_csv(std::string_view content) {
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
  std::vector<CsvLine> lines;
  std::size_t row = 0;
  while (!content.empty()) {
    ++row;
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    line = trim(line);
    if (line.empty()) continue;
    CsvLine parsed{row, {}};
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      parsed.fields.emplace_back(trim(line.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    lines.push_back(std::move(parsed));
  }
  return lines;
}

inline std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& field, const char* what, std::size_t row) {
  Int value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw parse_error(std::string(what) + " must be an integer, got '" + field + "'", row);
  }
  return value;
}

inline double parse_real(const std::string& field, const char* what, std::size_t row) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw parse_error(std::string(what) + " must be a finite number, got '" + field + "'", row);
  }
  return value;
}

inline std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("error while reading '" + path + "'");
  return ss.str();
}

// ---------------------------------------------------------------------------
// Timing files
// ---------------------------------------------------------------------------

enum class TimingSchema { timestamps, bpm };

inline const std::vector<std::string>& timing_header(TimingSchema schema) {
  static const std::vector<std::string> a{"recording_id", "bar_index", "n_beats", "timestamp_ms"};
  static const std::vector<std::string> b{"recording_id", "bar_index", "n_beats", "bpm"};
  return schema == TimingSchema::timestamps ? a : b;
}

/// Parses a timing CSV in either schema into one validated TempoSeries per
/// recording, ordered by recording_id. Rows may appear in any order.
inline std::vector<TempoSeries> parse_timing_csv(std::string_view content) {
  const auto lines = detail::split_csv(content);
  if (lines.empty()) throw parse_error("empty timing file");

  TimingSchema schema;
  if (lines.front().fields == timing_header(TimingSchema::timestamps)) {
    schema = TimingSchema::timestamps;
  } else if (lines.front().fields == timing_header(TimingSchema::bpm)) {
    schema = TimingSchema::bpm;
  } else {
    throw parse_error("unknown timing header '" + detail::join(lines.front().fields) +
                          "'; expected 'recording_id,bar_index,n_beats,timestamp_ms' or "
                          "'recording_id,bar_index,n_beats,bpm'",
                      lines.front().row);
  }
  const TimingSchema other =
      schema == TimingSchema::timestamps ? TimingSchema::bpm : TimingSchema::timestamps;

  struct Row {
    std::size_t row;
    int bar_index;
    int n_beats;
    std::int64_t timestamp_ms;
    double bpm;
  };
  struct Group {
    std::vector<Row> rows;
    std::int64_t start_ms = 0;
    std::size_t start_row = 0;
  };
  std::map<std::string, Group> groups;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& f = line.fields;
    if (f == timing_header(other)) {
      throw parse_error("mixed schemas: second header '" + detail::join(f) + "'", line.row);
    }
    if (f == timing_header(schema)) throw parse_error("repeated header", line.row);
    if (f.size() != 4) {
      throw parse_error("expected 4 fields, got " + std::to_string(f.size()), line.row);
    }
    if (f[0].empty()) throw parse_error("empty recording_id", line.row);

    Row r{line.row, detail::parse_int<int>(f[1], "bar_index", line.row), 0, 0, 0.0};
    auto& group = groups[f[0]];
    if (schema == TimingSchema::timestamps) {
      r.timestamp_ms = detail::parse_int<std::int64_t>(f[3], "timestamp_ms", line.row);
      if (r.timestamp_ms < 0) throw parse_error("timestamp_ms must be non-negative", line.row);
      if (r.bar_index == 0) {
        if (group.start_row != 0) {
          throw parse_error("second start_ms row for '" + f[0] + "' (first at row " +
                                std::to_string(group.start_row) + ")",
                            line.row);
        }
        group.start_ms = r.timestamp_ms;
        group.start_row = line.row;
        continue;
      }
    } else {
      r.bpm = detail::parse_real(f[3], "bpm", line.row);
    }
    r.n_beats = detail::parse_int<int>(f[2], "n_beats", line.row);
    if (r.bar_index < 1) throw parse_error("bar_index must be >= 1", line.row);
    if (r.n_beats < 1) throw parse_error("n_beats must be >= 1", line.row);
    group.rows.push_back(r);
  }
  if (groups.empty()) throw parse_error("timing file has a header but no data rows");

  std::vector<TempoSeries> out;
  for (auto& [id, group] : groups) {
    auto& rows = group.rows;
    if (rows.empty()) {
      throw parse_error("recording '" + id + "' has a start_ms row but no bars", group.start_row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.bar_index < b.bar_index; });
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k].bar_index == rows[k - 1].bar_index) {
        throw parse_error("duplicate bar " + std::to_string(rows[k].bar_index) + " for '" + id +
                              "' (also at row " + std::to_string(rows[k - 1].row) + ")",
                          rows[k].row);
      }
    }

    TempoSeries series{id, {}};
    series.bars.reserve(rows.size());
    if (schema == TimingSchema::timestamps) {
      std::vector<std::int64_t> stamps;
      stamps.reserve(rows.size());
      for (const auto& r : rows) stamps.push_back(r.timestamp_ms);
      std::vector<double> durations;
      try {
        durations = cumulative_to_durations(stamps, group.start_ms);
      } catch (const parse_error& e) {
        const auto& bad = rows[e.row() - 1];
        throw parse_error("recording '" + id + "' bar " + std::to_string(bad.bar_index) +
                              ": timestamp " + std::to_string(bad.timestamp_ms) +
                              " ms is not after the previous barline",
                          bad.row);
      }
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        series.bars.push_back(
            {r.bar_index, r.n_beats, durations[k], bpm_from_bar(r.n_beats, durations[k], r.bar_index)});
      }
    } else {
      for (const auto& r : rows) {
        if (!(r.bpm > 0.0)) throw parse_error("bpm must be positive", r.row);
        series.bars.push_back(
            {r.bar_index, r.n_beats, duration_from_bpm(r.n_beats, r.bpm, r.bar_index), r.bpm});
      }
    }

    const auto violations = validate_series(series);
    if (!violations.empty()) {
      std::size_t row = 0;
      std::string msg = "recording '" + id + "': ";
      for (std::size_t k = 0; k < violations.size(); ++k) {
        if (k) msg += "; ";
        msg += violations[k].message;
        if (row == 0) {
          for (const auto& r : rows)
            if (r.bar_index == violations[k].bar_index) row = r.row;
        }
      }
      throw parse_error(msg, row);
    }
    out.push_back(std::move(series));
  }
  return out;
}

/// Serializes series in the direct-BPM schema, 9 significant digits.
inline std::string write_timing_csv_bpm(std::span<const TempoSeries> series) {
  std::string out = detail::join(timing_header(TimingSchema::bpm)) + "\n";
  for (const auto& s : series) {
    for (const auto& b : s.bars) {
      out += s.recording_id + "," + std::to_string(b.bar_index) + "," +
             std::to_string(b.n_beats) + "," + detail::format_g9(b.bpm) + "\n";
    }
  }
  return out;
}

/// Serializes series as cumulative millisecond timestamps anchored at 0.
inline std::string write_timing_csv_timestamps(std::span<const TempoSeries> series) {
  std::string out = detail::join(timing_header(TimingSchema::timestamps)) + "\n";
  for (const auto& s : series) {
    double elapsed_s = 0.0;
    for (const auto& b : s.bars) {
      elapsed_s += b.duration_s;
      const auto ms = static_cast<std::int64_t>(std::llround(elapsed_s * 1000.0));
      out += s.recording_id + "," + std::to_string(b.bar_index) + "," +
             std::to_string(b.n_beats) + "," + std::to_string(ms) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Section and metadata files
// ---------------------------------------------------------------------------

inline SectionMap parse_section_csv(std::string_view content) {
  const auto lines = detail::split_csv(content);
  static const std::vector<std::string> header{"name", "start_bar", "end_bar"};
  if (lines.empty()) throw parse_error("empty section file");
  if (lines.front().fields != header) {
    throw parse_error("unknown section header '" + detail::join(lines.front().fields) +
                          "'; expected 'name,start_bar,end_bar'",
                      lines.front().row);
  }
  SectionMap map;
  std::vector<std::size_t> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& f = line.fields;
    if (f.size() != 3) {
      throw parse_error("expected 3 fields, got " + std::to_string(f.size()), line.row);
    }
    if (f[0].empty()) throw parse_error("empty section name", line.row);
    if (map.find(f[0])) throw parse_error("duplicate section name '" + f[0] + "'", line.row);
    map.sections.push_back({f[0], detail::parse_int<int>(f[1], "start_bar", line.row),
                            detail::parse_int<int>(f[2], "end_bar", line.row)});
    rows.push_back(line.row);
  }
  if (map.empty()) throw parse_error("section file has a header but no sections");

  const auto violations = validate_section_map(map);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::size_t row = 0;
    for (std::size_t k = 0; k < map.sections.size(); ++k)
      if (v.message.rfind("section '" + map.sections[k].name + "'", 0) == 0) row = rows[k];
    throw parse_error(v.message, row);
  }
  return map;
}

inline bool is_hex_color(std::string_view s) {
  if (s.size() != 7 || s[0] != '#') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  });
}

/// Parses `recording_id,label,year,color`. Year is empty, `YYYY` or
/// `YYYY-YYYY`; color is empty or `#RRGGBB`. The color column may be omitted.
inline std::vector<RecordingMeta> parse_meta_csv(std::string_view content) {
  const auto lines = detail::split_csv(content);
  static const std::vector<std::string> header{"recording_id", "label", "year", "color"};
  static const std::vector<std::string> short_header{"recording_id", "label", "year"};
  if (lines.empty()) throw parse_error("empty metadata file");
  const auto& h = lines.front().fields;
  if (h != header && h != short_header) {
    throw parse_error("unknown metadata header '" + detail::join(h) +
                          "'; expected 'recording_id,label,year,color'",
                      lines.front().row);
  }
  std::vector<RecordingMeta> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& f = line.fields;
    if (f.size() != h.size() && !(f.size() == 3 && h.size() == 4)) {
      throw parse_error("expected " + std::to_string(h.size()) + " fields, got " +
                            std::to_string(f.size()),
                        line.row);
    }
    RecordingMeta m;
    m.recording_id = f[0];
    if (m.recording_id.empty()) throw parse_error("empty recording_id", line.row);
    for (const auto& existing : out) {
      if (existing.recording_id == m.recording_id) {
        throw parse_error("duplicate recording_id '" + m.recording_id + "'", line.row);
      }
    }
    m.label = f[1].empty() ? f[0] : f[1];
    if (!f[2].empty()) {
      const auto dash = f[2].find('-', 1);
      m.year_first = detail::parse_int<int>(f[2].substr(0, dash), "year", line.row);
      m.year_last = dash == std::string::npos
                        ? *m.year_first
                        : detail::parse_int<int>(f[2].substr(dash + 1), "year", line.row);
      if (*m.year_last < *m.year_first) throw parse_error("year range is reversed", line.row);
    }
    if (f.size() == 4 && !f[3].empty()) {
      if (!is_hex_color(f[3])) {
        throw parse_error("color must be #RRGGBB, got '" + f[3] + "'", line.row);
      }
      m.color = f[3];
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace tempovis
