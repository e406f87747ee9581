#pragma once

// Command-line driver: timing CSV -> analysis -> chart -> SVG.
//
// Exit codes: 0 success, 1 invalid input or arguments, 2 I/O failure.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tempovis/charts.hpp"
#include "tempovis/density.hpp"
#include "tempovis/error.hpp"
#include "tempovis/ingest.hpp"
#include "tempovis/model.hpp"
#include "tempovis/section_stats.hpp"
#include "tempovis/svg.hpp"

namespace tempovis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

struct RunConfig {
  std::string subcommand;
  std::string input_path;
  std::string sections_path;
  std::string meta_path;
  std::string output_path;
  std::vector<std::string> recordings;

  int bins = 28;
  double bandwidth_factor = 0.07;
  int grid_points = 400;
  int kde_points = 800;
  double kde_min = 0.0;
  double kde_max = 265.0;
  double epsilon = 1e-3;
  double jitter = 0.5;
  std::uint64_t seed = 0;

  double ridge_scale = kDefaultRidgeScale;
  std::vector<double> ridge_offsets;

  bool percent = false;
  std::string section;  // stats selection by section name
  std::string bars;     // stats selection by "FIRST-LAST"
  std::vector<std::string> references;  // "BPM:LABEL:#RRGGBB:STYLE"
  bool no_references = false;

  int width_px = 0;  // 0: one pixel per scene unit
  int height_px = 0;
};

inline const char* kToolGuide =
    "Choosing a chart:\n"
    "  Where does performer A deviate from B at specific moments?   tempograph\n"
    "  How consistently does a performer hold their mean tempo?     histogram\n"
    "  How does one tempo distribution compare to many others?      ridgeline\n"
    "  How did a performer distribute time across formal sections?  stackedbar\n"
    "  How do mean tempo, variability and historical marks compare? combo\n"
    "  What has changed across decades of recordings?               all of them (panel)\n"
    "\n"
    "Statistics: means are unweighted over bars (one bar, one vote); standard\n"
    "deviations use the population form (divide by N). The ridgeline bandwidth\n"
    "is --bandwidth times the population standard deviation of each recording.\n"
    "\n"
    "Exit codes: 0 success, 1 invalid input, 2 I/O error.\n";

namespace detail {

struct Dataset {
  std::vector<TempoSeries> series;  // filtered, chronological
  std::optional<SectionMap> sections;
  std::vector<RecordingMeta> meta;
  std::vector<RecordingStyle> styles;
};

inline Dataset load(const RunConfig& cfg) {
  Dataset d;
  auto all = parse_timing_csv(read_file(cfg.input_path));
  if (!cfg.sections_path.empty()) d.sections = parse_section_csv(read_file(cfg.sections_path));
  if (!cfg.meta_path.empty()) d.meta = parse_meta_csv(read_file(cfg.meta_path));

  if (!cfg.recordings.empty()) {
    std::set<std::string> seen;
    std::vector<TempoSeries> picked;
    for (const auto& id : cfg.recordings) {
      if (!seen.insert(id).second) continue;
      auto it = std::find_if(all.begin(), all.end(),
                             [&](const TempoSeries& s) { return s.recording_id == id; });
      if (it == all.end()) throw domain_error("unknown recording id '" + id + "'");
      picked.push_back(*it);
    }
    all = std::move(picked);
  }

  // Chronological by metadata year, ties (and recordings without a year,
  // which sort last) by recording_id.
  const auto year_of = [&](const std::string& id) {
    for (const auto& m : d.meta)
      if (m.recording_id == id && m.year_first) return *m.year_first;
    return INT_MAX;
  };
  std::stable_sort(all.begin(), all.end(), [&](const TempoSeries& a, const TempoSeries& b) {
    const int ya = year_of(a.recording_id), yb = year_of(b.recording_id);
    return ya != yb ? ya < yb : a.recording_id < b.recording_id;
  });
  d.series = std::move(all);
  d.styles = resolve_styles(d.series, d.meta);
  return d;
}

inline std::optional<BarRange> selection(const RunConfig& cfg, const Dataset& d) {
  if (!cfg.section.empty() && !cfg.bars.empty()) {
    throw domain_error("--section and --bars are mutually exclusive");
  }
  if (!cfg.section.empty()) {
    if (!d.sections) throw domain_error("--section needs a section map (--sections)");
    const auto* s = d.sections->find(cfg.section);
    if (!s) throw domain_error("no section named '" + cfg.section + "' in the section map");
    return s->range();
  }
  if (!cfg.bars.empty()) {
    const auto dash = cfg.bars.find('-');
    if (dash == std::string::npos) throw domain_error("--bars expects FIRST-LAST, got '" + cfg.bars + "'");
    BarRange r{tempovis::detail::parse_int<int>(cfg.bars.substr(0, dash), "--bars first", 0),
               tempovis::detail::parse_int<int>(cfg.bars.substr(dash + 1), "--bars last", 0)};
    if (r.first < 1 || r.last < r.first) throw domain_error("--bars range '" + cfg.bars + "' is invalid");
    return r;
  }
  return std::nullopt;
}

inline std::string selection_name(const RunConfig& cfg) {
  if (!cfg.section.empty()) return cfg.section;
  if (!cfg.bars.empty()) return "bars " + cfg.bars;
  return "all";
}

inline Dash parse_dash(const std::string& s) {
  if (s == "solid" || s == "-") return Dash::solid;
  if (s == "dashed" || s == "--") return Dash::dashed;
  if (s == "dotted" || s == ":") return Dash::dotted;
  if (s == "dashdot" || s == "dash-dot" || s == "-.") return Dash::dash_dot;
  throw domain_error("unknown line style '" + s + "' (solid, dashed, dotted, dashdot)");
}

inline std::vector<ReferenceLine> reference_lines(const RunConfig& cfg) {
  if (cfg.no_references) return {};
  if (cfg.references.empty()) return default_reference_lines();
  std::vector<ReferenceLine> out;
  for (const auto& ref_text : cfg.references) {
    std::vector<std::string> parts;
    std::stringstream ss(ref_text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 4) {
      throw domain_error("--ref expects BPM:LABEL[:COLOR[:STYLE]], got '" + ref_text + "'");
    }
    ReferenceLine r;
    r.bpm = tempovis::detail::parse_real(parts[0], "--ref bpm", 0);
    r.label = parts[1];
    r.color = parts.size() > 2 && !parts[2].empty() ? parts[2] : "#000000";
    if (!is_hex_color(r.color)) throw domain_error("--ref colour must be #RRGGBB, got '" + r.color + "'");
    r.dash = parts.size() > 3 ? parse_dash(parts[3]) : Dash::dashed;
    if (!(r.bpm > 0.0)) throw domain_error("--ref bpm must be positive");
    out.push_back(std::move(r));
  }
  return out;
}

inline SplinePdfOptions spline_options(const RunConfig& cfg) {
  return {cfg.bins, cfg.grid_points, cfg.epsilon, cfg.jitter, cfg.seed};
}

inline std::vector<HistogramPanel> histogram_panels(const RunConfig& cfg, const Dataset& d,
                                                    std::ostream& err) {
  std::vector<HistogramPanel> out;
  for (std::size_t i = 0; i < d.series.size(); ++i) {
    const auto& s = d.series[i];
    const auto bpm = s.bpm_values();
    auto r = spline_pdf(bpm, spline_options(cfg));
    if (r.sparse_sample) {
      err << "warning: '" << s.recording_id << "' has " << bpm.size() << " bars (fewer than "
          << kSparseSampleThreshold << "); its spline density is coarse\n";
    }
    out.push_back({std::move(r.histogram), std::move(r.pdf), summary_stats(s), d.styles[i]});
  }
  return out;
}

inline RidgelinePanel ridgeline_panel(const RunConfig& cfg, const Dataset& d) {
  RidgelinePanel p;
  p.scale = cfg.ridge_scale;
  for (std::size_t i = 0; i < d.series.size(); ++i) {
    const auto bpm = d.series[i].bpm_values();
    p.kdes.push_back(gaussian_kde(bpm, cfg.bandwidth_factor, cfg.kde_min, cfg.kde_max, cfg.kde_points));
    p.means.push_back(mean(bpm));
    p.styles.push_back(d.styles[i]);
  }
  if (cfg.ridge_offsets.empty()) {
    p.offsets = ridge_offsets(p.kdes, p.scale);
  } else {
    if (cfg.ridge_offsets.size() != d.series.size()) {
      throw domain_error("--offsets has " + std::to_string(cfg.ridge_offsets.size()) +
                         " values for " + std::to_string(d.series.size()) + " recordings");
    }
    p.offsets = cfg.ridge_offsets;
  }
  return p;
}

inline StackedBarPanel stacked_panel(const RunConfig& cfg, const Dataset& d) {
  StackedBarPanel p;
  p.percent = cfg.percent;
  p.styles = d.styles;
  for (const auto& s : d.series) {
    p.durations.push_back(section_durations(s, d.sections ? *d.sections : whole_series_map(s)));
  }
  return p;
}

inline CombinationInputs combination_inputs(const RunConfig& cfg, const Dataset& d) {
  CombinationInputs in;
  const auto range = selection(cfg, d);
  for (std::size_t i = 0; i < d.series.size(); ++i) {
    const auto st = summary_stats(d.series[i], range);
    in.recordings.push_back({d.styles[i].label, st.mean_bpm, st.std_bpm, d.styles[i].color, "#333333"});
  }
  in.references = reference_lines(cfg);
  return in;
}

inline void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw io_error("error while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot move output into place at '" + path + "'");
  }
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// recording_id,scope,first_bar,last_bar,n_bars,mean_bpm,std_bpm,duration_s
inline std::string stats_csv(const RunConfig& cfg, const Dataset& d) {
  std::string out = "recording_id,scope,first_bar,last_bar,n_bars,mean_bpm,std_bpm,duration_s\n";
  const auto row = [&](const TempoSeries& s, const std::string& scope, BarRange r) {
    const auto st = summary_stats(s, r);
    out += s.recording_id + "," + scope + "," + std::to_string(r.first) + "," +
           std::to_string(r.last) + "," + std::to_string(st.n_bars) + "," +
           fixed(st.mean_bpm, 4) + "," + fixed(st.std_bpm, 4) + "," +
           fixed(st.total_duration_s, 3) + "\n";
  };
  const auto range = selection(cfg, d);
  for (const auto& s : d.series) {
    if (range) {
      row(s, selection_name(cfg), *range);
      continue;
    }
    row(s, "all", {s.first_bar(), s.last_bar()});
    if (d.sections) {
      (void)section_durations(s, *d.sections);  // checks coverage
      for (const auto& sec : d.sections->sections) row(s, sec.name, sec.range());
    }
  }
  return out;
}

inline ChartScene build_scene(const RunConfig& cfg, const Dataset& d, std::ostream& err) {
  const auto& cmd = cfg.subcommand;
  if (cmd == "tempograph") {
    return tempograph(d.series, d.sections ? &*d.sections : nullptr, d.styles);
  }
  if (cmd == "multiples") return small_multiples(d.series, d.styles);
  if (cmd == "histogram") return histogram_row(histogram_panels(cfg, d, err));
  if (cmd == "ridgeline") {
    const auto p = ridgeline_panel(cfg, d);
    return ridgeline(p.kdes, p.offsets, p.scale, p.styles, p.means);
  }
  if (cmd == "stackedbar") {
    const auto p = stacked_panel(cfg, d);
    return stacked_bars(p.durations, p.section_colors, p.percent, p.styles);
  }
  if (cmd == "combo") return combination_chart(combination_inputs(cfg, d));
  if (cmd == "panel") {
    FivePanelInputs in;
    in.series = d.series;
    in.sections = d.sections;
    in.styles = d.styles;
    in.histograms = histogram_panels(cfg, d, err);
    in.ridgeline = ridgeline_panel(cfg, d);
    in.stacked = stacked_panel(cfg, d);
    in.combination = combination_inputs(cfg, d);
    return five_panel(in);
  }
  throw domain_error("unknown subcommand '" + cmd + "'");
}

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto data = load(cfg);
    if (cfg.subcommand == "stats") {
      const auto text = stats_csv(cfg, data);
      if (cfg.output_path.empty()) out << text;
      else write_atomically(cfg.output_path, text);
      return kExitOk;
    }
    const auto scene = build_scene(cfg, data, err);
    const auto doc = cfg.width_px > 0 || cfg.height_px > 0
                         ? render(scene,
                                  cfg.width_px > 0 ? cfg.width_px
                                                   : static_cast<int>(std::lround(
                                                         scene.width * cfg.height_px / scene.height)),
                                  cfg.height_px > 0 ? cfg.height_px
                                                    : static_cast<int>(std::lround(
                                                          scene.height * cfg.width_px / scene.width)))
                         : render(scene);
    write_atomically(cfg.output_path, doc.text);
    return kExitOk;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace detail

/// Parses argv and runs one subcommand. Diagnostics go to `err`; `stats`
/// writes its CSV to `out` unless --out is given.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Bar-level tempo charts: tempographs, spline-smoothed histograms, ridgelines, "
               "sectional stacked bars and combination charts, rendered to SVG.",
               "tempovis"};
  app.footer(kToolGuide);
  app.require_subcommand(1);

  const auto add_inputs = [&](CLI::App* sub, bool needs_output) {
    sub->add_option("-i,--input", cfg.input_path, "Timing CSV (timestamp or bpm schema)")
        ->required();
    sub->add_option("-s,--sections", cfg.sections_path, "Section CSV: name,start_bar,end_bar");
    sub->add_option("-m,--meta", cfg.meta_path, "Metadata CSV: recording_id,label,year,color");
    auto* o = sub->add_option("-o,--out", cfg.output_path,
                              needs_output ? "Output SVG path" : "Output CSV path (default stdout)");
    if (needs_output) o->required();
    sub->add_option("-r,--recordings", cfg.recordings, "Recording ids to include (default all)")
        ->delimiter(',');
  };
  const auto add_size = [&](CLI::App* sub) {
    sub->add_option("--width", cfg.width_px, "Output width in pixels")->check(CLI::PositiveNumber);
    sub->add_option("--height", cfg.height_px, "Output height in pixels")->check(CLI::PositiveNumber);
  };
  const auto add_spline = [&](CLI::App* sub) {
    sub->add_option("--bins", cfg.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--grid-points", cfg.grid_points, "Spline density grid points")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", cfg.epsilon, "Offset of the CDF boundary knots (BPM)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--jitter", cfg.jitter, "Uniform jitter amplitude before binning (BPM)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "Jitter seed")->capture_default_str();
  };
  const auto add_kde = [&](CLI::App* sub) {
    sub->add_option("--bandwidth", cfg.bandwidth_factor,
                    "KDE bandwidth as a multiple of the population std")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--kde-points", cfg.kde_points, "KDE grid points")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--kde-min", cfg.kde_min, "KDE grid start (BPM)")->capture_default_str();
    sub->add_option("--kde-max", cfg.kde_max, "KDE grid end (BPM)")->capture_default_str();
    sub->add_option("--scale", cfg.ridge_scale, "Ridge height multiplier")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--offsets", cfg.ridge_offsets, "Ridge baselines, top first (default: auto)")
        ->delimiter(',');
  };
  const auto add_selection = [&](CLI::App* sub) {
    sub->add_option("--section", cfg.section, "Restrict statistics to this section");
    sub->add_option("--bars", cfg.bars, "Restrict statistics to bars FIRST-LAST");
  };
  const auto add_combo = [&](CLI::App* sub) {
    add_selection(sub);
    sub->add_option("--ref", cfg.references,
                    "Reference line BPM:LABEL[:#RRGGBB[:solid|dashed|dotted|dashdot]] "
                    "(repeatable; replaces the Czerny/Moscheles/Kolisch defaults)");
    sub->add_flag("--no-ref", cfg.no_references, "Draw no reference lines");
  };

  auto* tempograph_cmd = app.add_subcommand("tempograph", "Overlaid tempo curves (at most 5 recordings)");
  add_inputs(tempograph_cmd, true);
  add_size(tempograph_cmd);

  auto* multiples_cmd = app.add_subcommand("multiples", "One small tempograph per recording");
  add_inputs(multiples_cmd, true);
  add_size(multiples_cmd);

  auto* histogram_cmd = app.add_subcommand("histogram", "Histograms with spline-smoothed densities");
  add_inputs(histogram_cmd, true);
  add_size(histogram_cmd);
  add_spline(histogram_cmd);

  auto* ridgeline_cmd = app.add_subcommand("ridgeline", "Stacked KDE ridges on a shared BPM axis");
  add_inputs(ridgeline_cmd, true);
  add_size(ridgeline_cmd);
  add_kde(ridgeline_cmd);

  auto* stacked_cmd = app.add_subcommand("stackedbar", "Section durations stacked per recording");
  add_inputs(stacked_cmd, true);
  add_size(stacked_cmd);
  stacked_cmd->add_flag("--percent", cfg.percent, "Show each bar as percent of its total");

  auto* combo_cmd = app.add_subcommand("combo", "Mean BPM bars, std markers and reference lines");
  add_inputs(combo_cmd, true);
  add_size(combo_cmd);
  add_combo(combo_cmd);

  auto* panel_cmd = app.add_subcommand("panel", "Five-panel composite of every chart");
  add_inputs(panel_cmd, true);
  add_size(panel_cmd);
  add_spline(panel_cmd);
  add_kde(panel_cmd);
  add_combo(panel_cmd);
  panel_cmd->add_flag("--percent", cfg.percent, "Stacked bars in percent of each total");

  auto* stats_cmd = app.add_subcommand("stats", "Summary statistics and section durations as CSV");
  add_inputs(stats_cmd, false);
  add_selection(stats_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  return detail::execute(cfg, out, err);
}

}  // namespace tempovis::cli
