#pragma once

// Chart composition: analysis products -> ChartScene.
//
// Each chart has a natural canvas size in abstract units (roughly 100 units
// per inch of the reference figures). Composite figures embed standalone
// scenes through Group elements, so a panel's content is exactly the scene
// the standalone chart function returns for the same inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tempovis/density.hpp"
#include "tempovis/error.hpp"
#include "tempovis/model.hpp"
#include "tempovis/scene.hpp"
#include "tempovis/section_stats.hpp"

namespace tempovis {

/// Overlaid tempographs beyond this count become unreadable.
inline constexpr std::size_t kMaxOverlaidRecordings = 5;

inline const std::vector<std::string>& default_recording_colors() {
  static const std::vector<std::string> colors{"#2166ac", "#d6604d", "#4daf4a", "#984ea3",
                                               "#ff7f00", "#a65628", "#f781bf", "#666666",
                                               "#1b9e77", "#e7298a"};
  return colors;
}

inline const std::vector<std::string>& default_section_colors() {
  static const std::vector<std::string> colors{"#d1e5f0", "#fddbc7", "#e0f3db", "#fee090",
                                               "#f5f5f5", "#e7d4e8", "#c7eae5", "#f6e8c3"};
  return colors;
}

/// Band fills for section shading behind tempographs; mid-tone versions of
/// the section palette so they stay visible at low opacity.
inline const std::vector<std::string>& default_band_colors() {
  static const std::vector<std::string> colors{"#4393c3", "#d6604d", "#5aae61", "#e08214",
                                               "#878787", "#9970ab", "#35978f", "#bf812d"};
  return colors;
}

struct RecordingStyle {
  std::string label;
  std::string color;
};

/// Label and colour for a recording: metadata when present, otherwise the
/// id and the default palette entry for its position.
inline RecordingStyle recording_style(std::span<const RecordingMeta> meta,
                                      const std::string& recording_id, std::size_t index) {
  const auto& palette = default_recording_colors();
  RecordingStyle style{recording_id, palette[index % palette.size()]};
  for (const auto& m : meta) {
    if (m.recording_id != recording_id) continue;
    if (!m.label.empty()) style.label = m.label;
    if (m.color) style.color = *m.color;
  }
  return style;
}

/// Styles for `series_list` in order, resolved against `meta`.
inline std::vector<RecordingStyle> resolve_styles(std::span<const TempoSeries> series_list,
                                                  std::span<const RecordingMeta> meta) {
  std::vector<RecordingStyle> out;
  out.reserve(series_list.size());
  for (std::size_t i = 0; i < series_list.size(); ++i)
    out.push_back(recording_style(meta, series_list[i].recording_id, i));
  return out;
}

namespace detail {

struct Margins {
  double left, right, top, bottom;
};

inline Rect plot_region(double width, double height, Margins m) {
  return {m.left, m.top, width - m.left - m.right, height - m.top - m.bottom};
}

/// [lo, hi] widened symmetrically when degenerate.
inline std::pair<double, double> nondegenerate(double lo, double hi) {
  if (hi > lo) return {lo, hi};
  const double pad = std::max(0.5, std::abs(lo) * 1e-6);
  return {lo - pad, hi + pad};
}

inline Axis make_axis(AxisSide side, const Rect& region, double lo, double hi, std::string label,
                      bool show_ticks = true) {
  Axis a;
  a.side = side;
  a.frame = region;
  a.lo = lo;
  a.hi = hi;
  a.label = std::move(label);
  a.show_ticks = show_ticks;
  if (show_ticks) {
    a.ticks = nice_ticks(lo, hi, side == AxisSide::bottom ? 8 : 5);
    a.tick_labels = tick_labels(a.ticks);
  }
  return a;
}

/// Categorical bottom axis: one tick per slot, labelled.
inline Axis category_axis(const Rect& region, std::size_t count,
                          std::vector<std::string> labels) {
  Axis a;
  a.side = AxisSide::bottom;
  a.frame = region;
  a.lo = -0.5;
  a.hi = static_cast<double>(count) - 0.5;
  for (std::size_t i = 0; i < count; ++i) a.ticks.push_back(static_cast<double>(i));
  a.tick_labels = std::move(labels);
  return a;
}

inline void add_clipped(ChartScene& scene, const Polyline& line, const Rect& clip) {
  for (auto& piece : clip_polyline(line.points, clip)) {
    Polyline p = line;
    p.points = std::move(piece);
    scene.add(std::move(p));
  }
}

inline void add_clipped(ChartScene& scene, const Polygon& poly, const Rect& clip) {
  auto pts = clip_polygon(poly.points, clip);
  if (pts.size() < 3) return;
  Polygon p = poly;
  p.points = std::move(pts);
  scene.add(std::move(p));
}

inline void add_clipped(ChartScene& scene, const Rectangle& rect, const Rect& clip) {
  const auto box = clip_rect(rect.box, clip);
  if (!box) return;
  Rectangle r = rect;
  r.box = *box;
  scene.add(std::move(r));
}

struct LegendEntry {
  enum class Kind { line, patch, marker_line };
  std::string label;
  std::string color;
  Kind kind = Kind::line;
  Dash dash = Dash::solid;
  double width = 1.5;
};

inline constexpr double kLegendFont = 10.0;
inline constexpr double kLegendRow = 15.0;
inline constexpr double kLegendSwatch = 22.0;
inline constexpr double kLegendPad = 6.0;

inline double legend_width(std::span<const LegendEntry> entries) {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, text_width(e.label, kLegendFont));
  // Viewers often substitute a font wider than the metric table assumes.
  return 1.15 * w + kLegendSwatch + 3.0 * kLegendPad;
}

inline double legend_height(std::span<const LegendEntry> entries) {
  return static_cast<double>(entries.size()) * kLegendRow + kLegendPad;
}

/// Framed legend with its top-left corner at `origin`.
inline void add_legend(ChartScene& scene, std::span<const LegendEntry> entries, Point origin) {
  if (entries.empty()) return;
  Rectangle box;
  box.box = {origin.x, origin.y, legend_width(entries), legend_height(entries)};
  box.fill = "#ffffff";
  box.opacity = 0.85;
  box.edge = "#cccccc";
  box.edge_width = 0.8;
  scene.add(box);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double cy = origin.y + kLegendPad + kLegendRow * (static_cast<double>(i) + 0.5);
    const double x0 = origin.x + kLegendPad;
    const double x1 = x0 + kLegendSwatch;
    if (e.kind == LegendEntry::Kind::patch) {
      Rectangle sw;
      sw.box = {x0, cy - 5.0, kLegendSwatch, 10.0};
      sw.fill = e.color;
      sw.edge = "#999999";
      sw.edge_width = 0.5;
      scene.add(sw);
    } else {
      scene.add(Polyline{{{x0, cy}, {x1, cy}}, e.color, e.width, e.dash, 1.0});
      if (e.kind == LegendEntry::Kind::marker_line) {
        scene.add(Marker{{0.5 * (x0 + x1), cy}, 3.5, e.color, e.color});
      }
    }
    Text t;
    t.pos = {x1 + kLegendPad, cy + 3.5};
    t.content = e.label;
    t.size = kLegendFont;
    scene.add(std::move(t));
  }
}

inline Text title_text(const std::string& content, double x, double y, double size = 12.0) {
  Text t;
  t.pos = {x, y};
  t.content = content;
  t.anchor = Anchor::middle;
  t.size = size;
  t.bold = true;
  return t;
}

inline std::shared_ptr<const ChartScene> share(ChartScene scene) {
  return std::make_shared<const ChartScene>(std::move(scene));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tempograph
// ---------------------------------------------------------------------------

struct TempographOptions {
  double width = 1200.0;
  double height = 400.0;
  /// Fixed y window (BPM); defaults to [min, max] over all plotted bars.
  std::optional<std::pair<double, double>> y_range;
  double line_width = 0.9;
  double band_opacity = 0.15;
};

/// Bar index against BPM, one line per recording, optional section shading.
/// `styles` is either empty (ids and default colours) or one per series.
inline ChartScene tempograph(std::span<const TempoSeries> series_list,
                             const SectionMap* map = nullptr,
                             std::span<const RecordingStyle> styles = {},
                             const TempographOptions& opt = {}) {
  if (series_list.empty()) throw domain_error("tempograph needs at least one recording");
  if (!styles.empty() && styles.size() != series_list.size()) {
    throw domain_error("tempograph: " + std::to_string(series_list.size()) +
                       " recordings but " + std::to_string(styles.size()) + " styles");
  }
  if (series_list.size() > kMaxOverlaidRecordings) {
    throw domain_error("tempograph overlays at most " + std::to_string(kMaxOverlaidRecordings) +
                       " recordings (got " + std::to_string(series_list.size()) +
                       "); use small multiples ('multiples') for larger sets");
  }
  int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series_list) {
    if (s.empty()) throw domain_error("tempograph: recording '" + s.recording_id + "' has no bars");
    first = std::min(first, s.first_bar());
    last = std::max(last, s.last_bar());
    for (const auto& b : s.bars) {
      lo = std::min(lo, b.bpm);
      hi = std::max(hi, b.bpm);
    }
  }
  const auto [y_lo, y_hi] = detail::nondegenerate(opt.y_range ? opt.y_range->first : lo,
                                                  opt.y_range ? opt.y_range->second : hi);

  ChartScene scene{opt.width, opt.height, {}};
  const Rect region = detail::plot_region(opt.width, opt.height, {70.0, 20.0, 30.0, 50.0});
  const Frame frame{region, first - 0.5, last + 0.5, y_lo, y_hi};

  if (map) {
    const auto& bands = default_band_colors();
    for (std::size_t k = 0; k < map->sections.size(); ++k) {
      const auto& sec = map->sections[k];
      const double x0 = std::max(frame.sx(sec.start_bar - 0.5), region.x);
      const double x1 = std::min(frame.sx(sec.end_bar + 0.5), region.right());
      if (x1 <= x0) continue;
      scene.add(Span{{x0, region.y, x1 - x0, region.h}, true, bands[k % bands.size()],
                     opt.band_opacity});
      Text label;
      label.pos = {x0 + 3.0, region.y - 6.0};
      label.content = sec.name;
      label.size = 9.0;
      label.color = "#333333";
      scene.add(std::move(label));
    }
  }

  std::vector<detail::LegendEntry> legend;
  for (std::size_t i = 0; i < series_list.size(); ++i) {
    const auto& s = series_list[i];
    const auto style = styles.empty() ? recording_style({}, s.recording_id, i) : styles[i];
    Polyline line;
    line.points.reserve(s.bars.size());
    for (const auto& b : s.bars) line.points.push_back(frame.map(b.bar_index, b.bpm));
    line.color = style.color;
    line.width = opt.line_width;
    detail::add_clipped(scene, line, region);
    legend.push_back({style.label, style.color, detail::LegendEntry::Kind::line, Dash::solid, 1.5});
  }

  scene.add(detail::make_axis(AxisSide::bottom, region, frame.x_lo, frame.x_hi, "Bar number"));
  scene.add(detail::make_axis(AxisSide::left, region, y_lo, y_hi, "Tempo (BPM)"));
  detail::add_legend(scene, legend,
                     {region.right() - detail::legend_width(legend) - 8.0, region.y + 8.0});
  return scene;
}

/// One mini-tempograph per recording in a near-square grid, all sharing the
/// same y window: [min, max] BPM over every recording.
inline ChartScene small_multiples(std::span<const TempoSeries> series_list,
                                  std::span<const RecordingStyle> styles = {},
                                  double width = 1200.0) {
  if (series_list.empty()) throw domain_error("small multiples need at least one recording");
  if (!styles.empty() && styles.size() != series_list.size()) {
    throw domain_error("small multiples: " + std::to_string(series_list.size()) +
                       " recordings but " + std::to_string(styles.size()) + " styles");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series_list) {
    if (s.empty()) throw domain_error("small multiples: recording '" + s.recording_id + "' has no bars");
    for (const auto& b : s.bars) {
      lo = std::min(lo, b.bpm);
      hi = std::max(hi, b.bpm);
    }
  }
  const auto n = series_list.size();
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const auto rows = (n + cols - 1) / cols;

  TempographOptions panel_opt;
  panel_opt.y_range = std::pair{lo, hi};
  const double scale = width / (static_cast<double>(cols) * panel_opt.width);
  const double cell_w = panel_opt.width * scale;
  const double cell_h = panel_opt.height * scale;

  ChartScene scene{width, cell_h * static_cast<double>(rows), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const RecordingStyle style =
        styles.empty() ? recording_style({}, series_list[i].recording_id, i) : styles[i];
    auto panel = tempograph(series_list.subspan(i, 1), nullptr, std::span(&style, 1), panel_opt);
    scene.add(Group{{cell_w * static_cast<double>(i % cols), cell_h * static_cast<double>(i / cols)},
                    scale,
                    detail::share(std::move(panel))});
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Histogram with spline PDF
// ---------------------------------------------------------------------------

struct HistogramChartOptions {
  double width = 600.0;
  double height = 400.0;
  double bar_opacity = 0.35;
  double pdf_width = 2.5;
};

/// Density-normalized histogram bars, the spline PDF in bold, and a dashed
/// vertical line at the mean.
inline ChartScene histogram_chart(const HistogramResult& hist, const SplinePdf& pdf,
                                  const SummaryStats& stats, const RecordingStyle& style,
                                  const HistogramChartOptions& opt = {}) {
  if (hist.bins() == 0 || hist.edges.size() != hist.bins() + 1) {
    throw domain_error("histogram chart: malformed histogram");
  }
  if (pdf.grid.size() != pdf.density.size()) {
    throw domain_error("histogram chart: pdf grid and density differ in length");
  }
  const auto heights = hist.density();
  double top = 0.0;
  for (double v : heights) top = std::max(top, v);
  for (double v : pdf.density) top = std::max(top, v);
  if (!(top > 0.0)) top = 1.0;

  ChartScene scene{opt.width, opt.height, {}};
  const Rect region = detail::plot_region(opt.width, opt.height, {70.0, 20.0, 35.0, 50.0});
  const Frame frame{region, hist.edges.front(), hist.edges.back(), 0.0, top * 1.05};

  for (std::size_t k = 0; k < hist.bins(); ++k) {
    if (hist.counts[k] == 0) continue;
    const double x0 = frame.sx(hist.edges[k]);
    const double x1 = frame.sx(hist.edges[k + 1]);
    const double y1 = frame.sy(heights[k]);
    Rectangle bar;
    bar.box = {x0, y1, x1 - x0, frame.sy(0.0) - y1};
    bar.fill = style.color;
    bar.opacity = opt.bar_opacity;
    bar.edge = "#ffffff";
    bar.edge_width = 0.6;
    detail::add_clipped(scene, bar, region);
  }

  Polyline curve;
  curve.points.reserve(pdf.grid.size());
  for (std::size_t g = 0; g < pdf.grid.size(); ++g)
    curve.points.push_back(frame.map(pdf.grid[g], pdf.density[g]));
  curve.color = style.color;
  curve.width = opt.pdf_width;
  detail::add_clipped(scene, curve, region);

  Polyline mean_line;
  mean_line.points = {frame.map(stats.mean_bpm, frame.y_lo), frame.map(stats.mean_bpm, frame.y_hi)};
  mean_line.color = "#333333";
  mean_line.width = 1.3;
  mean_line.dash = Dash::dashed;
  detail::add_clipped(scene, mean_line, region);

  scene.add(detail::make_axis(AxisSide::bottom, region, frame.x_lo, frame.x_hi, "Tempo (BPM)"));
  scene.add(detail::make_axis(AxisSide::left, region, frame.y_lo, frame.y_hi, "Density"));
  scene.add(detail::title_text(style.label, region.x + region.w / 2.0, region.y - 12.0));
  return scene;
}

// ---------------------------------------------------------------------------
// Ridgeline
// ---------------------------------------------------------------------------

inline constexpr double kDefaultRidgeScale = 4.5;

/// Spacing between auto-placed ridges as a fraction of the tallest ridge,
/// so adjacent ridges overlap by at most a quarter of peak height.
inline constexpr double kAutoRidgeSpacing = 0.75;

/// Default vertical offsets, top ridge first. Two ridges use the reference
/// pair {0.55, 0}; larger stacks are spaced uniformly from the peak density.
inline std::vector<double> ridge_offsets(std::span<const KdeCurve> kdes,
                                         double scale = kDefaultRidgeScale) {
  const auto n = kdes.size();
  if (n == 0) return {};
  if (n == 1) return {0.0};
  if (n == 2) return {0.55, 0.0};
  double peak = 0.0;
  for (const auto& k : kdes)
    for (double d : k.density) peak = std::max(peak, d * scale);
  const double step = peak > 0.0 ? kAutoRidgeSpacing * peak : 1.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(n - 1 - i) * step;
  return out;
}

struct RidgelineOptions {
  double width = 1000.0;
  double height = 300.0;
  double fill_opacity = 0.55;
  double outline_width = 2.0;
};

/// Stacked KDE ridges on a shared BPM axis, one per recording, top first.
inline ChartScene ridgeline(std::span<const KdeCurve> kdes, std::span<const double> offsets,
                            double scale, std::span<const RecordingStyle> styles,
                            std::span<const double> means, const RidgelineOptions& opt = {}) {
  const auto n = kdes.size();
  if (n == 0) throw domain_error("ridgeline needs at least one density");
  if (offsets.size() != n || styles.size() != n || means.size() != n) {
    throw domain_error("ridgeline: " + std::to_string(n) + " densities but " +
                       std::to_string(offsets.size()) + " offsets, " +
                       std::to_string(styles.size()) + " styles, " +
                       std::to_string(means.size()) + " means");
  }
  if (!(scale > 0.0)) throw domain_error("ridgeline scale must be positive");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(offsets[i] < offsets[i - 1])) {
      throw domain_error("ridgeline offsets must be strictly decreasing from top to bottom");
    }
  }

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_hi = -std::numeric_limits<double>::infinity();
  std::vector<double> peaks(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = kdes[i];
    if (k.grid.empty() || k.grid.size() != k.density.size()) {
      throw domain_error("ridgeline: malformed density " + std::to_string(i));
    }
    x_lo = std::min(x_lo, k.grid.front());
    x_hi = std::max(x_hi, k.grid.back());
    for (double d : k.density) peaks[i] = std::max(peaks[i], d * scale);
    y_hi = std::max(y_hi, offsets[i] + peaks[i]);
  }
  const double y_lo = offsets[n - 1];
  std::tie(x_lo, x_hi) = detail::nondegenerate(x_lo, x_hi);
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  y_hi += 0.05 * (y_hi - y_lo);

  ChartScene scene{opt.width, opt.height, {}};
  const Rect region = detail::plot_region(opt.width, opt.height, {30.0, 20.0, 15.0, 50.0});
  const Frame frame{region, x_lo, x_hi, y_lo, y_hi};

  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = kdes[i];
    const double base = offsets[i];
    Polygon fill;
    Polyline outline;
    for (std::size_t g = 0; g < k.grid.size(); ++g)
      outline.points.push_back(frame.map(k.grid[g], k.density[g] * scale + base));
    fill.points = outline.points;
    fill.points.push_back(frame.map(k.grid.back(), base));
    fill.points.push_back(frame.map(k.grid.front(), base));
    fill.fill = styles[i].color;
    fill.opacity = opt.fill_opacity;
    outline.color = styles[i].color;
    outline.width = opt.outline_width;
    detail::add_clipped(scene, fill, region);
    detail::add_clipped(scene, outline, region);

    Polyline mean_line;
    mean_line.points = {frame.map(means[i], base), frame.map(means[i], base + peaks[i])};
    mean_line.color = styles[i].color;
    mean_line.width = 1.3;
    mean_line.dash = Dash::dotted;
    mean_line.opacity = 0.85;
    detail::add_clipped(scene, mean_line, region);

    Text label;
    label.pos = {region.x + 6.0, frame.sy(base) - 5.0};
    label.content = styles[i].label;
    label.size = 10.0;
    label.color = styles[i].color;
    scene.add(std::move(label));
  }

  scene.add(detail::make_axis(AxisSide::bottom, region, x_lo, x_hi, "Tempo (BPM)"));
  scene.add(detail::make_axis(AxisSide::left, region, y_lo, y_hi, "", false));
  return scene;
}

// ---------------------------------------------------------------------------
// Stacked sectional bars
// ---------------------------------------------------------------------------

struct StackedBarOptions {
  double width = 600.0;
  double height = 400.0;
  double bar_width = 0.6;  // fraction of a category slot
};

/// One bar per recording, segments stacked in section order. In percent mode
/// each bar is normalized to its own total.
inline ChartScene stacked_bars(std::span<const SectionDurations> durations,
                               std::span<const std::string> section_colors,
                               bool percent, std::span<const RecordingStyle> styles,
                               const StackedBarOptions& opt = {}) {
  if (durations.empty()) throw domain_error("stacked bars need at least one recording");
  if (styles.size() != durations.size()) {
    throw domain_error("stacked bars: " + std::to_string(durations.size()) + " recordings but " +
                       std::to_string(styles.size()) + " styles");
  }
  const auto& first = durations.front().entries;
  if (first.empty()) throw domain_error("stacked bars need at least one section");
  for (const auto& d : durations) {
    bool same = d.entries.size() == first.size();
    for (std::size_t k = 0; same && k < first.size(); ++k)
      same = d.entries[k].first == first[k].first;
    if (!same) {
      throw domain_error("stacked bars: '" + d.recording_id +
                         "' has a different section sequence from '" +
                         durations.front().recording_id + "'");
    }
  }
  const auto& palette = section_colors.empty()
                            ? std::span<const std::string>(default_section_colors())
                            : section_colors;

  double top = 0.0;
  for (const auto& d : durations) top = std::max(top, d.total());
  const double y_hi = percent ? 100.0 : (top > 0.0 ? top * 1.05 : 1.0);

  std::vector<detail::LegendEntry> legend;
  for (std::size_t k = 0; k < first.size(); ++k) {
    legend.push_back({first[k].first, palette[k % palette.size()],
                      detail::LegendEntry::Kind::patch, Dash::solid, 1.0});
  }
  const double legend_w = detail::legend_width(legend);

  ChartScene scene{opt.width, opt.height, {}};
  const Rect region =
      detail::plot_region(opt.width, opt.height, {70.0, legend_w + 30.0, 20.0, 50.0});
  const auto n = durations.size();
  const Frame frame{region, -0.5, static_cast<double>(n) - 0.5, 0.0, y_hi};

  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = durations[i];
    const double total = d.total();
    double bottom = 0.0;
    const double xc = static_cast<double>(i);
    for (std::size_t k = 0; k < d.entries.size(); ++k) {
      double v = d.entries[k].second;
      if (percent) v = total > 0.0 ? 100.0 * v / total : 0.0;
      const double x0 = frame.sx(xc - opt.bar_width / 2.0);
      const double x1 = frame.sx(xc + opt.bar_width / 2.0);
      const double y0 = frame.sy(bottom + v);
      const double y1 = frame.sy(bottom);
      Rectangle seg;
      seg.box = {x0, y0, x1 - x0, y1 - y0};
      seg.fill = palette[k % palette.size()];
      seg.edge = "#ffffff";
      seg.edge_width = 1.0;
      detail::add_clipped(scene, seg, region);
      bottom += v;
    }
  }

  std::vector<std::string> labels;
  for (const auto& s : styles) labels.push_back(s.label);
  scene.add(detail::category_axis(region, n, std::move(labels)));
  scene.add(detail::make_axis(AxisSide::left, region, 0.0, y_hi,
                              percent ? "Share of movement (%)" : "Duration (s)"));
  detail::add_legend(scene, legend, {region.right() + 15.0, region.y});
  return scene;
}

// ---------------------------------------------------------------------------
// Combination chart
// ---------------------------------------------------------------------------

struct CombinationRecording {
  std::string label;
  double mean_bpm = 0.0;
  double std_bpm = 0.0;
  std::string bar_color;
  std::string edge_color = "#333333";
};

struct ReferenceLine {
  double bpm = 0.0;
  std::string label;
  std::string color;
  Dash dash = Dash::dashed;
};

struct CombinationInputs {
  std::vector<CombinationRecording> recordings;
  std::vector<ReferenceLine> references;
};

/// Historical metronome recommendations drawn on the combination chart.
inline std::vector<ReferenceLine> default_reference_lines() {
  return {{160.0, "Czerny", "#e41a1c", Dash::dashed},
          {160.0, "Moscheles", "#ff7f00", Dash::dotted},
          {126.0, "Kolisch", "#4daf4a", Dash::dash_dot}};
}

struct CombinationOptions {
  double width = 600.0;
  double height = 400.0;
  double bar_width = 0.6;
  double headroom = 0.05;
};

/// Mean BPM bars on the left axis, standard deviation markers on the right
/// axis, horizontal reference lines on the left axis.
inline ChartScene combination_chart(const CombinationInputs& in,
                                    const CombinationOptions& opt = {}) {
  if (in.recordings.empty()) throw domain_error("combination chart needs at least one recording");
  for (const auto& r : in.references) {
    if (!(r.bpm > 0.0)) throw domain_error("reference line '" + r.label + "' must have positive BPM");
  }
  double left_top = 0.0, right_top = 0.0;
  for (const auto& r : in.recordings) {
    left_top = std::max(left_top, r.mean_bpm);
    right_top = std::max(right_top, r.std_bpm);
  }
  for (const auto& r : in.references) left_top = std::max(left_top, r.bpm);
  const double left_hi = left_top > 0.0 ? left_top * (1.0 + opt.headroom) : 1.0;
  const double right_hi = right_top > 0.0 ? right_top * (1.0 + opt.headroom) : 1.0;

  std::vector<detail::LegendEntry> legend;
  for (const auto& r : in.references)
    legend.push_back({r.label, r.color, detail::LegendEntry::Kind::line, r.dash, 1.3});
  legend.push_back({"Std. dev.", "#555555", detail::LegendEntry::Kind::marker_line, Dash::dashed, 1.5});
  const double legend_w = detail::legend_width(legend);

  ChartScene scene{opt.width, opt.height, {}};
  const Rect region =
      detail::plot_region(opt.width, opt.height, {70.0, legend_w + 80.0, 20.0, 50.0});
  const auto n = in.recordings.size();
  const Frame left{region, -0.5, static_cast<double>(n) - 0.5, 0.0, left_hi};
  const Frame right{region, -0.5, static_cast<double>(n) - 0.5, 0.0, right_hi};

  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = in.recordings[i];
    const double xc = static_cast<double>(i);
    const double x0 = left.sx(xc - opt.bar_width / 2.0);
    const double x1 = left.sx(xc + opt.bar_width / 2.0);
    const double y0 = left.sy(r.mean_bpm);
    Rectangle bar;
    bar.box = {x0, y0, x1 - x0, left.sy(0.0) - y0};
    bar.fill = r.bar_color.empty() ? default_recording_colors()[i % default_recording_colors().size()]
                                   : r.bar_color;
    bar.edge = r.edge_color;
    bar.edge_width = 1.2;
    detail::add_clipped(scene, bar, region);
  }

  for (const auto& ref : in.references) {
    Polyline line;
    line.points = {left.map(left.x_lo, ref.bpm), left.map(left.x_hi, ref.bpm)};
    line.color = ref.color;
    line.width = 1.3;
    line.dash = ref.dash;
    detail::add_clipped(scene, line, region);
  }

  Polyline std_line;
  for (std::size_t i = 0; i < n; ++i)
    std_line.points.push_back(right.map(static_cast<double>(i), in.recordings[i].std_bpm));
  std_line.color = "#555555";
  std_line.width = 1.5;
  std_line.dash = Dash::dashed;
  if (std_line.points.size() > 1) detail::add_clipped(scene, std_line, region);
  for (const auto& p : std_line.points) {
    if (region.contains(p)) scene.add(Marker{p, 3.5, "#555555", "#555555"});
  }

  std::vector<std::string> labels;
  for (const auto& r : in.recordings) labels.push_back(r.label);
  scene.add(detail::category_axis(region, n, std::move(labels)));
  scene.add(detail::make_axis(AxisSide::left, region, 0.0, left_hi, "Mean tempo (BPM)"));
  scene.add(detail::make_axis(AxisSide::right, region, 0.0, right_hi, "Std. dev. (BPM)"));
  detail::add_legend(scene, legend, {region.right() + 65.0, region.y});
  return scene;
}

// ---------------------------------------------------------------------------
// Five-panel composite
// ---------------------------------------------------------------------------

struct HistogramPanel {
  HistogramResult histogram;
  SplinePdf pdf;
  SummaryStats stats;
  RecordingStyle style;
};

struct RidgelinePanel {
  std::vector<KdeCurve> kdes;
  std::vector<double> offsets;
  double scale = kDefaultRidgeScale;
  std::vector<RecordingStyle> styles;
  std::vector<double> means;
};

struct StackedBarPanel {
  std::vector<SectionDurations> durations;
  std::vector<std::string> section_colors;
  bool percent = false;
  std::vector<RecordingStyle> styles;
};

struct FivePanelInputs {
  std::vector<TempoSeries> series;
  std::optional<SectionMap> sections;
  std::vector<RecordingStyle> styles;
  std::vector<HistogramPanel> histograms;
  RidgelinePanel ridgeline;
  StackedBarPanel stacked;
  CombinationInputs combination;
};

/// Side-by-side histogram charts, one per recording.
inline ChartScene histogram_row(std::span<const HistogramPanel> panels, double width = 0.0) {
  if (panels.empty()) throw domain_error("histogram row needs at least one histogram");
  const HistogramChartOptions opt;
  const double natural = opt.width * static_cast<double>(panels.size());
  const double scale = width > 0.0 ? width / natural : 1.0;
  ChartScene scene{natural * scale, opt.height * scale, {}};
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& p = panels[i];
    scene.add(Group{{opt.width * scale * static_cast<double>(i), 0.0}, scale,
                    detail::share(histogram_chart(p.histogram, p.pdf, p.stats, p.style, opt))});
  }
  return scene;
}

/// Composite figure: (a) tempograph across the full width; (b) histograms
/// side by side; (c) ridgeline, (d) stacked bars and (e) combination chart
/// in one row.
inline ChartScene five_panel(const FivePanelInputs& in, double width = 1500.0) {
  const double header = 26.0;
  const double gap = 10.0;

  const auto sub_a = detail::share(
      tempograph(in.series, in.sections ? &*in.sections : nullptr, in.styles));
  const auto sub_b = detail::share(histogram_row(in.histograms));
  const auto sub_c = detail::share(ridgeline(in.ridgeline.kdes, in.ridgeline.offsets,
                                             in.ridgeline.scale, in.ridgeline.styles,
                                             in.ridgeline.means, RidgelineOptions{600.0, 400.0}));
  const auto sub_d = detail::share(stacked_bars(in.stacked.durations, in.stacked.section_colors,
                                                in.stacked.percent, in.stacked.styles));
  const auto sub_e = detail::share(combination_chart(in.combination));

  ChartScene scene{width, 0.0, {}};
  double y = 0.0;
  const auto place = [&](const char* letter, const std::shared_ptr<const ChartScene>& sub,
                         double x, double w, double top) {
    const double scale = w / sub->width;
    Text t;
    t.pos = {x + 4.0, top + 18.0};
    t.content = letter;
    t.size = 16.0;
    t.bold = true;
    scene.add(std::move(t));
    scene.add(Group{{x, top + header}, scale, sub});
    return header + sub->height * scale;
  };

  y += place("(a)", sub_a, 0.0, width, y) + gap;
  y += place("(b)", sub_b, 0.0, width, y) + gap;
  const double third = width / 3.0;
  double row = 0.0;
  row = std::max(row, place("(c)", sub_c, 0.0, third, y));
  row = std::max(row, place("(d)", sub_d, third, third, y));
  row = std::max(row, place("(e)", sub_e, 2.0 * third, third, y));
  y += row;
  scene.height = y;
  return scene;
}

}  // namespace tempovis
