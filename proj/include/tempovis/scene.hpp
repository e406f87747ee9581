#pragma once

// Renderer-independent chart description.
//
// A ChartScene is a canvas of `width` x `height` abstract units, origin at
// the top-left, y growing downwards. Elements hold scene coordinates and are
// painted in order. Data coordinates reach the scene only through a Frame,
// whose mapping is affine per axis; the Axis elements a chart emits record
// the same mapping so a data point's scene position can be recomputed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tempovis {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const noexcept { return x + w; }
  double bottom() const noexcept { return y + h; }
  bool contains(Point p) const noexcept {
    return p.x >= x && p.x <= right() && p.y >= y && p.y <= bottom();
  }
};

enum class Dash { solid, dashed, dotted, dash_dot };
enum class Anchor { start, middle, end };
enum class AxisSide { bottom, left, right };

struct Axis {
  AxisSide side = AxisSide::bottom;
  Rect frame;  // plot region this axis borders
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> ticks;
  std::vector<std::string> tick_labels;
  std::string label;
  std::string color = "#000000";
  bool show_ticks = true;

  /// Scene coordinate of data value `v` along this axis.
  double to_scene(double v) const {
    const double u = (v - lo) / (hi - lo);
    return side == AxisSide::bottom ? frame.x + u * frame.w : frame.bottom() - u * frame.h;
  }
};

struct Polyline {
  std::vector<Point> points;
  std::string color = "#000000";
  double width = 1.0;
  Dash dash = Dash::solid;
  double opacity = 1.0;
};

struct Polygon {
  std::vector<Point> points;
  std::string fill = "#000000";
  double opacity = 1.0;
};

struct Rectangle {
  Rect box;
  std::string fill = "#000000";
  double opacity = 1.0;
  std::optional<std::string> edge;
  double edge_width = 0.0;
};

struct Text {
  Point pos;  // baseline anchor point
  std::string content;
  Anchor anchor = Anchor::start;
  double size = 10.0;
  std::string color = "#000000";
  bool bold = false;
  double rotate = 0.0;  // degrees, about pos
};

/// Axis-aligned shaded band across a plot region.
struct Span {
  Rect band;
  bool vertical = true;  // true: spans an x interval over the full height
  std::string fill = "#808080";
  double opacity = 0.15;
};

struct Marker {
  Point centre;
  double radius = 3.5;
  std::string fill = "#000000";
  std::string edge = "#000000";
};

struct ChartScene;

/// A nested scene placed at `origin` and scaled uniformly by `scale`.
struct Group {
  Point origin;
  double scale = 1.0;
  std::shared_ptr<const ChartScene> scene;
};

using Element = std::variant<Axis, Polyline, Polygon, Rectangle, Text, Span, Marker, Group>;

struct ChartScene {
  double width = 0.0;
  double height = 0.0;
  std::vector<Element> elements;

  template <typename T>
  void add(T element) {
    elements.emplace_back(std::move(element));
  }

  template <typename T>
  std::vector<const T*> all() const {
    std::vector<const T*> out;
    for (const auto& e : elements)
      if (const auto* p = std::get_if<T>(&e)) out.push_back(p);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Data-to-scene mapping
// ---------------------------------------------------------------------------

/// Affine map from a data window onto a plot region.
struct Frame {
  Rect region;
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;

  double sx(double x) const { return region.x + (x - x_lo) / (x_hi - x_lo) * region.w; }
  double sy(double y) const { return region.bottom() - (y - y_lo) / (y_hi - y_lo) * region.h; }
  Point map(double x, double y) const { return {sx(x), sy(y)}; }
};

// ---------------------------------------------------------------------------
// Clipping (scene space)
// ---------------------------------------------------------------------------

/// Clips a polyline to `clip`. Runs that leave and re-enter the rectangle
/// become separate pieces; points outside are replaced by boundary crossings.
inline std::vector<std::vector<Point>> clip_polyline(const std::vector<Point>& pts,
                                                     const Rect& clip) {
  std::vector<std::vector<Point>> pieces;
  if (pts.size() == 1) {
    if (clip.contains(pts[0])) pieces.push_back(pts);
    return pieces;
  }
  std::vector<Point> current;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // Liang-Barsky on segment pts[i-1] -> pts[i].
    const Point a = pts[i - 1], b = pts[i];
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;
    bool visible = true;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - clip.x, clip.right() - a.x, a.y - clip.y, clip.bottom() - a.y};
    for (int k = 0; k < 4 && visible; ++k) {
      if (p[k] == 0.0) {
        if (q[k] < 0.0) visible = false;
      } else {
        const double r = q[k] / p[k];
        if (p[k] < 0.0) {
          if (r > t1) visible = false;
          else t0 = std::max(t0, r);
        } else {
          if (r < t0) visible = false;
          else t1 = std::min(t1, r);
        }
      }
    }
    if (!visible) {
      if (!current.empty()) pieces.push_back(std::move(current));
      current.clear();
      continue;
    }
    const Point ca = t0 == 0.0 ? a : Point{a.x + t0 * dx, a.y + t0 * dy};
    const Point cb = t1 == 1.0 ? b : Point{a.x + t1 * dx, a.y + t1 * dy};
    if (current.empty()) current.push_back(ca);
    else if (!(current.back() == ca)) {
      pieces.push_back(std::move(current));
      current = {ca};
    }
    current.push_back(cb);
    if (t1 < 1.0) {
      pieces.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) pieces.push_back(std::move(current));
  return pieces;
}

/// Sutherland-Hodgman polygon clip against an axis-aligned rectangle.
inline std::vector<Point> clip_polygon(const std::vector<Point>& pts, const Rect& clip) {
  std::vector<Point> out = pts;
  const auto pass = [&](auto inside, auto intersect) {
    if (out.empty()) return;
    std::vector<Point> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point cur = in[i];
      const Point prev = in[(i + in.size() - 1) % in.size()];
      if (inside(cur)) {
        if (!inside(prev)) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (inside(prev)) {
        out.push_back(intersect(prev, cur));
      }
    }
  };
  const auto at_x = [](Point a, Point b, double x) {
    return Point{x, a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)};
  };
  const auto at_y = [](Point a, Point b, double y) {
    return Point{a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y), y};
  };
  pass([&](Point p) { return p.x >= clip.x; }, [&](Point a, Point b) { return at_x(a, b, clip.x); });
  pass([&](Point p) { return p.x <= clip.right(); },
       [&](Point a, Point b) { return at_x(a, b, clip.right()); });
  pass([&](Point p) { return p.y >= clip.y; }, [&](Point a, Point b) { return at_y(a, b, clip.y); });
  pass([&](Point p) { return p.y <= clip.bottom(); },
       [&](Point a, Point b) { return at_y(a, b, clip.bottom()); });
  return out;
}

/// Intersection of two rectangles, or nothing when they do not overlap.
inline std::optional<Rect> clip_rect(const Rect& r, const Rect& clip) {
  const double x0 = std::max(r.x, clip.x), x1 = std::min(r.right(), clip.right());
  const double y0 = std::max(r.y, clip.y), y1 = std::min(r.bottom(), clip.bottom());
  if (x1 < x0 || y1 < y0) return std::nullopt;
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

// ---------------------------------------------------------------------------
// Ticks and text metrics
// ---------------------------------------------------------------------------

/// Round tick values (1, 2, 2.5 or 5 times a power of ten) inside [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  std::vector<double> ticks;
  if (!(hi > lo) || target < 1) return ticks;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (int i = 0;; ++i) {
    double v = first + i * step;
    if (v > hi + step * 1e-9) break;
    if (std::abs(v) < step * 1e-9) v = 0.0;
    ticks.push_back(v);
  }
  return ticks;
}

/// Formats a tick value with just enough decimals for the tick step.
inline std::string tick_label(double v, double step) {
  int decimals = 0;
  while (decimals < 6 && std::abs(step * std::pow(10.0, decimals) -
                                  std::round(step * std::pow(10.0, decimals))) > 1e-6) {
    ++decimals;
  }
  if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::vector<std::string> tick_labels(const std::vector<double>& ticks) {
  const double step = ticks.size() > 1 ? ticks[1] - ticks[0] : 1.0;
  std::vector<std::string> out;
  for (double t : ticks) out.push_back(tick_label(t, step));
  return out;
}

/// Approximate advance width of `text` at font size `size`, from a fixed
/// per-character table (sans-serif proportions), so layout never depends on
/// installed fonts.
inline double text_width(std::string_view text, double size) {
  double em = 0.0;
  for (unsigned char c : text) {
    if (c >= 0x80 && c < 0xC0) continue;  // UTF-8 continuation byte
    if (c == ' ') em += 0.278;
    else if (c >= '0' && c <= '9') em += 0.556;
    else if (c == 'i' || c == 'j' || c == 'l' || c == '.' || c == ',' || c == ':' || c == ';' ||
             c == '\'' || c == '|' || c == '!')
      em += 0.25;
    else if (c == 'f' || c == 't' || c == 'r' || c == '(' || c == ')' || c == '-' || c == '/' ||
             c == '[' || c == ']')
      em += 0.333;
    else if (c == 'm' || c == 'w') em += 0.833;
    else if (c == 'M' || c == 'W') em += 0.889;
    else if (c >= 'A' && c <= 'Z') em += 0.667;
    else if (c >= 'a' && c <= 'z') em += 0.53;
    else em += 0.584;
  }
  return em * size;
}

}  // namespace tempovis
