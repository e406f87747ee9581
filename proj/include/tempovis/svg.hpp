#pragma once

// ChartScene -> standalone SVG 1.1.
//
// Output is a pure function of the scene: no timestamps, no generated ids,
// presentation attributes only. Every number is written with exactly three
// decimals, rounded half away from zero.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <variant>

#include "tempovis/error.hpp"
#include "tempovis/scene.hpp"

namespace tempovis {

struct SvgDocument {
  std::string text;
  int width_px = 0;
  int height_px = 0;
};

namespace svg {

inline std::string num(double v) {
  if (!std::isfinite(v)) v = 0.0;
  const auto scaled = static_cast<long long>(std::round(v * 1000.0));
  const unsigned long long mag = scaled < 0 ? static_cast<unsigned long long>(-scaled)
                                            : static_cast<unsigned long long>(scaled);
  std::string frac = std::to_string(mag % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return (scaled < 0 ? "-" : "") + std::to_string(mag / 1000) + "." + frac;
}

inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Fixed dash patterns, in scene units.
inline std::string dash_array(Dash d) {
  switch (d) {
    case Dash::dashed: return num(6.0) + "," + num(4.0);
    case Dash::dotted: return num(1.5) + "," + num(3.0);
    case Dash::dash_dot: return num(6.0) + "," + num(3.0) + "," + num(1.5) + "," + num(3.0);
    case Dash::solid: break;
  }
  return {};
}

inline const char* anchor_name(Anchor a) {
  switch (a) {
    case Anchor::middle: return "middle";
    case Anchor::end: return "end";
    case Anchor::start: break;
  }
  return "start";
}

inline constexpr const char* kFontFamily = "sans-serif";
inline constexpr double kTickLength = 5.0;
inline constexpr double kTickFont = 10.0;
inline constexpr double kAxisLabelFont = 12.0;

class Writer {
 public:
  std::string out;

  void line(double x1, double y1, double x2, double y2, std::string_view color, double width) {
    out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
           num(y2) + "\" stroke=\"" + std::string(color) + "\" stroke-width=\"" + num(width) +
           "\"/>\n";
  }

  void text(const Text& t) {
    out += "<text x=\"" + num(t.pos.x) + "\" y=\"" + num(t.pos.y) + "\" font-family=\"" +
           kFontFamily + "\" font-size=\"" + num(t.size) + "\" text-anchor=\"" +
           anchor_name(t.anchor) + "\" fill=\"" + t.color + "\"";
    if (t.bold) out += " font-weight=\"bold\"";
    if (t.rotate != 0.0) {
      out += " transform=\"rotate(" + num(t.rotate) + " " + num(t.pos.x) + " " + num(t.pos.y) +
             ")\"";
    }
    out += ">" + escape(t.content) + "</text>\n";
  }

  void operator()(const Axis& a) {
    const Rect& f = a.frame;
    const double span = a.side == AxisSide::bottom ? f.w : f.h;
    const double tol = 1e-9 * std::max(1.0, span);
    const bool bottom = a.side == AxisSide::bottom;
    const bool left = a.side == AxisSide::left;
    if (bottom) line(f.x, f.bottom(), f.right(), f.bottom(), a.color, 0.8);
    else if (left) line(f.x, f.y, f.x, f.bottom(), a.color, 0.8);
    else line(f.right(), f.y, f.right(), f.bottom(), a.color, 0.8);

    if (a.show_ticks) {
      for (std::size_t i = 0; i < a.ticks.size(); ++i) {
        const double s = a.to_scene(a.ticks[i]);
        const std::string label = i < a.tick_labels.size() ? a.tick_labels[i] : std::string{};
        Text t;
        t.size = kTickFont;
        t.color = a.color;
        t.content = label;
        if (bottom) {
          if (s < f.x - tol || s > f.right() + tol) continue;
          line(s, f.bottom(), s, f.bottom() + kTickLength, a.color, 0.8);
          t.pos = {s, f.bottom() + kTickLength + 12.0};
          t.anchor = Anchor::middle;
        } else {
          if (s < f.y - tol || s > f.bottom() + tol) continue;
          const double x = left ? f.x : f.right();
          line(x, s, left ? x - kTickLength : x + kTickLength, s, a.color, 0.8);
          t.pos = {left ? x - kTickLength - 3.0 : x + kTickLength + 3.0, s + 3.5};
          t.anchor = left ? Anchor::end : Anchor::start;
        }
        if (!label.empty()) text(t);
      }
    }
    if (!a.label.empty()) {
      Text t;
      t.content = a.label;
      t.size = kAxisLabelFont;
      t.color = a.color;
      t.anchor = Anchor::middle;
      if (bottom) {
        t.pos = {f.x + f.w / 2.0, f.bottom() + 40.0};
      } else if (left) {
        t.pos = {f.x - 50.0, f.y + f.h / 2.0};
        t.rotate = -90.0;
      } else {
        t.pos = {f.right() + 50.0, f.y + f.h / 2.0};
        t.rotate = 90.0;
      }
      text(t);
    }
  }

  void operator()(const Polyline& p) {
    out += "<polyline points=\"";
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      if (i) out += ' ';
      out += num(p.points[i].x) + "," + num(p.points[i].y);
    }
    out += "\" fill=\"none\" stroke=\"" + p.color + "\" stroke-width=\"" + num(p.width) +
           "\" stroke-linejoin=\"round\"";
    if (p.dash != Dash::solid) out += " stroke-dasharray=\"" + dash_array(p.dash) + "\"";
    if (p.opacity != 1.0) out += " stroke-opacity=\"" + num(p.opacity) + "\"";
    out += "/>\n";
  }

  void operator()(const Polygon& p) {
    out += "<polygon points=\"";
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      if (i) out += ' ';
      out += num(p.points[i].x) + "," + num(p.points[i].y);
    }
    out += "\" fill=\"" + p.fill + "\"";
    if (p.opacity != 1.0) out += " fill-opacity=\"" + num(p.opacity) + "\"";
    out += " stroke=\"none\"/>\n";
  }

  void operator()(const Rectangle& r) {
    out += "<rect x=\"" + num(r.box.x) + "\" y=\"" + num(r.box.y) + "\" width=\"" + num(r.box.w) +
           "\" height=\"" + num(r.box.h) + "\" fill=\"" + r.fill + "\"";
    if (r.opacity != 1.0) out += " fill-opacity=\"" + num(r.opacity) + "\"";
    if (r.edge) out += " stroke=\"" + *r.edge + "\" stroke-width=\"" + num(r.edge_width) + "\"";
    out += "/>\n";
  }

  void operator()(const Text& t) { text(t); }

  void operator()(const Span& s) {
    out += "<rect x=\"" + num(s.band.x) + "\" y=\"" + num(s.band.y) + "\" width=\"" +
           num(s.band.w) + "\" height=\"" + num(s.band.h) + "\" fill=\"" + s.fill +
           "\" fill-opacity=\"" + num(s.opacity) + "\"/>\n";
  }

  void operator()(const Marker& m) {
    const double r = m.radius;
    const std::string x0 = num(m.centre.x - r), x1 = num(m.centre.x + r), y = num(m.centre.y);
    const std::string arc = "A " + num(r) + "," + num(r) + " 0 1,0 ";
    out += "<path d=\"M " + x0 + "," + y + " " + arc + x1 + "," + y + " " + arc + x0 + "," + y +
           " Z\" fill=\"" + m.fill + "\" stroke=\"" + m.edge + "\" stroke-width=\"" + num(0.8) +
           "\"/>\n";
  }

  void operator()(const Group& g) {
    out += "<g transform=\"translate(" + num(g.origin.x) + "," + num(g.origin.y) + ") scale(" +
           num(g.scale) + ")\">\n";
    if (g.scene) body(*g.scene);
    out += "</g>\n";
  }

  void body(const ChartScene& scene) {
    for (const auto& e : scene.elements) std::visit(*this, e);
  }
};

}  // namespace svg

/// SVG markup for the scene's elements only (no document wrapper).
inline std::string render_body(const ChartScene& scene) {
  svg::Writer w;
  w.body(scene);
  return std::move(w.out);
}

inline SvgDocument render(const ChartScene& scene, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0) {
    throw domain_error("svg dimensions must be positive, got " + std::to_string(width_px) + "x" +
                       std::to_string(height_px));
  }
  SvgDocument doc{{}, width_px, height_px};
  auto& out = doc.text;
  out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width_px) + "\" height=\"" + std::to_string(height_px) +
         "\" viewBox=\"0 0 " + svg::num(scene.width) + " " + svg::num(scene.height) + "\">\n";
  out += "<rect x=\"0.000\" y=\"0.000\" width=\"" + svg::num(scene.width) + "\" height=\"" +
         svg::num(scene.height) + "\" fill=\"#ffffff\"/>\n";
  out += render_body(scene);
  out += "</svg>\n";
  return doc;
}

/// Renders at one pixel per scene unit.
inline SvgDocument render(const ChartScene& scene) {
  return render(scene, std::max(1, static_cast<int>(std::lround(scene.width))),
                std::max(1, static_cast<int>(std::lround(scene.height))));
}

}  // namespace tempovis
