#include "curvefit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "curvefit/dataset.hpp"
#include "curvefit/errors.hpp"
#include "curvefit/normal.hpp"

namespace curvefit {

namespace {

constexpr double canvas_w = 640.0;
constexpr double canvas_h = 480.0;
constexpr double margin_left = 62.0;
constexpr double margin_right = 20.0;
constexpr double margin_top = 22.0;
constexpr double margin_bottom = 48.0;

constexpr const char* data_color = "#1f77b4";
constexpr const char* accent_color = "#d62728";

struct Range {
  double lo;
  double hi;
};

Range padded(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  double pad = 0.05 * (hi - lo);
  if (pad == 0.0) pad = std::max(1.0, std::fabs(lo)) * 0.05;
  return {lo - pad, hi + pad};
}

Range span_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return padded(*lo, *hi);
}

std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> nice_ticks(const Range& r, int target = 5) {
  const double raw = (r.hi - r.lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = mag * (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0);
  std::vector<double> ticks;
  double t = std::ceil(r.lo / step) * step;
  while (t <= r.hi + step * 1e-9) {
    ticks.push_back(t == 0.0 ? 0.0 : t);  // avoid -0
    t += step;
  }
  return ticks;
}

class SvgCanvas {
 public:
  SvgCanvas(const PlotRequest& req, Range xr, Range yr) : req_(req), xr_(xr), yr_(yr) {
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
             "viewBox=\"0 0 640 480\">\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    axes();
  }

  double px(double x) const {
    return margin_left +
           (x - xr_.lo) / (xr_.hi - xr_.lo) * (canvas_w - margin_left - margin_right);
  }
  double py(double y) const {
    return canvas_h - margin_bottom -
           (y - yr_.lo) / (yr_.hi - yr_.lo) * (canvas_h - margin_top - margin_bottom);
  }

  void circle(double x, double y, double r, const char* fill) {
    body_ += "<circle cx=\"" + format_double(px(x)) + "\" cy=\"" + format_double(py(y)) +
             "\" r=\"" + format_double(r) + "\" fill=\"" + fill + "\"/>\n";
  }

  void segment(double x1, double y1, double x2, double y2, const char* stroke,
               const char* width = "1.5") {
    body_ += "<line x1=\"" + format_double(px(x1)) + "\" y1=\"" + format_double(py(y1)) +
             "\" x2=\"" + format_double(px(x2)) + "\" y2=\"" + format_double(py(y2)) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + width + "\"/>\n";
  }

  void polyline(std::span<const double> x, std::span<const double> y,
                const char* stroke) {
    body_ += "<polyline fill=\"none\" stroke=\"";
    body_ += stroke;
    body_ += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) body_ += ' ';
      body_ += format_double(px(x[i])) + "," + format_double(py(y[i]));
    }
    body_ += "\"/>\n";
  }

  void bar(double x_lo, double x_hi, double height) {
    const double left = px(x_lo);
    const double right = px(x_hi);
    const double top = py(height);
    const double base = py(0.0);
    body_ += "<rect x=\"" + format_double(left) + "\" y=\"" + format_double(top) +
             "\" width=\"" + format_double(right - left) + "\" height=\"" +
             format_double(base - top) +
             "\" fill=\"#1f77b4\" fill-opacity=\"0.75\" stroke=\"#10405f\"/>\n";
  }

  void rect_world(double x_lo, double y_lo, double x_hi, double y_hi) {
    body_ += "<rect x=\"" + format_double(px(x_lo)) + "\" y=\"" + format_double(py(y_hi)) +
             "\" width=\"" + format_double(px(x_hi) - px(x_lo)) + "\" height=\"" +
             format_double(py(y_lo) - py(y_hi)) +
             "\" fill=\"#aec7e8\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
  }

  void write(const std::string& path) {
    body_ += "</svg>\n";
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body_)) {
      throw Error(ErrorKind::write_error, "cannot write '" + path + "'");
    }
  }

 private:
  void text(double x, double y, const std::string& s, const char* anchor,
            const char* extra = "") {
    body_ += "<text x=\"" + format_double(x) + "\" y=\"" + format_double(y) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" + anchor +
             "\"" + extra + ">" + s + "</text>\n";
  }

  void axes() {
    const double x0 = margin_left;
    const double x1 = canvas_w - margin_right;
    const double y0 = canvas_h - margin_bottom;
    const double y1 = margin_top;
    body_ += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(y0) +
             "\" x2=\"" + format_double(x1) + "\" y2=\"" + format_double(y0) +
             "\" stroke=\"black\"/>\n";
    body_ += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(y0) +
             "\" x2=\"" + format_double(x0) + "\" y2=\"" + format_double(y1) +
             "\" stroke=\"black\"/>\n";

    for (double t : nice_ticks(xr_)) {
      const double tx = px(t);
      body_ += "<line x1=\"" + format_double(tx) + "\" y1=\"" + format_double(y0) +
               "\" x2=\"" + format_double(tx) + "\" y2=\"" + format_double(y0 + 5.0) +
               "\" stroke=\"black\"/>\n";
      text(tx, y0 + 17.0, tick_label(t), "middle");
    }
    for (double t : nice_ticks(yr_)) {
      const double ty = py(t);
      body_ += "<line x1=\"" + format_double(x0 - 5.0) + "\" y1=\"" + format_double(ty) +
               "\" x2=\"" + format_double(x0) + "\" y2=\"" + format_double(ty) +
               "\" stroke=\"black\"/>\n";
      text(x0 - 8.0, ty + 3.5, tick_label(t), "end");
    }

    if (!req_.title.empty()) {
      text(canvas_w / 2.0, 14.0, req_.title, "middle");
    }
    text(canvas_w / 2.0, canvas_h - 10.0, req_.x_label, "middle");
    text(14.0, canvas_h / 2.0, req_.y_label, "middle",
         " transform=\"rotate(-90 14 240)\"");
  }

  const PlotRequest& req_;
  Range xr_;
  Range yr_;
  std::string body_;
};

double quantile_type7(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

void emit_histogram(const PlotRequest& req, std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double n = static_cast<double>(sorted.size());

  std::size_t bins;
  double bin_lo = lo;
  double bin_hi = hi;
  if (hi == lo) {
    // Degenerate range: one bin spanning the value.
    bins = 1;
    bin_lo = lo - 0.5;
    bin_hi = hi + 0.5;
  } else {
    const double iqr = quantile_type7(sorted, 0.75) - quantile_type7(sorted, 0.25);
    if (iqr > 0.0) {
      const double width = 2.0 * iqr / std::cbrt(n);
      bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    } else {
      bins = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;  // Sturges
    }
    bins = std::clamp<std::size_t>(bins, 1, 10000);
  }

  const double width = (bin_hi - bin_lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : sorted) {
    const std::size_t b = std::min(
        bins - 1, static_cast<std::size_t>(std::floor((v - bin_lo) / width)));
    ++counts[b];
  }
  const std::size_t tallest = *std::max_element(counts.begin(), counts.end());

  SvgCanvas canvas(req, padded(bin_lo, bin_hi),
                   padded(0.0, static_cast<double>(tallest)));
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    canvas.bar(bin_lo + width * static_cast<double>(b),
               bin_lo + width * static_cast<double>(b + 1),
               static_cast<double>(counts[b]));
  }
  canvas.write(req.output_path);
}

void emit_box(const PlotRequest& req, std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_type7(sorted, 0.25);
  const double q2 = quantile_type7(sorted, 0.5);
  const double q3 = quantile_type7(sorted, 0.75);
  const double iqr = q3 - q1;

  // Whiskers stop at the most extreme points within 1.5 IQR of the box.
  double whisker_lo = q1;
  double whisker_hi = q3;
  for (double v : sorted) {
    if (v >= q1 - 1.5 * iqr) {
      whisker_lo = v;
      break;
    }
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= q3 + 1.5 * iqr) {
      whisker_hi = *it;
      break;
    }
  }

  SvgCanvas canvas(req, Range{0.0, 1.0}, span_of(sorted));
  constexpr double cx = 0.5;
  constexpr double half = 0.18;
  canvas.segment(cx, whisker_lo, cx, q1, "#1f77b4");
  canvas.segment(cx, q3, cx, whisker_hi, "#1f77b4");
  canvas.segment(cx - half / 2, whisker_lo, cx + half / 2, whisker_lo, "#1f77b4");
  canvas.segment(cx - half / 2, whisker_hi, cx + half / 2, whisker_hi, "#1f77b4");
  canvas.rect_world(cx - half, q1, cx + half, q3);
  canvas.segment(cx - half, q2, cx + half, q2, accent_color, "2");
  for (double v : sorted) {
    if (v < q1 - 1.5 * iqr || v > q3 + 1.5 * iqr) canvas.circle(cx, v, 2.5, data_color);
  }
  canvas.write(req.output_path);
}

void emit_qq(const PlotRequest& req, std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> theoretical(n);
  for (std::size_t i = 0; i < n; ++i) {
    theoretical[i] =
        normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }

  const Range xr = span_of(theoretical);
  const Range yr = span_of(sorted);
  SvgCanvas canvas(req, xr, yr);
  // identity reference over the shared span
  const double lo = std::max(xr.lo, yr.lo);
  const double hi = std::min(xr.hi, yr.hi);
  if (lo < hi) canvas.segment(lo, lo, hi, hi, accent_color);
  for (std::size_t i = 0; i < n; ++i) {
    canvas.circle(theoretical[i], sorted[i], 3.0, data_color);
  }
  canvas.write(req.output_path);
}

}  // namespace

PlotKind plot_kind_from_name(std::string_view name) {
  if (name == "scatter") return PlotKind::scatter;
  if (name == "line") return PlotKind::line;
  if (name == "histogram") return PlotKind::histogram;
  if (name == "box") return PlotKind::box;
  if (name == "qq") return PlotKind::qq;
  if (name == "residuals_vs_fitted") return PlotKind::residuals_vs_fitted;
  throw Error(ErrorKind::invalid_config, "unknown plot kind '" + std::string(name) + "'");
}

const char* plot_kind_name(PlotKind kind) {
  switch (kind) {
    case PlotKind::scatter:
      return "scatter";
    case PlotKind::line:
      return "line";
    case PlotKind::histogram:
      return "histogram";
    case PlotKind::box:
      return "box";
    case PlotKind::qq:
      return "qq";
    case PlotKind::residuals_vs_fitted:
      return "residuals_vs_fitted";
  }
  return "?";
}

void emit_plot_xy(const PlotRequest& req, std::span<const double> x,
                  std::span<const double> y) {
  if (x.empty() || y.empty()) {
    throw Error(ErrorKind::empty_data, "nothing to plot");
  }
  if (x.size() != y.size()) {
    throw Error(ErrorKind::shape_mismatch, "x and y differ in length");
  }
  switch (req.kind) {
    case PlotKind::scatter: {
      SvgCanvas canvas(req, span_of(x), span_of(y));
      for (std::size_t i = 0; i < x.size(); ++i) canvas.circle(x[i], y[i], 3.0, data_color);
      canvas.write(req.output_path);
      return;
    }
    case PlotKind::line: {
      SvgCanvas canvas(req, span_of(x), span_of(y));
      canvas.polyline(x, y, data_color);
      canvas.write(req.output_path);
      return;
    }
    case PlotKind::residuals_vs_fitted: {
      Range yr = span_of(y);
      yr.lo = std::min(yr.lo, -1e-12);
      yr.hi = std::max(yr.hi, 1e-12);
      SvgCanvas canvas(req, span_of(x), yr);
      const Range xr = span_of(x);
      canvas.segment(xr.lo, 0.0, xr.hi, 0.0, accent_color);
      for (std::size_t i = 0; i < x.size(); ++i) canvas.circle(x[i], y[i], 3.0, data_color);
      canvas.write(req.output_path);
      return;
    }
    default:
      throw Error(ErrorKind::invalid_config,
                  std::string(plot_kind_name(req.kind)) + " takes one series");
  }
}

void emit_plot_series(const PlotRequest& req, std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::empty_data, "nothing to plot");
  }
  switch (req.kind) {
    case PlotKind::histogram:
      emit_histogram(req, values);
      return;
    case PlotKind::box:
      emit_box(req, values);
      return;
    case PlotKind::qq:
      emit_qq(req, values);
      return;
    default:
      throw Error(ErrorKind::invalid_config,
                  std::string(plot_kind_name(req.kind)) + " takes two series");
  }
}

}  // namespace curvefit
