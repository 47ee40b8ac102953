#pragma once

#include <span>
#include <string>
#include <string_view>

namespace curvefit {

enum class PlotKind { scatter, line, histogram, box, qq, residuals_vs_fitted };

PlotKind plot_kind_from_name(std::string_view name);
const char* plot_kind_name(PlotKind kind);

struct PlotRequest {
  PlotKind kind = PlotKind::scatter;
  std::string output_path;
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
};

// Two-series kinds: scatter, line, residuals_vs_fitted (x = fitted,
// y = residual). Output is a standalone SVG, byte-identical for identical
// input.
void emit_plot_xy(const PlotRequest& req, std::span<const double> x,
                  std::span<const double> y);

// One-series kinds: histogram (Freedman-Diaconis bins, Sturges when the IQR
// vanishes), box (1.5 IQR whiskers), qq (sorted values against standard
// normal quantiles plus the identity line).
void emit_plot_series(const PlotRequest& req, std::span<const double> values);

}  // namespace curvefit
