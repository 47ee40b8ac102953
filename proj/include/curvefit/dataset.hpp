#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace curvefit {

// Paired observations with per-entry missingness. Presence is an explicit
// marker, never a sentinel value, so downstream statistics cannot absorb
// missing entries silently. Values are immutable after construction.
struct Dataset {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::uint8_t> x_present;  // 1 = observed
  std::vector<std::uint8_t> y_present;
  std::string x_name = "x";
  std::string y_name = "y";

  std::size_t size() const noexcept { return x.size(); }
  bool row_complete(std::size_t i) const noexcept {
    return x_present[i] != 0 && y_present[i] != 0;
  }
  std::size_t missing_x_count() const noexcept;
  std::size_t missing_y_count() const noexcept;
  bool has_missing() const noexcept;

  // Fully observed pairs. Throws if lengths differ, the set is empty, or a
  // value is non-finite.
  static Dataset from_complete(std::vector<double> x, std::vector<double> y);

  static Dataset from_parts(std::vector<double> x, std::vector<std::uint8_t> x_present,
                            std::vector<double> y, std::vector<std::uint8_t> y_present);
};

// Shortest decimal form that parses back to the same bits (<= 17 significant
// digits).
std::string format_double(double v);

// RFC-4180-style CSV with a header row; empty cells and the literal token
// "NaN" load as missing, anything non-finite is rejected.
Dataset load_csv(const std::string& path, const std::string& x_col,
                 const std::string& y_col);

void write_csv(const Dataset& d, const std::string& path);

// Rows where both x and y are observed, order preserved.
Dataset complete_pairs(const Dataset& d);

}  // namespace curvefit
