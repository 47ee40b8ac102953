#include "curvefit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "curvefit/errors.hpp"

namespace curvefit {

namespace {

void validate(const Dataset& d) {
  if (d.x.size() != d.y.size() || d.x.size() != d.x_present.size() ||
      d.y.size() != d.y_present.size()) {
    throw Error(ErrorKind::invalid_data, "dataset columns differ in length");
  }
  if (d.size() == 0) {
    throw Error(ErrorKind::invalid_data, "dataset needs at least one observation");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if ((d.x_present[i] && !std::isfinite(d.x[i])) ||
        (d.y_present[i] && !std::isfinite(d.y[i]))) {
      throw Error(ErrorKind::non_finite,
                  "dataset holds a non-finite value at row " + std::to_string(i));
    }
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

// Empty cell or the literal "NaN" means missing; any other token must parse
// as a finite real.
bool parse_cell(const std::string& raw, std::size_t row, const std::string& column,
                double& value) {
  const std::string token = trim(raw);
  if (token.empty() || token == "NaN") return false;
  double parsed = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, parsed);
  if (ec != std::errc{} || ptr != end || !std::isfinite(parsed)) {
    throw ParseError(row, column, token);
  }
  value = parsed;
  return true;
}

}  // namespace

std::size_t Dataset::missing_x_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(x_present.begin(), x_present.end(), std::uint8_t{0}));
}

std::size_t Dataset::missing_y_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(y_present.begin(), y_present.end(), std::uint8_t{0}));
}

bool Dataset::has_missing() const noexcept {
  return missing_x_count() > 0 || missing_y_count() > 0;
}

Dataset Dataset::from_complete(std::vector<double> x, std::vector<double> y) {
  Dataset d;
  d.x_present.assign(x.size(), 1);
  d.y_present.assign(y.size(), 1);
  d.x = std::move(x);
  d.y = std::move(y);
  validate(d);
  return d;
}

Dataset Dataset::from_parts(std::vector<double> x, std::vector<std::uint8_t> x_present,
                            std::vector<double> y, std::vector<std::uint8_t> y_present) {
  Dataset d;
  d.x = std::move(x);
  d.y = std::move(y);
  d.x_present = std::move(x_present);
  d.y_present = std::move(y_present);
  validate(d);
  return d;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

Dataset load_csv(const std::string& path, const std::string& x_col,
                 const std::string& y_col) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::invalid_data, "cannot open '" + path + "'");
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorKind::empty_file, "'" + path + "' is empty");
  }
  // Strip a UTF-8 BOM if present.
  if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    header.erase(0, 3);
  }

  const std::vector<std::string> names = split_record(header);
  auto column_index = [&](const std::string& name) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (trim(names[j]) == name) return j;
    }
    throw Error(ErrorKind::missing_column, "column '" + name + "' not found");
  };
  const std::size_t xi = column_index(x_col);
  const std::size_t yi = column_index(y_col);

  Dataset d;
  d.x_name = x_col;
  d.y_name = y_col;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> fields = split_record(line);
    auto cell = [&](std::size_t j) {
      return j < fields.size() ? fields[j] : std::string{};
    };
    double xv = 0.0;
    double yv = 0.0;
    const bool xp = parse_cell(cell(xi), row, x_col, xv);
    const bool yp = parse_cell(cell(yi), row, y_col, yv);
    d.x.push_back(xp ? xv : 0.0);
    d.y.push_back(yp ? yv : 0.0);
    d.x_present.push_back(xp ? 1 : 0);
    d.y_present.push_back(yp ? 1 : 0);
  }
  if (d.size() == 0) {
    throw Error(ErrorKind::empty_file, "'" + path + "' has no data rows");
  }
  validate(d);
  return d;
}

void write_csv(const Dataset& d, const std::string& path) {
  std::ostringstream out;
  out << d.x_name << ',' << d.y_name << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.x_present[i]) out << format_double(d.x[i]);
    out << ',';
    if (d.y_present[i]) out << format_double(d.y[i]);
    out << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << out.str())) {
    throw Error(ErrorKind::write_error, "cannot write '" + path + "'");
  }
}

Dataset complete_pairs(const Dataset& d) {
  Dataset out;
  out.x_name = d.x_name;
  out.y_name = d.y_name;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.row_complete(i)) continue;
    out.x.push_back(d.x[i]);
    out.y.push_back(d.y[i]);
    out.x_present.push_back(1);
    out.y_present.push_back(1);
  }
  if (out.size() == 0) {
    throw Error(ErrorKind::all_missing, "no row has both x and y observed");
  }
  return out;
}

}  // namespace curvefit
