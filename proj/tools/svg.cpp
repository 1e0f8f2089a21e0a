#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dicke {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;
constexpr double kLogClip = 1e-16;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::size_t column_index(const ExperimentResult& table, const std::string& name) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    if (table.columns[i] == name) return i;
  throw std::invalid_argument("emit_svg: no column named '" + name + "'");
}

double axis_value(double v, bool log_axis) {
  if (!log_axis) return v;
  return std::log10(std::max(v, kLogClip));
}

}  // namespace

void emit_svg(const ExperimentResult& table, const std::string& x_col,
              const std::vector<std::string>& y_cols,
              const std::filesystem::path& path, bool log_x, bool log_y) {
  if (table.rows.size() < 2)
    throw std::invalid_argument("emit_svg: need at least 2 rows to draw a line");
  if (y_cols.empty()) throw std::invalid_argument("emit_svg: no y columns given");

  const std::size_t xi = column_index(table, x_col);
  std::vector<std::size_t> yi;
  for (const std::string& c : y_cols) yi.push_back(column_index(table, c));

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& row : table.rows) {
    const double x = axis_value(row[xi], log_x);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (std::size_t k : yi) {
      const double y = axis_value(row[k], log_y);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) throw std::invalid_argument("emit_svg: degenerate x range");
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (axis_value(x, log_x) - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return kTop + ph * (1.0 - (axis_value(y, log_y) - ymin) / (ymax - ymin)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
     << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
     << num(kHeight) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (std::size_t j = 0; j < yi.size(); ++j) {
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[j % 6]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      if (i) os << ' ';
      os << num(px(table.rows[i][xi])) << ',' << num(py(table.rows[i][yi[j]]));
    }
    os << "\"/>\n";
    os << "<text x=\"" << num(kLeft + 8.0) << "\" y=\"" << num(kTop + 16.0 + 16.0 * j)
       << "\" fill=\"" << kPalette[j % 6] << "\" font-size=\"13\">" << y_cols[j]
       << "</text>\n";
  }

  const char* xlabel = log_x ? " (log10)" : "";
  const char* ylabel = log_y ? " (log10)" : "";
  os << "<text x=\"" << num(kLeft) << "\" y=\"" << num(kHeight - 12.0)
     << "\" font-size=\"13\">" << x_col << xlabel << ": [" << num(xmin) << ", "
     << num(xmax) << "]</text>\n";
  os << "<text x=\"8\" y=\"" << num(kTop + 12.0)
     << "\" font-size=\"13\" transform=\"rotate(-90 8 " << num(kTop + 12.0) << ")\">y"
     << ylabel << ": [" << num(ymin) << ", " << num(ymax) << "]</text>\n";
  os << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_svg: cannot open " + path.string());
  out << os.str();
  if (!out) throw std::runtime_error("emit_svg: write failed for " + path.string());
}

}  // namespace dicke
