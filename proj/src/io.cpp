#include "iso3b/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace iso3b::io {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add_row(std::vector<double> cells) {
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (double c : cells) row.push_back(fmt17(c));
  rows.push_back(std::move(row));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  rows.push_back(std::move(cells));
}

static std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

void CsvTable::write(const std::filesystem::path& file) const {
  std::ofstream out = open_out(file);
  out << header << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

void write_text(const std::filesystem::path& file, const std::string& body) {
  std::ofstream out = open_out(file);
  out << body;
}

void SvgPlot::add_series(std::vector<double> sx, std::vector<double> sy,
                         std::string color) {
  series.push_back({std::move(sx), std::move(sy), std::move(color)});
}

namespace {

struct Range {
  double lo = 0.0, hi = 1.0;
  void grow(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi - lo < 1e-300) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      double m = 0.05 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string axes(int width, int height, int ml, int mb, int mt, int mr,
                 const Range& rx, const Range& ry, const std::string& x_label,
                 const std::string& y_label) {
  std::ostringstream s;
  int x0 = ml, x1 = width - mr, y0 = height - mb, y1 = mt;
  s << "<rect x='" << x0 << "' y='" << y1 << "' width='" << (x1 - x0)
    << "' height='" << (y0 - y1)
    << "' fill='none' stroke='black' stroke-width='1'/>\n";
  s << "<text x='" << (x0 + x1) / 2 << "' y='" << height - 8
    << "' text-anchor='middle' font-size='14'>" << x_label << "</text>\n";
  s << "<text x='14' y='" << (y0 + y1) / 2
    << "' text-anchor='middle' font-size='14' transform='rotate(-90 14 "
    << (y0 + y1) / 2 << ")'>" << y_label << "</text>\n";
  s << "<text x='" << x0 << "' y='" << y0 + 16
    << "' font-size='11' text-anchor='middle'>" << num(rx.lo) << "</text>\n";
  s << "<text x='" << x1 << "' y='" << y0 + 16
    << "' font-size='11' text-anchor='middle'>" << num(rx.hi) << "</text>\n";
  s << "<text x='" << x0 - 6 << "' y='" << y0
    << "' font-size='11' text-anchor='end'>" << num(ry.lo) << "</text>\n";
  s << "<text x='" << x0 - 6 << "' y='" << y1 + 10
    << "' font-size='11' text-anchor='end'>" << num(ry.hi) << "</text>\n";
  return s.str();
}

}  // namespace

void SvgPlot::write(const std::filesystem::path& file) const {
  const int ml = 64, mr = 16, mt = 16, mb = 44;
  Range rx, ry;
  bool seeded = false;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!seeded) {
        rx.lo = rx.hi = s.x[i];
        ry.lo = ry.hi = s.y[i];
        seeded = true;
      }
      rx.grow(s.x[i]);
      ry.grow(s.y[i]);
    }
  }
  rx.pad();
  ry.pad();
  auto px = [&](double v) {
    return ml + (v - rx.lo) / (rx.hi - rx.lo) * (width - ml - mr);
  };
  auto py = [&](double v) {
    return (height - mb) - (v - ry.lo) / (ry.hi - ry.lo) * (height - mt - mb);
  };
  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
    << "' height='" << height << "'>\n";
  s << axes(width, height, ml, mb, mt, mr, rx, ry, x_label, y_label);
  for (const auto& ser : series) {
    s << "<polyline fill='none' stroke='" << ser.color
      << "' stroke-width='1.5' points='";
    for (size_t i = 0; i < ser.x.size(); ++i) {
      if (i) s << ' ';
      s << num(px(ser.x[i])) << ',' << num(py(ser.y[i]));
    }
    s << "'/>\n";
  }
  s << "</svg>\n";
  write_text(file, s.str());
}

void SvgHeatmap::write(const std::filesystem::path& file) const {
  const int ml = 64, mr = 16, mt = 16, mb = 44;
  if (x.empty() || y.empty()) throw std::runtime_error("empty heatmap");
  Range rx{x.front(), x.back()}, ry{y.front(), y.back()};
  double vmax = 0.0;
  for (const auto& row : v)
    for (double c : row)
      if (std::isfinite(c)) vmax = std::max(vmax, std::abs(c));
  if (vmax == 0.0) vmax = 1.0;
  auto px = [&](double w) {
    return ml + (w - rx.lo) / (rx.hi - rx.lo) * (width - ml - mr);
  };
  auto py = [&](double w) {
    return (height - mb) - (w - ry.lo) / (ry.hi - ry.lo) * (height - mt - mb);
  };
  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
    << "' height='" << height << "'>\n";
  double cw = (width - ml - mr) / std::max<size_t>(1, x.size());
  double ch = (height - mt - mb) / std::max<size_t>(1, y.size());
  for (size_t j = 0; j < y.size(); ++j) {
    for (size_t i = 0; i < x.size(); ++i) {
      double c = v[j][i];
      double t = std::isfinite(c) ? std::clamp(c / vmax, -1.0, 1.0) : 0.0;
      int r8, g8, b8;
      if (t >= 0) {  // white -> red
        r8 = 255;
        g8 = b8 = static_cast<int>(std::lround(255 * (1 - t)));
      } else {  // white -> blue
        b8 = 255;
        r8 = g8 = static_cast<int>(std::lround(255 * (1 + t)));
      }
      s << "<rect x='" << num(px(x[i]) - cw / 2) << "' y='"
        << num(py(y[j]) - ch / 2) << "' width='" << num(cw + 0.5)
        << "' height='" << num(ch + 0.5) << "' fill='rgb(" << r8 << ',' << g8
        << ',' << b8 << ")'/>\n";
    }
  }
  s << axes(width, height, ml, mb, mt, mr, rx, ry, x_label, y_label);
  s << "</svg>\n";
  write_text(file, s.str());
}

}  // namespace iso3b::io
