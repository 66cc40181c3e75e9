#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace iso3b::io {

// Shortest representation with 17 significant digits; deterministic.
std::string fmt17(double x);

// CSV table: fixed header, rows of pre-formatted cells.  Overwrites.
struct CsvTable {
  std::string header;                           // e.g. "c,u0,T_inf"
  std::vector<std::vector<std::string>> rows;   // each row matches the header

  void add_row(std::vector<double> cells);
  void add_row(std::vector<std::string> cells);
  void write(const std::filesystem::path& file) const;
};

// One polyline per series, with axis labels; minimal deterministic SVG.
struct SvgPlot {
  std::string x_label = "x";
  std::string y_label = "y";
  int width = 720;
  int height = 540;

  struct Series {
    std::vector<double> x, y;
    std::string color = "#1f4e9c";
  };
  std::vector<Series> series;

  void add_series(std::vector<double> x, std::vector<double> y,
                  std::string color = "#1f4e9c");
  void write(const std::filesystem::path& file) const;
};

// Scalar field on a rectangular grid rendered as colored cells (blue negative,
// white near zero, red positive), with axis labels.
struct SvgHeatmap {
  std::string x_label = "x";
  std::string y_label = "y";
  int width = 720;
  int height = 540;
  std::vector<double> x;                 // nx grid coordinates (ascending)
  std::vector<double> y;                 // ny grid coordinates (ascending)
  std::vector<std::vector<double>> v;    // v[j][i] at (x[i], y[j])

  void write(const std::filesystem::path& file) const;
};

void write_text(const std::filesystem::path& file, const std::string& body);

}  // namespace iso3b::io
