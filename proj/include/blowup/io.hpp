#pragma once

// Output helpers: CSV with round-trip floats, JSON manifests, small SVG plots.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace blowup::io {

inline constexpr int kManifestSchemaVersion = 1;

// Shortest representation that parses back to the same double.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  void line(const std::vector<std::string>& cells);
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

// Creates the directory (and parents) if missing.
void ensure_directory(const std::string& path);
std::string join_path(const std::string& dir, const std::string& name);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

// Static SVG line chart; nonfinite points and nonpositive ones on log axes are skipped.
std::string svg_line_plot(const std::vector<Series>& series, const PlotOptions& opts);
void write_text(const std::string& path, const std::string& text);

}  // namespace blowup::io
