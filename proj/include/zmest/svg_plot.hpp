#pragma once

#include <string>
#include <vector>

namespace zmest {

// Minimal self-contained SVG line-plot writer: axes, optional log scales,
// polylines, a horizontal reference line and a text legend. Output is a
// pure function of the inputs, so repeated runs are byte-identical.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void set_log_x(bool on) { log_x_ = on; }
  void set_log_y(bool on) { log_y_ = on; }

  // Non-finite points are skipped (the polyline is interrupted).
  void add_series(const std::string& name, std::vector<double> xs, std::vector<double> ys);
  void add_hline(const std::string& name, double y);
  void add_annotation(const std::string& text);

  std::string render() const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
  };
  std::string title_, x_label_, y_label_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
  std::vector<std::pair<std::string, double>> hlines_;
  std::vector<std::string> annotations_;
};

}  // namespace zmest
