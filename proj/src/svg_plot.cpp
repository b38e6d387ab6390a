#include "zmest/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace zmest {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(const std::string& name, std::vector<double> xs,
                         std::vector<double> ys) {
  series_.push_back({name, std::move(xs), std::move(ys)});
}

void SvgPlot::add_hline(const std::string& name, double y) {
  hlines_.emplace_back(name, y);
}

void SvgPlot::add_annotation(const std::string& text) { annotations_.push_back(text); }

std::string SvgPlot::render() const {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto tx = [&](double v) { return log_x_ ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y_ ? std::log10(v) : v; };

  auto usable_x = [&](double v) { return std::isfinite(v) && (!log_x_ || v > 0.0); };
  auto usable_y = [&](double v) { return std::isfinite(v) && (!log_y_ || v > 0.0); };

  for (const auto& s : series_)
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!usable_x(s.xs[i]) || !usable_y(s.ys[i])) continue;
      xmin = std::min(xmin, tx(s.xs[i]));
      xmax = std::max(xmax, tx(s.xs[i]));
      ymin = std::min(ymin, ty(s.ys[i]));
      ymax = std::max(ymax, ty(s.ys[i]));
    }
  for (const auto& [name, y] : hlines_)
    if (usable_y(y)) {
      ymin = std::min(ymin, ty(y));
      ymax = std::max(ymax, ty(y));
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double v) {
    return kLeft + (tx(v) - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double v) {
    return kHeight - kBottom - (ty(v) - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
      << "font-family=\"sans-serif\">" << title_ << "</text>\n";

  // frame
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // ticks: 6 per axis in transformed coordinates
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    const double vx = log_x_ ? std::pow(10.0, fx) : fx;
    const double vy = log_y_ ? std::pow(10.0, fy) : fy;
    const double sx = kLeft + (kWidth - kLeft - kRight) * i / 5.0;
    const double sy = kHeight - kBottom - (kHeight - kTop - kBottom) * i / 5.0;
    svg << "<line x1=\"" << sx << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << sx
        << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << num(vx)
        << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kLeft << "\" y2=\""
        << sy << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy + 4
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(vy)
        << "</text>\n";
  }
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label_
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label_ << "</text>\n";

  for (const auto& [name, y] : hlines_) {
    if (!usable_y(y)) continue;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(y) << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << py(y) << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << py(y) - 4
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#555555\">"
        << name << "</text>\n";
  }

  for (std::size_t si = 0; si < series_.size(); ++si) {
    const auto& s = series_[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
    std::ostringstream pts;
    bool open = false;
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!usable_x(s.xs[i]) || !usable_y(s.ys[i])) {
        if (open) {
          svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"1.5\"/>\n";
          pts.str("");
          open = false;
        }
        continue;
      }
      pts << num(px(s.xs[i])) << "," << num(py(s.ys[i])) << " ";
      open = true;
    }
    if (open)
      svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 + 15 * si
        << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" << color << "\">" << s.name
        << "</text>\n";
  }

  for (std::size_t i = 0; i < annotations_.size(); ++i)
    svg << "<text x=\"" << kLeft + 10 << "\" y=\""
        << kTop + 16 + 15 * (series_.size() + i)
        << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"#333333\">" << annotations_[i]
        << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace zmest
