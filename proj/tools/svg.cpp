#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cli {

namespace {

constexpr double kWidth = 840, kHeight = 560;
constexpr double kLeft = 72, kRight = 190, kTop = 40, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// round-ish tick positions for a linear axis
std::vector<double> linear_ticks(double lo, double hi) {
  double span = hi - lo;
  if (span <= 0) return {lo};
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  std::vector<double> ticks;
  double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + 1e-9 * span; t += step) ticks.push_back(t);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  int e0 = static_cast<int>(std::floor(std::log10(lo)));
  int e1 = static_cast<int>(std::ceil(std::log10(hi)));
  for (int e = e0; e <= e1; ++e) {
    double t = std::pow(10.0, e);
    if (t >= lo / 1.0001 && t <= hi * 1.0001) ticks.push_back(t);
  }
  if (ticks.empty()) ticks = {lo, hi};
  return ticks;
}

} // namespace

std::string render_svg(const PlotSpec& spec) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i], yv = s.y[i];
      if (spec.log_x && xv <= 0) continue;
      if (spec.log_y && yv <= 0) continue;
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      double bar = i < s.ybar.size() ? s.ybar[i] : 0.0;
      ymin = std::min(ymin, yv - bar);
      ymax = std::max(ymax, yv + bar);
    }
  if (xmin > xmax) throw std::runtime_error("plot: no drawable points");
  if (xmin == xmax) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymin == ymax) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double ypad = (ymax - ymin) * 0.05;
  if (!spec.log_y) {
    ymin -= ypad;
    ymax += ypad;
  }

  auto xpix = [&](double v) {
    double t = spec.log_x ? (std::log10(v) - std::log10(xmin)) /
                                (std::log10(xmax) - std::log10(xmin))
                          : (v - xmin) / (xmax - xmin);
    return kLeft + t * (kWidth - kLeft - kRight);
  };
  auto ypix = [&](double v) {
    double t = spec.log_y ? (std::log10(v) - std::log10(ymin)) /
                                (std::log10(ymax) - std::log10(ymin))
                          : (v - ymin) / (ymax - ymin);
    return kHeight - kBottom - t * (kHeight - kTop - kBottom);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << spec.title << "</text>\n";

  // frame
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(kWidth - kLeft - kRight) << "\" height=\""
      << num(kHeight - kTop - kBottom)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto xticks = spec.log_x ? log_ticks(xmin, xmax) : linear_ticks(xmin, xmax);
  auto yticks = spec.log_y ? log_ticks(ymin, ymax) : linear_ticks(ymin, ymax);
  for (double t : xticks) {
    double px = xpix(t);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kHeight - kBottom)
        << "\" x2=\"" << num(px) << "\" y2=\"" << num(kHeight - kBottom + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(kHeight - kBottom + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  for (double t : yticks) {
    double py = ypix(t);
    out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py)
        << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(py)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << tick_label(t) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\""
      << num(kHeight - 16)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">"
      << spec.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(kTop + (kHeight - kTop - kBottom) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << spec.y_label
      << "</text>\n";

  // clip drawing to the frame
  out << "<clipPath id=\"frame\"><rect x=\"" << num(kLeft) << "\" y=\""
      << num(kTop) << "\" width=\"" << num(kWidth - kLeft - kRight)
      << "\" height=\"" << num(kHeight - kTop - kBottom)
      << "\"/></clipPath>\n<g clip-path=\"url(#frame)\">\n";

  int color_idx = 0;
  for (const auto& s : spec.series) {
    const char* color = kPalette[color_idx % 10];
    ++color_idx;
    if (s.style == PlotSeries::Style::Dots) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (spec.log_x && s.x[i] <= 0) continue;
        if (spec.log_y && s.y[i] <= 0) continue;
        double px = xpix(s.x[i]), py = ypix(s.y[i]);
        if (i < s.ybar.size() && s.ybar[i] > 0) {
          double hi = s.y[i] + s.ybar[i], lo = s.y[i] - s.ybar[i];
          if (!spec.log_y || lo > 0) {
            out << "<line x1=\"" << num(px) << "\" y1=\"" << num(ypix(lo))
                << "\" x2=\"" << num(px) << "\" y2=\"" << num(ypix(hi))
                << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
          }
        }
        out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
            << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
      }
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\"";
      if (s.style == PlotSeries::Style::Dashed)
        out << " stroke-dasharray=\"6,4\"";
      out << " points=\"";
      bool first = true;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (spec.log_x && s.x[i] <= 0) continue;
        if (spec.log_y && s.y[i] <= 0) continue;
        out << (first ? "" : " ") << num(xpix(s.x[i])) << ","
            << num(ypix(s.y[i]));
        first = false;
      }
      out << "\"/>\n";
    }
  }
  out << "</g>\n";

  // legend
  double ly = kTop + 8;
  color_idx = 0;
  for (const auto& s : spec.series) {
    const char* color = kPalette[color_idx % 10];
    ++color_idx;
    double lx = kWidth - kRight + 12;
    if (s.style == PlotSeries::Style::Dots) {
      out << "<circle cx=\"" << num(lx + 12) << "\" cy=\"" << num(ly)
          << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    } else {
      out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\""
          << num(lx + 24) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
          << "\" stroke-width=\"1.8\""
          << (s.style == PlotSeries::Style::Dashed
                  ? " stroke-dasharray=\"6,4\""
                  : "")
          << "/>\n";
    }
    out << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace cli
