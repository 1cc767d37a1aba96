#include "tgrasp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tgrasp {

namespace {

constexpr int kWidth = 960;
constexpr int kPanelHeight = 200;
constexpr int kPanelGap = 46;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 40;

const char* kDigitColors[kNumDigits] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Panel {
  int top;
  double y_min, y_max;

  double map_y(double v) const {
    if (y_max == y_min) return top + kPanelHeight / 2.0;
    const double u = (v - y_min) / (y_max - y_min);
    return top + (1.0 - u) * kPanelHeight;
  }
};

}  // namespace

std::string render_trace_svg(const std::vector<TraceRow>& trace) {
  if (trace.empty()) throw std::invalid_argument("trace is empty");

  const double t0 = trace.front().t;
  const double t1 = trace.back().t;
  const double t_span = std::max(t1 - t0, 1e-9);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  auto map_x = [&](double t) { return kMarginLeft + (t - t0) / t_span * plot_w; };

  auto range_of = [&](const std::function<double(const TraceRow&)>& f, double pad) {
    double lo = f(trace.front()), hi = lo;
    for (const TraceRow& r : trace) {
      lo = std::min(lo, f(r));
      hi = std::max(hi, f(r));
    }
    if (hi - lo < pad) hi = lo + pad;
    return std::pair{lo, hi};
  };

  Panel pressure{kMarginTop, 0.0, 1.0};
  double fsr_hi = 1.0;
  for (const TraceRow& r : trace) {
    for (const auto& d : r.digits) fsr_hi = std::max(fsr_hi, d.fsr_n);
  }
  Panel force{kMarginTop + kPanelHeight + kPanelGap, 0.0, fsr_hi * 1.05};
  auto [z_lo, z_hi] = range_of(
      [](const TraceRow& r) { return std::max(r.palm_z_m, r.object_z_m); }, 0.01);
  Panel height{kMarginTop + 2 * (kPanelHeight + kPanelGap), std::min(0.0, z_lo), z_hi * 1.05};

  const int total_h = kMarginTop + 3 * kPanelHeight + 2 * kPanelGap + 40;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << total_h << "\" viewBox=\"0 0 " << kWidth << ' ' << total_h << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto panel_frame = [&](const Panel& p, const std::string& title) {
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << p.top << "\" width=\"" << plot_w
        << "\" height=\"" << kPanelHeight
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kMarginLeft << "\" y=\"" << p.top - 8
        << "\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << p.top + 12
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(p.y_max)
        << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << p.top + kPanelHeight
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(p.y_min)
        << "</text>\n";
  };

  auto polyline = [&](const Panel& p, const std::function<double(const TraceRow&)>& f,
                      const char* color, const char* dash = nullptr) {
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\"";
    if (dash) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    // Thin long traces so files stay small.
    const std::size_t stride = std::max<std::size_t>(1, trace.size() / 4000);
    for (std::size_t i = 0; i < trace.size(); i += stride) {
      svg << num(map_x(trace[i].t)) << ',' << num(p.map_y(f(trace[i]))) << ' ';
    }
    svg << num(map_x(trace.back().t)) << ',' << num(p.map_y(f(trace.back())));
    svg << "\"/>\n";
  };

  panel_frame(pressure, "Fingertip pressure (normalized)");
  panel_frame(force, "Base force (N)");
  panel_frame(height, "Palm and object height (m)");

  for (std::size_t d = 0; d < kNumDigits; ++d) {
    polyline(pressure, [d](const TraceRow& r) { return r.digits[d].s_biotac; }, kDigitColors[d]);
    polyline(force, [d](const TraceRow& r) { return r.digits[d].fsr_n; }, kDigitColors[d]);
  }
  polyline(height, [](const TraceRow& r) { return r.palm_z_m; }, "#333333");
  polyline(height, [](const TraceRow& r) { return r.object_z_m; }, "#17becf", "4,3");

  // Phase boundaries across all panels.
  ControllerPhase prev = trace.front().phase;
  const int band_top = kMarginTop;
  const int band_bottom = height.top + kPanelHeight;
  svg << "<text x=\"" << map_x(trace.front().t) + 3 << "\" y=\"" << band_bottom + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << phase_name(prev) << "</text>\n";
  for (const TraceRow& r : trace) {
    if (r.phase != prev) {
      const double x = map_x(r.t);
      svg << "<line x1=\"" << num(x) << "\" y1=\"" << band_top << "\" x2=\"" << num(x)
          << "\" y2=\"" << band_bottom
          << "\" stroke=\"#999\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n";
      svg << "<text x=\"" << num(x + 3) << "\" y=\"" << band_bottom + 16
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << phase_name(r.phase)
          << "</text>\n";
      prev = r.phase;
    }
  }

  // Digit legend.
  for (std::size_t d = 0; d < kNumDigits; ++d) {
    const double x = kMarginLeft + plot_w - 5 * 46.0 + static_cast<double>(d) * 46.0;
    svg << "<rect x=\"" << num(x) << "\" y=\"" << kMarginTop - 26
        << "\" width=\"10\" height=\"10\" fill=\"" << kDigitColors[d] << "\"/>\n";
    svg << "<text x=\"" << num(x + 13) << "\" y=\"" << kMarginTop - 17
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << digit_name(kAllDigits[d])
        << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void plot_summary(const std::vector<TraceRow>& trace, const std::string& out_path) {
  const std::string svg = render_trace_svg(trace);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write plot: " + out_path);
  out << svg;
  if (!out.good()) throw std::runtime_error("error while writing plot: " + out_path);
}

}  // namespace tgrasp
