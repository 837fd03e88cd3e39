#include "saddle/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace saddle {

namespace {

constexpr int kMaxPointsPerSeries = 1500;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Largest of 1, 2, 5 times a power of ten not exceeding a nice fraction of
// the span; standard tick-step selection.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {5.0, 2.0, 1.0}) {
    if (raw >= m * mag) return m * mag;
  }
  return mag;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void cover(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
};

}  // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series) {
  const double width = 860, height = 520;
  const double ml = 80, mr = 24, mt = 48, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (double v : s.x) {
      if (std::isfinite(v)) {
        xlo = std::min(xlo, v);
        xhi = std::max(xhi, v);
      }
    }
    for (double v : s.y) {
      if (std::isfinite(v)) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
      }
    }
  }
  if (!std::isfinite(xlo) || !std::isfinite(xhi)) {
    xlo = 0.0;
    xhi = 1.0;
  }
  if (!std::isfinite(ylo) || !std::isfinite(yhi)) {
    ylo = 0.0;
    yhi = 1.0;
  }
  if (xhi - xlo <= 0.0) xhi = xlo + 1.0;
  if (yhi - ylo <= 0.0) {
    const double pad = std::max(0.5, std::abs(ylo) * 0.1);
    ylo -= pad;
    yhi += pad;
  } else {
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
  }

  auto sx = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double y) { return mt + (yhi - y) / (yhi - ylo) * ph; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"26\" text-anchor=\"middle\" "
      << "font-size=\"16\">" << title << "</text>\n";

  // Gridlines and ticks.
  const double xstep = nice_step(xhi - xlo, 6);
  const double ystep = nice_step(yhi - ylo, 6);
  out << "<g font-size=\"11\" fill=\"#333\">\n";
  for (double x = std::ceil(xlo / xstep) * xstep; x <= xhi + 1e-9 * xstep; x += xstep) {
    out << "<line x1=\"" << fmt(sx(x), "%.2f") << "\" y1=\"" << mt << "\" x2=\""
        << fmt(sx(x), "%.2f") << "\" y2=\"" << mt + ph
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(sx(x), "%.2f") << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << fmt(x, "%.4g") << "</text>\n";
  }
  for (double y = std::ceil(ylo / ystep) * ystep; y <= yhi + 1e-9 * ystep; y += ystep) {
    out << "<line x1=\"" << ml << "\" y1=\"" << fmt(sy(y), "%.2f") << "\" x2=\""
        << ml + pw << "\" y2=\"" << fmt(sy(y), "%.2f")
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(sy(y) + 4, "%.2f")
        << "\" text-anchor=\"end\">" << fmt(y, "%.4g") << "</text>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  // Series polylines, decimated to a displayable point count.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const std::string color =
        s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))]
                        : s.color;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPointsPerSeries);
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < n; k += stride) {
      out << fmt(sx(s.x[k]), "%.2f") << "," << fmt(sy(s.y[k]), "%.2f") << " ";
    }
    if (n > 0 && (n - 1) % stride != 0) {
      out << fmt(sx(s.x[n - 1]), "%.2f") << "," << fmt(sy(s.y[n - 1]), "%.2f");
    }
    out << "\"/>\n";
    const double ly = mt + 18 + 18 * static_cast<double>(si);
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw - 122 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + pw - 116 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << s.label << "</text>\n";
  }

  // Embedded data so the figure is reproducible from the file alone.
  out << "<!-- data\n";
  for (const auto& s : series) {
    out << "series: " << s.label << "\n";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPointsPerSeries);
    for (std::size_t k = 0; k < n; k += stride) {
      out << fmt(s.x[k], "%.12g") << " " << fmt(s.y[k], "%.12g") << "\n";
    }
  }
  out << "-->\n</svg>\n";
}

void write_event_raster(const std::string& path, const std::string& title,
                        const std::vector<std::vector<double>>& events_per_agent,
                        double t_end) {
  const int n = static_cast<int>(events_per_agent.size());
  const double ml = 80, mr = 24, mt = 48, mb = 56;
  const double band = 36;
  const double width = 860, height = mt + mb + band * std::max(n, 1);
  const double pw = width - ml - mr;
  if (!(t_end > 0.0)) t_end = 1.0;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"26\" text-anchor=\"middle\" "
      << "font-size=\"16\">" << title << "</text>\n";

  const double xstep = nice_step(t_end, 6);
  out << "<g font-size=\"11\" fill=\"#333\">\n";
  for (double x = 0.0; x <= t_end + 1e-9 * xstep; x += xstep) {
    const double px = ml + x / t_end * pw;
    out << "<line x1=\"" << fmt(px, "%.2f") << "\" y1=\"" << mt << "\" x2=\""
        << fmt(px, "%.2f") << "\" y2=\"" << height - mb
        << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << fmt(px, "%.2f") << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\">" << fmt(x, "%.4g") << "</text>\n";
  }
  out << "</g>\n";

  for (int i = 0; i < n; ++i) {
    const double y0 = mt + band * i;
    const double mid = y0 + band / 2;
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(mid + 4, "%.2f")
        << "\" text-anchor=\"end\" font-size=\"12\">agent " << i << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << fmt(mid, "%.2f") << "\" x2=\""
        << ml + pw << "\" y2=\"" << fmt(mid, "%.2f") << "\" stroke=\"#bbb\"/>\n";
    const auto& ev = events_per_agent[i];
    const std::size_t stride = std::max<std::size_t>(1, ev.size() / 4000);
    for (std::size_t k = 0; k < ev.size(); k += stride) {
      const double px = ml + ev[k] / t_end * pw;
      out << "<line x1=\"" << fmt(px, "%.2f") << "\" y1=\"" << fmt(mid - 9, "%.2f")
          << "\" x2=\"" << fmt(px, "%.2f") << "\" y2=\"" << fmt(mid + 9, "%.2f")
          << "\" stroke=\"" << kPalette[i % 7] << "\" stroke-width=\"1\"/>\n";
    }
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">time [s]</text>\n";

  out << "<!-- data\n";
  for (int i = 0; i < n; ++i) {
    out << "agent " << i << ":";
    for (double t : events_per_agent[i]) out << " " << fmt(t, "%.12g");
    out << "\n";
  }
  out << "-->\n</svg>\n";
}

}  // namespace saddle
