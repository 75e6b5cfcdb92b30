#include "rinfer/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rinfer/error.hpp"

namespace rinfer {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Frame {
  double width = 640, height = 420;
  double left = 64, right = 24, top = 32, bottom = 56;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

void open_svg(std::ostringstream& out, const Frame& f) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
      << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << " "
      << f.height << "\">\n"
      << "<rect width=\"" << f.width << "\" height=\"" << f.height
      << "\" fill=\"white\"/>\n";
}

void axis_box(std::ostringstream& out, const Frame& f) {
  out << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\""
      << f.plot_w() << "\" height=\"" << f.plot_h()
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
}

void text(std::ostringstream& out, double x, double y, const std::string& s,
          const char* anchor = "middle", int size = 12) {
  out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\""
      << "sans-serif\" font-size=\"" << size << "\" text-anchor=\"" << anchor
      << "\">" << s << "</text>\n";
}

}  // namespace

std::string svg_p_curve(const WindowSelectionResult& sel) {
  require(!sel.cells.empty(), "nothing to plot");
  Frame f;
  const int tau_max = sel.tau_max;
  auto x_of = [&](double tau) {
    return f.left + (tau_max == 1 ? 0.5 * f.plot_w()
                                  : (tau - 1) / (tau_max - 1) * f.plot_w());
  };
  auto y_of = [&](double p) { return f.top + (1.0 - p) * f.plot_h(); };

  std::ostringstream out;
  open_svg(out, f);
  text(out, f.width / 2, 20, "placebo p-values by window halfwidth");

  // y grid and labels at 0, 0.2, ..., 1
  for (int k = 0; k <= 5; ++k) {
    double p = k / 5.0;
    out << "<line x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(y_of(p))
        << "\" x2=\"" << fmt(f.left + f.plot_w()) << "\" y2=\"" << fmt(y_of(p))
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    text(out, f.left - 8, y_of(p) + 4, fmt(p), "end");
  }
  // x ticks at integer taus (thinned when crowded)
  int step = std::max(1, tau_max / 12);
  for (int tau = 1; tau <= tau_max; tau += step)
    text(out, x_of(tau), f.top + f.plot_h() + 18, std::to_string(tau));
  text(out, f.left + f.plot_w() / 2, f.height - 12, "window halfwidth (days)");
  text(out, 16, f.top + f.plot_h() / 2, "p", "middle");

  // threshold line
  out << "<line x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(y_of(sel.threshold))
      << "\" x2=\"" << fmt(f.left + f.plot_w()) << "\" y2=\""
      << fmt(y_of(sel.threshold))
      << "\" stroke=\"#c33\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n";
  text(out, f.left + f.plot_w() - 4, y_of(sel.threshold) - 5,
       "threshold " + fmt(sel.threshold), "end", 11);

  // selected tau marker
  if (sel.tau_star >= 1) {
    out << "<line x1=\"" << fmt(x_of(sel.tau_star)) << "\" y1=\""
        << fmt(f.top) << "\" x2=\"" << fmt(x_of(sel.tau_star)) << "\" y2=\""
        << fmt(f.top + f.plot_h())
        << "\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"2 3\"/>\n";
    text(out, x_of(sel.tau_star), f.top - 4,
         "selected " + std::to_string(sel.tau_star), "middle", 11);
  }

  out << "<polyline fill=\"none\" stroke=\"#26c\" stroke-width=\"1.5\" "
      << "points=\"";
  for (const auto& c : sel.cells)
    out << fmt(x_of(c.tau)) << "," << fmt(y_of(c.p_value)) << " ";
  out << "\"/>\n";
  for (const auto& c : sel.cells)
    out << "<circle cx=\"" << fmt(x_of(c.tau)) << "\" cy=\""
        << fmt(y_of(c.p_value)) << "\" r=\"3\" fill=\"#26c\"/>\n";

  axis_box(out, f);
  out << "</svg>\n";
  return out.str();
}

std::string svg_effect_bars(const std::vector<int>& taus,
                            const std::vector<double>& estimates,
                            const std::vector<double>& p_values,
                            double alpha) {
  require(!taus.empty() && taus.size() == estimates.size() &&
              taus.size() == p_values.size(),
          "bar plot inputs are empty or ragged");
  Frame f;
  const int m = static_cast<int>(taus.size());
  double top_val = 0.0;
  for (double e : estimates) top_val = std::max(top_val, std::fabs(e));
  if (top_val == 0.0) top_val = 1.0;
  top_val *= 1.15;

  auto x_of = [&](int k) {
    return f.left + (k + 0.5) / m * f.plot_w();
  };
  auto y_est = [&](double e) {
    return f.top + (1.0 - (e + top_val) / (2 * top_val)) * f.plot_h();
  };
  auto y_p = [&](double p) { return f.top + (1.0 - p) * f.plot_h(); };
  const double bar_w = 0.6 * f.plot_w() / m;

  std::ostringstream out;
  open_svg(out, f);
  text(out, f.width / 2, 20, "window estimates with p-values");

  // zero line for the estimate scale
  out << "<line x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(y_est(0)) << "\" x2=\""
      << fmt(f.left + f.plot_w()) << "\" y2=\"" << fmt(y_est(0))
      << "\" stroke=\"#bbb\" stroke-width=\"1\"/>\n";
  text(out, f.left - 8, y_est(0) + 4, "0", "end");
  text(out, f.left - 8, y_est(top_val / 1.15) + 4, fmt(top_val / 1.15), "end");
  text(out, f.left - 8, y_est(-top_val / 1.15) + 4, fmt(-top_val / 1.15),
       "end");

  for (int k = 0; k < m; ++k) {
    double e = estimates[k];
    double y0 = std::min(y_est(0.0), y_est(e));
    double h = std::fabs(y_est(e) - y_est(0.0));
    out << "<rect x=\"" << fmt(x_of(k) - bar_w / 2) << "\" y=\"" << fmt(y0)
        << "\" width=\"" << fmt(bar_w) << "\" height=\"" << fmt(h)
        << "\" fill=\"#9bc\" stroke=\"#368\"/>\n";
    text(out, x_of(k), f.top + f.plot_h() + 18, std::to_string(taus[k]));
  }
  text(out, f.left + f.plot_w() / 2, f.height - 12, "window halfwidth (days)");

  // p-value overlay on the 0..1 scale
  out << "<line x1=\"" << fmt(f.left) << "\" y1=\"" << fmt(y_p(alpha))
      << "\" x2=\"" << fmt(f.left + f.plot_w()) << "\" y2=\"" << fmt(y_p(alpha))
      << "\" stroke=\"#c33\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n";
  text(out, f.left + f.plot_w() - 4, y_p(alpha) - 5, "alpha " + fmt(alpha),
       "end", 11);
  for (int k = 0; k < m; ++k) {
    out << "<circle cx=\"" << fmt(x_of(k)) << "\" cy=\""
        << fmt(y_p(p_values[k])) << "\" r=\"4\" fill=\"#c33\"/>\n";
    text(out, x_of(k), y_p(p_values[k]) - 8, fmt(p_values[k]), "middle", 10);
  }

  axis_box(out, f);
  out << "</svg>\n";
  return out.str();
}

}  // namespace rinfer
