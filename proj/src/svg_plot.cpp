#include "mmlaw/error.hpp"
#include "mmlaw/io.hpp"
#include "mmlaw/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace mmlaw {
namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 190.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 56.0;
constexpr double kMargin = 0.05;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return io::format_fixed(v, 3); }

/// [lo, hi] widened by kMargin of the span on each side.
std::pair<double, double> padded_range(double lo, double hi, double fallback) {
  const double span = hi - lo;
  if (span > 0.0) return {lo - kMargin * span, hi + kMargin * span};
  return {lo - fallback, hi + fallback};
}

}  // namespace

PlotDocument emit_svg_plot(std::span<const PlotSeries> series, std::string_view title) {
  if (series.empty()) throw Error(ErrorKind::InvalidArgument, "plot needs at least one series");

  double p_lo = std::numeric_limits<double>::infinity();
  double p_hi = -p_lo;
  for (const auto& s : series) {
    for (const auto& p : s.frontier.points) {
      p_lo = std::min(p_lo, p.total_params_billions);
      p_hi = std::max(p_hi, p.total_params_billions);
    }
  }
  const bool any_points = std::isfinite(p_lo);
  if (!any_points) {
    p_lo = 0.1;
    p_hi = 10.0;
  }

  PlotDocument doc;
  double l_lo = std::numeric_limits<double>::infinity();
  double l_hi = -l_lo;
  for (const auto& s : series) {
    if (s.frontier.empty()) continue;
    for (const auto& p : s.frontier.points) {
      l_lo = std::min(l_lo, p.loss);
      l_hi = std::max(l_hi, p.loss);
    }
    if (!s.fit) continue;
    PlotDocument::Curve curve;
    curve.label = s.label;
    const double a = std::log10(p_lo);
    const double b = std::log10(p_hi);
    for (std::size_t i = 0; i < kCurveSamples; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(kCurveSamples - 1);
      const double budget = std::pow(10.0, a + (b - a) * t);
      const double loss = predict(*s.fit, budget);
      curve.budgets.push_back(budget);
      curve.losses.push_back(loss);
      l_lo = std::min(l_lo, loss);
      l_hi = std::max(l_hi, loss);
    }
    doc.curves.push_back(std::move(curve));
  }
  if (!std::isfinite(l_lo)) {
    l_lo = 0.0;
    l_hi = 1.0;
  }

  const auto [lx0, lx1] = padded_range(std::log10(p_lo), std::log10(p_hi), 0.5);
  const auto [y0, y1] = padded_range(l_lo, l_hi, kMargin * std::max(std::abs(l_lo), 1.0));
  doc.x_min = std::pow(10.0, lx0);
  doc.x_max = std::pow(10.0, lx1);
  doc.y_min = y0;
  doc.y_max = y1;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double budget) { return kLeft + (std::log10(budget) - lx0) / (lx1 - lx0) * plot_w; };
  auto py = [&](double loss) { return kTop + (y1 - loss) / (y1 - y0) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text class=\"title\" x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-size=\"15\">" << escape_xml(title) << "</text>\n";
  }
  svg << "<rect class=\"frame\" x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // Decade ticks on the log axis, five even ticks on the loss axis.
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double x = px(std::pow(10.0, e));
    svg << "<line class=\"xtick\" x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
        << num(x) << "\" y2=\"" << num(kTop) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y0 + (y1 - y0) * i / 4.0;
    const double y = py(v);
    svg << "<line class=\"ytick\" x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(y) << "\" stroke=\"#eee\"/>\n"
        << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
        << io::format_fixed(v, 3) << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 14)
      << "\" text-anchor=\"middle\">total parameters (billions, log scale)</text>\n"
      << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(kTop + plot_h / 2) << ")\">oracle loss (nats/token)</text>\n";

  std::size_t curve_index = 0;
  std::size_t legend_row = 0;
  std::size_t warning_row = 0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& entry = series[s];
    const char* color = kPalette[s % kPalette.size()];
    if (entry.frontier.empty()) {
      svg << "<text class=\"warning\" x=\"" << num(kLeft + 8) << "\" y=\"" << num(kTop + 16 + 14.0 * warning_row++)
          << "\" fill=\"#b00\">warning: series '" << escape_xml(entry.label)
          << "' has no points and was omitted</text>\n";
      continue;
    }
    svg << "<g class=\"series\" data-label=\"" << escape_xml(entry.label) << "\" fill=\"" << color << "\">\n";
    for (const auto& p : entry.frontier.points) {
      svg << "<circle cx=\"" << num(px(p.total_params_billions)) << "\" cy=\"" << num(py(p.loss))
          << "\" r=\"3\"/>\n";
    }
    svg << "</g>\n";
    if (entry.fit) {
      const auto& curve = doc.curves[curve_index++];
      svg << "<polyline class=\"fit\" data-label=\"" << escape_xml(entry.label) << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < curve.budgets.size(); ++i) {
        if (i) svg << ' ';
        svg << num(px(curve.budgets[i])) << ',' << num(py(curve.losses[i]));
      }
      svg << "\"/>\n";
    }
    const double ly = kTop + 12 + 18.0 * legend_row++;
    const double lx = kLeft + plot_w + 14;
    svg << "<circle cx=\"" << num(lx) << "\" cy=\"" << num(ly - 4) << "\" r=\"4\" fill=\"" << color << "\"/>\n"
        << "<text class=\"legend\" x=\"" << num(lx + 10) << "\" y=\"" << num(ly) << "\">"
        << escape_xml(entry.label) << "</text>\n";
  }
  svg << "</svg>\n";
  doc.svg = svg.str();
  return doc;
}

}  // namespace mmlaw
