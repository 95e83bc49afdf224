#include "actint/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json_util.hpp"

namespace actint {

namespace {

constexpr double kPanelW = 400.0;
constexpr double kPanelH = 300.0;
constexpr double kMargin = 40.0;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void text(std::ostringstream& o, double x, double y, const std::string& s, const char* anchor = "start",
          int size = 11) {
  o << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size << "\" text-anchor=\"" << anchor
    << "\">" << esc(s) << "</text>\n";
}

// Horizontal bars around a zero line. Values are clipped to [-limit, limit].
void bars(std::ostringstream& o, double x0, const std::vector<std::pair<std::string, double>>& items, double limit,
          const std::string& highlight) {
  const double label_w = 110.0;
  const double left = x0 + label_w;
  const double width = kPanelW - label_w - 20.0;
  const double zero = left + width / 2.0;
  const double top = kMargin + 10.0;
  const double row = std::min(22.0, (kPanelH - top - 20.0) / std::max<std::size_t>(items.size(), 1));
  o << "<line x1=\"" << num(zero) << "\" y1=\"" << num(top) << "\" x2=\"" << num(zero) << "\" y2=\""
    << num(top + row * static_cast<double>(items.size())) << "\" stroke=\"#444\"/>\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& [name, value] = items[i];
    const double v = std::isfinite(value) ? std::clamp(value, -limit, limit) : 0.0;
    const double w = std::fabs(v) / limit * (width / 2.0);
    const double y = top + row * static_cast<double>(i);
    const double x = v >= 0 ? zero : zero - w;
    o << "<rect x=\"" << num(x) << "\" y=\"" << num(y + 2) << "\" width=\"" << num(w) << "\" height=\""
      << num(row - 4) << "\" fill=\"" << (name == highlight ? "#d62728" : "#1f77b4") << "\"/>\n";
    text(o, left - 6, y + row / 2 + 4, name, "end", 10);
    text(o, v >= 0 ? x + w + 3 : x - 3, y + row / 2 + 4, std::isfinite(value) ? num(value) : "n/a",
         v >= 0 ? "start" : "end", 9);
  }
}

}  // namespace

std::string render_triptych_svg(const Observation& obs, const InterpretationReport& report, double z_threshold) {
  std::ostringstream o;
  const double total_w = 3 * kPanelW;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\"" << kPanelH
    << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Panel 1: traces.
  text(o, kPanelW / 2, 20, "Window " + obs.id() + " (p = " + num(report.prediction.probability) + ")", "middle", 13);
  const auto names = obs.channel_names();
  const double plot_l = kMargin;
  const double plot_w = kPanelW - 2 * kMargin;
  const double band = (kPanelH - kMargin - 20.0) / static_cast<double>(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto v = obs.channel(names[c]).values();
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo > 0 ? *hi_it - lo : 1.0;
    const double y_top = kMargin + band * static_cast<double>(c);
    const bool top = report.top_predictor.is_series() && report.top_predictor.channel == names[c];
    const std::size_t step = std::max<std::size_t>(1, v.size() / 400);
    o << "<polyline fill=\"none\" stroke-width=\"" << (top ? 2 : 1) << "\" stroke=\""
      << (top ? "#d62728" : kPalette[c % std::size(kPalette)]) << "\" points=\"";
    for (std::size_t k = 0; k < v.size(); k += step) {
      const double x = plot_l + plot_w * static_cast<double>(k) / static_cast<double>(v.size() - 1);
      const double y = y_top + band * 0.85 * (1.0 - (v[k] - lo) / span);
      o << num(x) << ',' << num(y) << ' ';
    }
    o << "\"/>\n";
    text(o, plot_l, y_top + 10, names[c], "start", 10);
  }

  // Panel 2: importance.
  const double x2 = kPanelW;
  text(o, x2 + kPanelW / 2, 20, "Predictor importance", "middle", 13);
  std::vector<std::pair<std::string, double>> imp;
  double limit = 1e-6;
  for (const auto& p : report.ranking.top) {
    const double s = report.ranking.score_of(p);
    imp.emplace_back(p.display(), s);
    if (std::isfinite(s)) limit = std::max(limit, std::fabs(s));
  }
  bars(o, x2, imp, limit, report.top_predictor.display());

  // Panel 3: behavior evidence.
  const double x3 = 2 * kPanelW;
  text(o, x3 + kPanelW / 2, 20, "Behavior: " + to_string(report.evidence.label), "middle", 13);
  if (!report.evidence.similarity_scores.empty()) {
    std::vector<std::pair<std::string, double>> sims;
    for (const auto& [label, v] : report.evidence.similarity_scores) sims.emplace_back(to_string(label), v);
    bars(o, x3, sims, 1.0, to_string(report.evidence.label));
  } else if (report.evidence.z_score) {
    const double z = *report.evidence.z_score;
    bars(o, x3, {{"z-score", z}, {"+threshold", z_threshold}, {"-threshold", -z_threshold}},
         std::max(std::fabs(z), z_threshold) * 1.1, "z-score");
  }
  double note_y = kPanelH - 14.0 * static_cast<double>(report.evidence.notes.size()) - 6.0;
  for (const auto& n : report.evidence.notes) {
    text(o, x3 + 10, note_y, n, "start", 9);
    note_y += 14.0;
  }
  o << "</svg>\n";
  return o.str();
}

void write_triptych_svg(const std::string& path, const Observation& obs, const InterpretationReport& report,
                        double z_threshold) {
  detail::write_text_file(path, render_triptych_svg(obs, report, z_threshold));
}

}  // namespace actint
