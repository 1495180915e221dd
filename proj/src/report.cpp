#include "ltlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltlab/format.hpp"

namespace ltlab {

using nlohmann::ordered_json;

namespace {

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(*x) : ordered_json(nullptr);
}

}  // namespace

ordered_json to_json(const SweepReport& report) {
  ordered_json j;
  j["experiment"] = report.experiment;

  ordered_json params;
  params["p"] = report.p;
  params["d"] = 1;
  params["beta"] = report.beta;
  params["eps"] = report.eps ? ordered_json(*report.eps) : ordered_json("1/log(h)");
  if (!report.weight.empty()) params["weight"] = report.weight;
  j["params"] = params;

  ordered_json rows = ordered_json::array();
  for (const SweepRow& row : report.rows) {
    ordered_json r;
    r["h"] = row.h;
    r["t"] = optional_number(row.t);
    r["j_min"] = row.j_min;
    r["j_max"] = row.j_max;
    r["roots"] = row.roots;
    r["failures"] = row.failures;
    r["value"] = row.value;
    r["norm"] = row.norm;
    r["ratio"] = row.ratio;
    r["lower_bound"] = optional_number(row.lower_bound);
    r["terms_skipped"] = row.terms_skipped;
    if (!row.first_failure.empty()) r["first_failure"] = row.first_failure;
    rows.push_back(r);
  }
  j["rows"] = rows;

  ordered_json skipped = ordered_json::array();
  for (const SkippedRow& s : report.skipped) skipped.push_back({{"h", s.h}, {"reason", s.reason}});
  j["skipped"] = skipped;

  if (report.fit) {
    j["fit"] = {{"slope", report.fit->slope},
                {"intercept", report.fit->intercept},
                {"r2", report.fit->r_squared}};
  } else {
    j["fit"] = nullptr;
  }
  j["verdict"] = report.verdict;
  j["criterion"] = report.criterion;
  return j;
}

std::string render_svg(const SweepReport& report) {
  constexpr double kW = 640, kH = 420, kMargin = 60;
  const bool by_t = report.experiment == "thm3";

  std::vector<std::pair<double, double>> pts;
  for (const SweepRow& row : report.rows) {
    const double x = by_t ? row.t.value_or(0.0) : row.h;
    if (x > 0.0 && row.ratio > 0.0) pts.emplace_back(std::log10(x), std::log10(row.ratio));
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << report.experiment << ": log10 ratio vs log10 "
      << (by_t ? "t" : "h") << "</text>\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin
      << "\" height=\"" << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";

  if (!pts.empty()) {
    double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    const double pad_x = 0.05 * (x1 - x0), pad_y = 0.05 * (y1 - y0);
    x0 -= pad_x; x1 += pad_x; y0 -= pad_y; y1 += pad_y;
    const auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kW - 2 * kMargin); };
    const auto py = [&](double y) { return kH - kMargin - (y - y0) / (y1 - y0) * (kH - 2 * kMargin); };

    for (const auto& [x, y] : pts) {
      svg << "<circle cx=\"" << format_g17(px(x)) << "\" cy=\"" << format_g17(py(y))
          << "\" r=\"4\" fill=\"steelblue\"/>\n";
    }
    // thm3 fits log ratio vs log t (a line here); thm1/thm2 fit ratio vs ln h,
    // which is drawn as a curve on these axes.
    if (report.fit) {
      const double ln10 = std::log(10.0);
      svg << "<polyline fill=\"none\" stroke=\"crimson\" points=\"";
      constexpr int kSteps = 64;
      for (int i = 0; i <= kSteps; ++i) {
        const double x = x0 + (x1 - x0) * i / kSteps;
        const double lin = report.fit->intercept + report.fit->slope * x * ln10;
        const double y = by_t ? lin / ln10 : (lin > 0.0 ? std::log10(lin) : NAN);
        if (!std::isfinite(y) || y < y0 || y > y1) continue;
        svg << format_g17(px(x)) << ',' << format_g17(py(y)) << ' ';
      }
      svg << "\"/>\n";
    }
    svg << "<text x=\"" << kMargin << "\" y=\"" << kH - 20
        << "\" font-family=\"sans-serif\" font-size=\"11\">x: " << format_shortest(x0) << " .. "
        << format_shortest(x1) << "   y: " << format_shortest(y0) << " .. "
        << format_shortest(y1) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ltlab
