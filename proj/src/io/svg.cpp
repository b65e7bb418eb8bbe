#include "dmspec/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace dmspec::io {

namespace {

constexpr double kWidth = 800.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Axis {
  double lo;
  double hi;

  double x(double e) const { return kLeft + (e - lo) / (hi - lo) * (kWidth - kLeft - kRight); }
};

Axis energy_axis(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.03 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string header(double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(kWidth) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
         num(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string energy_ticks(const Axis& axis, double y) {
  std::string out = "<line x1=\"" + num(axis.x(axis.lo)) + "\" y1=\"" + num(y) + "\" x2=\"" +
                    num(axis.x(axis.hi)) + "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
  const double span = axis.hi - axis.lo;
  const double raw = span / 8.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  double step = magnitude;
  for (double m : {2.0, 5.0, 10.0}) {
    if (step * 1.5 < raw) step = magnitude * m;
  }
  for (double e = std::ceil(axis.lo / step) * step; e <= axis.hi; e += step) {
    const double v = std::abs(e) < 1e-12 * step ? 0.0 : e;
    out += "<line x1=\"" + num(axis.x(v)) + "\" y1=\"" + num(y) + "\" x2=\"" + num(axis.x(v)) +
           "\" y2=\"" + num(y + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(axis.x(v)) + "\" y=\"" + num(y + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + label(v) + "</text>\n";
  }
  out += "<text x=\"" + num(0.5 * (kLeft + kWidth - kRight)) + "\" y=\"" + num(y + 34) +
         "\" font-size=\"12\" text-anchor=\"middle\">E</text>\n";
  return out;
}

std::string rect(const Axis& axis, const Band& b, double y, double h, const char* fill,
                 const char* opacity) {
  const double x0 = axis.x(b.lo);
  const double w = std::max(0.5, axis.x(b.hi) - x0);
  return "<rect x=\"" + num(x0) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
         num(h) + "\" fill=\"" + fill + "\" fill-opacity=\"" + opacity + "\"/>\n";
}

}  // namespace

std::string band_diagram_svg(const std::vector<OrbitBands>& per_orbit,
                             const SpectrumApprox& merged) {
  std::map<int, std::vector<Band>> by_period;
  for (const auto& ob : per_orbit) {
    auto& row = by_period[ob.orbit.period];
    row.insert(row.end(), ob.bands.begin(), ob.bands.end());
  }
  const double row_height = 18.0;
  const double rows = double(by_period.size() + 1);
  const double axis_y = kTop + rows * (row_height + 6.0) + 4.0;
  const double height = axis_y + 44.0;

  const Axis axis = energy_axis(merged.hull.lo, merged.hull.hi);
  std::string out = header(height);
  double y = kTop;
  for (const auto& [period, bands] : by_period) {
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 13) +
           "\" font-size=\"11\" text-anchor=\"end\">p = " + std::to_string(period) + "</text>\n";
    for (const Band& b : bands) out += rect(axis, b, y, row_height, "#1f4e8c", "0.35");
    y += row_height + 6.0;
  }
  out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 13) +
         "\" font-size=\"11\" text-anchor=\"end\">union</text>\n";
  for (const Band& b : merged.bands) out += rect(axis, b, y, row_height, "#b22222", "0.9");
  out += energy_ticks(axis, axis_y);
  out += "</svg>\n";
  return out;
}

std::string ids_staircase_svg(const IdsTable& table, const SpectrumApprox* shading) {
  const double plot_height = 320.0;
  const double height = kTop + plot_height + 50.0;
  const double lo = table.energies.empty() ? -1.0 : table.energies.front();
  const double hi = table.energies.empty() ? 1.0 : table.energies.back();
  const Axis axis = energy_axis(lo, hi);
  auto ky = [&](double k) { return kTop + (1.0 - k) * plot_height; };

  std::string out = header(height);
  if (shading) {
    for (const Band& b : shading->bands) {
      out += rect(axis, {std::max(b.lo, axis.lo), std::min(b.hi, axis.hi)}, kTop, plot_height,
                  "#f4a460", "0.35");
    }
  }
  for (double k : {0.0, 0.5, 1.0}) {
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(ky(k)) + "\" x2=\"" +
           num(axis.x(axis.hi)) + "\" y2=\"" + num(ky(k)) + "\" stroke=\"#cccccc\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(ky(k) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + label(k) + "</text>\n";
  }
  out += "<text x=\"18\" y=\"" + num(kTop + 0.5 * plot_height) +
         "\" font-size=\"12\" text-anchor=\"middle\">k(E)</text>\n";
  out += "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t j = 0; j < table.energies.size(); ++j) {
    const double x = axis.x(table.energies[j]);
    const double y = ky(table.k_values[j]);
    if (j > 0) out += " " + num(x) + "," + num(ky(table.k_values[j - 1]));
    out += (j ? " " : "") + num(x) + "," + num(y);
  }
  out += "\"/>\n";
  out += energy_ticks(axis, kTop + plot_height);
  out += "</svg>\n";
  return out;
}

}  // namespace dmspec::io
