#include "dmspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dmspec/cocycle.hpp"
#include "dmspec/errors.hpp"
#include "dmspec/parallel.hpp"

namespace dmspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRangePad = 0.25;
constexpr int kMaxGridRefinements = 4;

struct DiscriminantValue {
  double value;
  double rounding;  // estimated absolute rounding error of value
};

DiscriminantValue evaluate(std::span<const double> v, double energy) {
  TransferMatrix product;
  double largest = 1.0;
  for (double x : v) {
    product = step_matrix(energy, x) * product;
    largest = std::max(largest, product.max_abs());
  }
  return {product.trace(), 8.0 * kEps * double(v.size()) * largest * largest};
}

double bisect(std::span<const double> v, double target, double a, double b, double tol) {
  double ga = evaluate(v, a).value - target;
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double mid = 0.5 * (a + b);
    const double gm = evaluate(v, mid).value - target;
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Golden-section search for the extremum of Δ on [a, b]; sign = +1 for a maximum.
std::pair<double, DiscriminantValue> extremum(std::span<const double> v, double a, double b,
                                              double sign, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sign * evaluate(v, c).value;
  double fd = sign * evaluate(v, d).value;
  for (int it = 0; it < 200 && b - a > 1e-3 * tol; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sign * evaluate(v, c).value;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sign * evaluate(v, d).value;
    }
  }
  const double x = 0.5 * (a + b);
  return {x, evaluate(v, x)};
}

struct EdgeScan {
  std::vector<double> roots_upper;  // Δ = +2
  std::vector<double> roots_lower;  // Δ = −2
  std::vector<Band> bands;
};

void dedupe(std::vector<double>& xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  xs = std::move(out);
}

EdgeScan scan(std::span<const double> v, double lo, double hi, std::size_t nodes, double tol) {
  // Chebyshev–Lobatto nodes, ascending, endpoints included.
  std::vector<double> xs(nodes);
  std::vector<double> ds(nodes);
  const double centre = 0.5 * (lo + hi);
  const double radius = 0.5 * (hi - lo);
  for (std::size_t j = 0; j < nodes; ++j) {
    xs[j] = centre - radius * std::cos(std::numbers::pi * double(j) / double(nodes - 1));
    ds[j] = evaluate(v, xs[j]).value;
  }
  xs.front() = lo;
  xs.back() = hi;

  EdgeScan out;
  for (const double target : {2.0, -2.0}) {
    auto& roots = target > 0 ? out.roots_upper : out.roots_lower;
    for (std::size_t j = 0; j + 1 < nodes; ++j) {
      const double g0 = ds[j] - target;
      const double g1 = ds[j + 1] - target;
      if (g0 == 0.0) {
        roots.push_back(xs[j]);
      } else if ((g0 < 0.0) != (g1 < 0.0) && g1 != 0.0) {
        roots.push_back(bisect(v, target, xs[j], xs[j + 1], tol));
      }
    }
    // Thin gaps open and close between two nodes: look for extrema of Δ that
    // poke past ±2 while the neighbouring nodes stay inside the band region.
    const double sign = target > 0 ? 1.0 : -1.0;
    for (std::size_t j = 1; j + 1 < nodes; ++j) {
      const double rise = sign * (ds[j] - ds[j - 1]);
      const double fall = sign * (ds[j + 1] - ds[j]);
      if (!(rise > 0.0 && fall <= 0.0)) continue;
      if (sign * (ds[j - 1] - target) > 0 || sign * (ds[j] - target) > 0 ||
          sign * (ds[j + 1] - target) > 0) {
        continue;
      }
      const auto [x, d] = extremum(v, xs[j - 1], xs[j + 1], sign, tol);
      if (sign * (d.value - target) > d.rounding) {
        roots.push_back(bisect(v, target, xs[j - 1], x, tol));
        roots.push_back(bisect(v, target, x, xs[j + 1], tol));
      }
    }
    dedupe(roots, 0.5 * tol);
  }

  std::vector<double> cuts{lo, hi};
  cuts.insert(cuts.end(), out.roots_upper.begin(), out.roots_upper.end());
  cuts.insert(cuts.end(), out.roots_lower.begin(), out.roots_lower.end());
  dedupe(cuts, 0.5 * tol);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (std::abs(evaluate(v, 0.5 * (a + b)).value) > 2.0) continue;
    if (!out.bands.empty() && a - out.bands.back().hi <= tol) {
      out.bands.back().hi = b;
    } else {
      out.bands.push_back({a, b});
    }
  }
  return out;
}

}  // namespace

bool SpectrumApprox::contains(double e, double slack) const {
  return std::any_of(bands.begin(), bands.end(),
                     [&](const Band& b) { return b.contains(e, slack); });
}

std::vector<Band> periodic_bands(std::span<const double> periodic_potential,
                                 const SpectrumOptions& options) {
  const std::size_t p = periodic_potential.size();
  if (p == 0) throw InvalidParameter("periodic potential must have period >= 1");
  if (!(options.tol > 0.0)) throw InvalidParameter("band tolerance must be positive");
  const auto [vmin, vmax] =
      std::minmax_element(periodic_potential.begin(), periodic_potential.end());
  const double lo = *vmin - 2.0 - kRangePad;
  const double hi = *vmax + 2.0 + kRangePad;

  std::size_t nodes = std::max<std::size_t>(8, options.nodes_per_period * p);
  for (int attempt = 0; attempt <= kMaxGridRefinements; ++attempt, nodes *= 2) {
    EdgeScan s = scan(periodic_potential, lo, hi, nodes, options.tol);
    const bool consistent = s.roots_upper.size() <= p && s.roots_lower.size() <= p &&
                            !s.bands.empty() && s.bands.size() <= p;
    if (consistent) return s.bands;
  }
  throw RootBracketingFailure("could not isolate the 2p = " + std::to_string(2 * p) +
                              " band-edge roots on Chebyshev grids of up to " +
                              std::to_string(nodes / 2) + " nodes over [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
}

std::vector<Band> periodic_bands(const PeriodicOrbit& orbit, const SamplingFunction& f,
                                 const SpectrumOptions& options) {
  try {
    return periodic_bands(orbit_potential(orbit, f), options);
  } catch (const RootBracketingFailure& e) {
    throw RootBracketingFailure("orbit " + orbit.label() + ": " + e.what());
  }
}

SpectrumApprox merge_bands(std::vector<Band> bands, double merge_tol, int max_period) {
  SpectrumApprox out;
  out.max_period_used = max_period;
  std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  for (const Band& b : bands) {
    if (!out.bands.empty() && b.lo <= out.bands.back().hi + merge_tol) {
      out.bands.back().hi = std::max(out.bands.back().hi, b.hi);
    } else {
      out.bands.push_back(b);
    }
  }
  for (std::size_t i = 0; i + 1 < out.bands.size(); ++i) {
    out.gaps.push_back({out.bands[i].hi, out.bands[i + 1].lo});
  }
  if (!out.bands.empty()) out.hull = {out.bands.front().lo, out.bands.back().hi};
  return out;
}

std::vector<OrbitBands> all_periodic_bands(const SamplingFunction& f, int max_period,
                                           const SpectrumOptions& options) {
  auto orbits = enumerate_orbits(max_period);
  std::vector<OrbitBands> out(orbits.size());
  parallel_for(orbits.size(), options.threads, [&](std::size_t i) {
    out[i].bands = periodic_bands(orbits[i], f, options);
    out[i].orbit = std::move(orbits[i]);
  });
  return out;
}

SpectrumApprox union_spectrum(const SamplingFunction& f, int max_period,
                              const SpectrumOptions& options) {
  std::vector<Band> bands;
  for (auto& ob : all_periodic_bands(f, max_period, options)) {
    bands.insert(bands.end(), ob.bands.begin(), ob.bands.end());
  }
  return merge_bands(std::move(bands), 10.0 * options.tol, max_period);
}

GapReport gap_report(const SpectrumApprox& spectrum, double tol) {
  GapReport report;
  for (const Gap& g : spectrum.gaps) {
    auto& target = g.length() < 100.0 * tol ? report.below_resolution : report.gaps;
    target.push_back({g, g.length()});
  }
  auto longest_first = [](const GapEntry& a, const GapEntry& b) {
    return a.length > b.length || (a.length == b.length && a.gap.lo < b.gap.lo);
  };
  std::sort(report.gaps.begin(), report.gaps.end(), longest_first);
  std::sort(report.below_resolution.begin(), report.below_resolution.end(), longest_first);
  return report;
}

}  // namespace dmspec
