#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dmspec/dynamics.hpp"
#include "dmspec/sampling.hpp"

namespace dmspec {

/// Closed energy interval [lo, hi].
struct Band {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double e, double slack = 0.0) const { return e >= lo - slack && e <= hi + slack; }
  friend bool operator==(const Band&, const Band&) = default;
};

/// Open energy interval (lo, hi) between two bands.
struct Gap {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double e) const { return e > lo && e < hi; }
};

/// Approximation of the almost sure spectrum by a finite union of bands.
struct SpectrumApprox {
  std::vector<Band> bands;  // sorted, prev.hi < next.lo
  int max_period_used = 0;
  std::vector<Gap> gaps;    // between consecutive bands
  Band hull;

  bool contains(double e, double slack = 0.0) const;
};

struct SpectrumOptions {
  /// Absolute bisection tolerance on band edges.
  double tol = 1e-10;
  /// Chebyshev scan nodes per unit of period.
  std::size_t nodes_per_period = 64;
  int threads = 1;
};

/// {E : |Δ(E)| <= 2} for one period of a periodic potential, as at most p
/// disjoint closed bands. Throws RootBracketingFailure if the edge roots cannot
/// be isolated consistently.
std::vector<Band> periodic_bands(std::span<const double> periodic_potential,
                                 const SpectrumOptions& options = {});
std::vector<Band> periodic_bands(const PeriodicOrbit& orbit, const SamplingFunction& f,
                                 const SpectrumOptions& options = {});

/// Sorts, merges bands whose separation is at most merge_tol, derives gaps and hull.
SpectrumApprox merge_bands(std::vector<Band> bands, double merge_tol, int max_period = 0);

struct OrbitBands {
  PeriodicOrbit orbit;
  std::vector<Band> bands;
};

/// periodic_bands for every orbit of period <= max_period, in enumeration order.
std::vector<OrbitBands> all_periodic_bands(const SamplingFunction& f, int max_period,
                                           const SpectrumOptions& options = {});

/// Union of all periodic spectra up to max_period, merged with tolerance 10·tol.
SpectrumApprox union_spectrum(const SamplingFunction& f, int max_period,
                              const SpectrumOptions& options = {});

struct GapEntry {
  Gap gap;
  double length = 0.0;
};

struct GapReport {
  /// Interior gaps sorted by length, longest first.
  std::vector<GapEntry> gaps;
  /// Gaps shorter than 100·tol, kept apart as numerical artifacts.
  std::vector<GapEntry> below_resolution;

  double max_gap() const { return gaps.empty() ? 0.0 : gaps.front().length; }
};

GapReport gap_report(const SpectrumApprox& spectrum, double tol = 1e-10);

}  // namespace dmspec
