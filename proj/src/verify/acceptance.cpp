#include "dmspec/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "dmspec/cocycle.hpp"
#include "dmspec/errors.hpp"
#include "dmspec/ids.hpp"
#include "dmspec/schwartzman.hpp"
#include "dmspec/spectrum.hpp"
#include "dmspec/verify/oracles.hpp"

namespace dmspec::acceptance {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  std::vector<std::string> failed;

  /// `key` names the sub-check so that callers can tell failures apart.
  void require(bool condition, const std::string& key, const std::string& failure) {
    if (condition) return;
    passed = false;
    if (std::find(failed.begin(), failed.end(), key) == failed.end()) failed.push_back(key);
    detail << "FAILED " << key << ": " << failure << "; ";
  }
};

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string fmt_bands(const std::vector<Band>& bands, std::size_t limit = 4) {
  std::string s;
  for (std::size_t i = 0; i < bands.size() && i < limit; ++i) {
    s += "[" + fmt(bands[i].lo) + "," + fmt(bands[i].hi) + "]";
  }
  if (bands.size() > limit) s += "...(" + std::to_string(bands.size()) + " bands)";
  return s;
}

bool covers(const SpectrumApprox& s, double lo, double hi, double slack) {
  return std::any_of(s.bands.begin(), s.bands.end(),
                     [&](const Band& b) { return b.lo <= lo + slack && b.hi >= hi - slack; });
}

constexpr std::uint64_t kIdsSeed = 0x1d5001;

// 1. Fixed point {0}: band [f(0) − 2, f(0) + 2].
void fixed_point_spectrum(Outcome& out, const Options&) {
  const PeriodicOrbit fixed = enumerate_orbits(1).front();
  for (double lambda : {0.5, 1.0}) {
    const auto bands = periodic_bands(fixed, SamplingFunction::cosine(lambda));
    const double lo = 2 * lambda - 2;
    const double hi = 2 * lambda + 2;
    double err = INFINITY;
    if (bands.size() == 1) err = std::max(std::abs(bands[0].lo - lo), std::abs(bands[0].hi - hi));
    out.detail << "lambda=" << lambda << " edge error " << fmt(err, 3) << "; ";
    out.require(bands.size() == 1 && err < 1e-8, "edges", "lambda=" + fmt(lambda) + " gave " + fmt_bands(bands));
  }
}

// 2. Every union up to period 10 covers the fixed-point band.
void containment(Outcome& out, const Options& o) {
  SpectrumOptions so;
  so.threads = o.threads;
  for (double lambda : {0.5, 1.0}) {
    const auto f = SamplingFunction::cosine(lambda);
    int covered = 0;
    for (int p = 1; p <= 10; ++p) {
      const auto s = union_spectrum(f, p, so);
      if (covers(s, 2 * lambda - 2, 2 * lambda + 2, 1e-6)) {
        ++covered;
      } else {
        out.require(false, "cover", "lambda=" + fmt(lambda) + " max_period=" + std::to_string(p) +
                               " bands " + fmt_bands(s.bands));
      }
    }
    out.detail << "lambda=" << lambda << " covered at " << covered << "/10 periods; ";
  }
}

// 3. Bernoulli: two bands near [−2,2] ∪ [3,7], gap label 1/2.
void bernoulli_counterexample(Outcome& out, const Options& o) {
  const auto f = SamplingFunction::bernoulli(5.0);
  SpectrumOptions so;
  so.threads = o.threads;
  const auto s = union_spectrum(f, 10, so);
  const std::vector<Band> target{{-2.0, 2.0}, {3.0, 7.0}};
  const double hd = oracle::hausdorff_distance(s.bands, target);
  const bool wide_gap = std::any_of(s.gaps.begin(), s.gaps.end(),
                                    [](const Gap& g) { return g.lo <= 2.1 && g.hi >= 2.9; });
  out.detail << s.bands.size() << " merged bands " << fmt_bands(s.bands) << ", Hausdorff distance "
             << fmt(hd, 4) << "; ";
  out.require(s.bands.size() == 2, "two_bands", "expected exactly two merged bands, got " +
                                       std::to_string(s.bands.size()));
  out.require(hd < 0.05, "hausdorff", "Hausdorff distance " + fmt(hd, 4) + " >= 0.05");
  out.require(wide_gap, "gap", "no interior gap contains (2.1, 2.9)");

  const auto grid = default_ids_grid(s);
  const auto table = ids_estimate(f, grid, 512, 64, kIdsSeed, o.threads);
  const auto label = gap_label(table, 2.0, 3.0);
  out.detail << "gap label over (2,3) = " << fmt(label.value, 5) << "; ";
  out.require(std::abs(label.value - 0.5) <= 0.02, "label", "gap label " + fmt(label.value) + " not 0.5 +- 0.02");
}

// 4. Cosine λ = 1/2: maximal gap nonincreasing in the period, halved by period 12.
void gap_shrinkage(Outcome& out, const Options& o) {
  const auto f = SamplingFunction::cosine(0.5);
  SpectrumOptions so;
  so.threads = o.threads;
  std::vector<double> max_gaps;
  for (int p : {4, 6, 8, 10, 12}) {
    max_gaps.push_back(gap_report(union_spectrum(f, p, so)).max_gap());
    out.detail << "P=" << p << " max gap " << fmt(max_gaps.back(), 4) << "; ";
  }
  for (std::size_t i = 1; i < max_gaps.size(); ++i) {
    out.require(max_gaps[i] <= max_gaps[i - 1], "monotone", "max gap increased at step " + std::to_string(i));
  }
  out.require(max_gaps.back() < 0.5 * max_gaps.front(), "halving",
              "max gap at P=12 (" + fmt(max_gaps.back(), 4) + ") not below 50% of P=4 (" +
                  fmt(max_gaps.front(), 4) + ")");
}

// 5. Free IDS against the arccos closed form.
void free_ids(Outcome& out, const Options& o) {
  const auto grid = uniform_grid(-2.0, 2.0, 101);
  const auto table = ids_estimate(SamplingFunction::constant(0.0), grid, 512, 64, kIdsSeed, o.threads);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    worst = std::max(worst, std::abs(table.k_values[j] - oracle::free_ids(grid[j])));
  }
  out.detail << "max |k - k_free| = " << fmt(worst, 4) << "; ";
  out.require(worst < 0.03, "oracle", "deviation " + fmt(worst, 4) + " >= 0.03");
}

// 6. Gap labelling below and above the spectrum.
void gap_labelling(Outcome& out, const Options& o) {
  SpectrumOptions so;
  so.threads = o.threads;
  RotationOptions ro;
  ro.threads = o.threads;
  ro.dichotomy.threads = o.threads;
  const std::vector<std::pair<std::string, SamplingFunction>> cases{
      {"f=0", SamplingFunction::constant(0.0)}, {"f=cos,lambda=0.5", SamplingFunction::cosine(0.5)}};
  for (const auto& [name, f] : cases) {
    const auto hull = union_spectrum(f, 10, so).hull;
    for (const auto& [energy, expected] : {std::pair{hull.lo - 0.5, 1LL}, std::pair{hull.hi + 0.5, 0LL}}) {
      const double e = energy;
      const std::vector<double> grid{e};
      const double k = ids_estimate(f, grid, 512, 64, kIdsSeed, o.threads).k_values[0];
      const auto rot = rotation_number(f, e, ro);
      const auto verdict = integrality_check(rot);
      const double defect = std::abs(rot.value - (1.0 - k));
      out.detail << name << " E=" << fmt(e, 4) << ": rot " << fmt(rot.value, 5) << ", 1-k "
                 << fmt(1.0 - k, 5) << ", " << verdict.to_string() << "; ";
      out.require(defect < 0.03, "identity", name + " E=" + fmt(e) + " |rot-(1-k)| = " + fmt(defect, 3));
      out.require(verdict.is_integer(expected), "integer",
                  name + " E=" + fmt(e) + " expected Integer(" + std::to_string(expected) + ")");
    }
  }
}

// 7. Bernoulli gap: rotation 1/2, not an integer.
void bernoulli_rotation(Outcome& out, const Options& o) {
  RotationOptions ro;
  ro.threads = o.threads;
  ro.dichotomy.threads = o.threads;
  const auto rot = rotation_number(SamplingFunction::bernoulli(5.0), 2.5, ro);
  const auto verdict = integrality_check(rot);
  out.detail << "rot " << fmt(rot.value, 5) << " +- " << fmt(rot.std_error, 2) << ", "
             << verdict.to_string() << "; ";
  out.require(std::abs(rot.value - 0.5) <= 0.02, "value", "rotation " + fmt(rot.value) + " not 0.5 +- 0.02");
  out.require(verdict.kind == IntegralityVerdict::Kind::NonInteger, "verdict", "verdict " + verdict.to_string());
}

// 8. Exact structural oracles.
void structural(Outcome& out, const Options& o) {
  // Sturm counts against a dense eigensolver.
  std::size_t mismatches = 0;
  std::size_t compared = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(0xabc0 + s);
    const std::size_t n = 1 + (s * 7) % 64;
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    std::vector<double> v(n);
    for (double& x : v) x = value(rng);
    for (double e = -6.0; e <= 6.0; e += 0.37) {
      ++compared;
      if (eigen_count(v, e) != oracle::dense_eigen_count(v, e)) ++mismatches;
    }
  }
  out.detail << "Sturm: " << compared - mismatches << "/" << compared << " counts agree; ";
  out.require(mismatches == 0, "sturm", std::to_string(mismatches) + " Sturm count mismatches");

  // Band edges against the periodic/antiperiodic eigenvalue oracle.
  const std::vector<SamplingFunction> functions{
      SamplingFunction::cosine(1.0), SamplingFunction::cosine(0.5), SamplingFunction::bernoulli(5.0),
      SamplingFunction(TrigPoly{0.3, {0.7, -0.2}, {0.4}})};
  double worst_edge = 0.0;
  std::size_t orbits = 0;
  for (const auto& f : functions) {
    for (const auto& orbit : enumerate_orbits(8)) {
      ++orbits;
      const auto v = orbit_potential(orbit, f);
      const auto ours = oracle::merged(periodic_bands(v), 1e-6);
      const auto ref = oracle::merged(oracle::floquet_bands(v), 1e-6);
      if (ours.size() != ref.size()) {
        out.require(false, "band_edges", "orbit " + orbit.label() + ": " + fmt_bands(ours) + " vs oracle " +
                               fmt_bands(ref));
        continue;
      }
      for (std::size_t i = 0; i < ours.size(); ++i) {
        worst_edge = std::max({worst_edge, std::abs(ours[i].lo - ref[i].lo),
                               std::abs(ours[i].hi - ref[i].hi)});
      }
    }
  }
  out.detail << "band edges: " << orbits << " orbits, worst deviation " << fmt(worst_edge, 3) << "; ";
  out.require(worst_edge < 1e-6, "band_edges", "band edge deviation " + fmt(worst_edge, 3));

  // Unimodularity of cocycle products.
  double worst_det = 0.0;
  double worst_relative = 0.0;
  for (const auto& f : functions) {
    for (std::uint64_t s = 0; s < 8; ++s) {
      const auto v = random_potential(f, 64, 0xde70 + s);
      for (double e = -4.0; e <= 4.0; e += 0.5) {
        TransferMatrix product;
        for (std::size_t n = 0; n < v.size(); ++n) {
          product = step_matrix(e, v[n]) * product;
          const double defect = std::abs(product.det() - 1.0);
          worst_det = std::max(worst_det, defect / double(n + 1));
          worst_relative = std::max(worst_relative, defect / std::pow(product.norm(), 2));
        }
      }
    }
  }
  out.detail << "max |det-1|/n = " << fmt(worst_det, 3) << " (max |det-1|/|A|^2 = "
             << fmt(worst_relative, 3) << "); ";
  out.require(worst_det < 1e-9, "det", "determinant defect " + fmt(worst_det, 3) + " per step");

  // Invariance of the stable section.
  DichotomyOptions dopts;
  dopts.threads = o.threads;
  const std::vector<std::pair<SamplingFunction, double>> hyperbolic{
      {SamplingFunction::constant(0.0), 3.0},
      {SamplingFunction::cosine(0.5), 3.5},
      {SamplingFunction::cosine(0.5), -3.0},
      {SamplingFunction::bernoulli(5.0), 2.5}};
  double worst_residual = 0.0;
  for (const auto& [f, e] : hyperbolic) {
    const auto report = dichotomy_test(f, e, dopts);
    out.require(report.is_hyperbolic, "invariance", "E=" + fmt(e) + " not hyperbolic: " + report.reason);
    worst_residual = std::max(worst_residual, report.max_invariance_residual);
  }
  out.detail << "invariance residual " << fmt(worst_residual, 3) << "; ";
  out.require(worst_residual < 1e-6, "invariance", "invariance residual " + fmt(worst_residual, 3));

  // Forward quantities ignore the backward digits.
  bool identical = true;
  for (const auto& [f, e] : hyperbolic) {
    for (const Anchor& anchor : {Anchor{CirclePoint(1, 7)}, Anchor{0.3141592653589793}}) {
      const auto d1 = BackwardDigits::random(11, 40);
      const auto d2 = BackwardDigits::random(12, 40);
      const auto p1 = potential(f, anchor, -40, 119, &d1, 7);
      const auto p2 = potential(f, anchor, -40, 119, &d2, 7);
      const auto c1 = most_contracted_direction(p1, e, 120);
      const auto c2 = most_contracted_direction(p2, e, 120);
      identical = identical && c1.direction.angle() == c2.direction.angle();
    }
  }
  out.detail << "backward-digit independence " << (identical ? "exact" : "violated") << "; ";
  out.require(identical, "backward_digits", "most contracted direction depends on backward digits");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  void (*body)(Outcome&, const Options&);
};

constexpr Criterion kCriteria[] = {
    {1, "fixed-point spectrum", 1.0, fixed_point_spectrum},
    {2, "fixed-point band containment", 30.0, containment},
    {3, "Bernoulli two-band spectrum and gap label", 120.0, bernoulli_counterexample},
    {4, "cosine gap shrinkage", 300.0, gap_shrinkage},
    {5, "free IDS oracle", 60.0, free_ids},
    {6, "gap labelling identity", 120.0, gap_labelling},
    {7, "Bernoulli non-integer rotation", 60.0, bernoulli_rotation},
    {8, "structural oracles", 60.0, structural},
};

}  // namespace

std::vector<CheckResult> run(const Options& options) {
  std::vector<CheckResult> results;
  for (const Criterion& c : kCriteria) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(outcome, options);
    } catch (const std::exception& e) {
      outcome.require(false, "exception", std::string("exception: ") + e.what());
    }
    CheckResult r;
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.limit_seconds = c.limit_seconds;
    if (r.seconds >= c.limit_seconds) {
      outcome.require(false, "runtime", "runtime " + fmt(r.seconds, 3) + " s over limit");
    }
    r.passed = outcome.passed;
    for (const auto& key : outcome.failed) r.failed_checks.push_back(std::to_string(c.id) + "." + key);
    r.detail = outcome.detail.str();
    if (!r.detail.empty()) r.detail.erase(r.detail.size() - 2);
    if (options.on_result) options.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_line(const CheckResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name +
         " (" + fmt(r.seconds, 3) + " s / " + fmt(r.limit_seconds, 3) + " s): " + r.detail;
}

nlohmann::json to_json(const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    checks.push_back({{"id", r.id},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"seconds", r.seconds},
                      {"limit_seconds", r.limit_seconds},
                      {"failed_checks", r.failed_checks},
                      {"detail", r.detail}});
  }
  return {{"all_passed", all}, {"checks", checks}};
}

}  // namespace dmspec::acceptance
