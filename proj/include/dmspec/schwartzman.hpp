#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dmspec/cocycle.hpp"
#include "dmspec/sampling.hpp"

namespace dmspec {

struct WindingStep {
  Direction out;
  double delta_arg = 0.0;
};

/// Follows the line interpolated_step(E, v, t)·dir_in for t on a uniform grid of
/// `substeps` intervals and sums the lifted argument increments, each taken in
/// (−π/2, π/2]. Throws LiftingAmbiguity if an increment reaches π/2 or a
/// half-substep check disagrees, InvalidParameter if substeps < 8. The check
/// is reliable while |E − v| stays well below substeps.
WindingStep argument_winding_step(double energy, double v, const Direction& dir_in,
                                  int substeps = 64);

struct RotationOptions {
  std::size_t omega_samples = 32;
  std::size_t steps = 2000;
  int substeps = 64;
  /// The tracked direction is replaced by a freshly computed stable direction
  /// after this many steps. Must be >= 1.
  std::size_t reanchor_interval = 1;
  std::uint64_t seed = 0x5eed0002;
  DichotomyOptions dichotomy;
  int threads = 1;
};

struct ArgumentStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct RotationEstimate {
  double value = 0.0;
  /// Standard error of value across ω samples.
  double std_error = 0.0;
  ArgumentStats per_step_args;
  std::size_t steps_used = 0;
  std::size_t omega_samples = 0;
  /// Largest projective distance between a propagated and a recomputed stable direction.
  double max_reanchor_residual = 0.0;
  std::vector<double> per_sample;
};

/// Orbit average of the winding of the stable section through the interpolated
/// cocycle, in units of π per step. Throws NotHyperbolic if dichotomy_test fails.
RotationEstimate rotation_number(const SamplingFunction& f, double energy,
                                 const RotationOptions& options = {});

struct IntegralityVerdict {
  enum class Kind { Integer, NonInteger, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Nearest integer (meaningful for every kind).
  long long integer = 0;

  bool is_integer(long long n) const { return kind == Kind::Integer && integer == n; }
  std::string to_string() const;
};

/// Integer(n) if |value − n| < tol and std_error < tol; NonInteger if the
/// distance to the nearest integer exceeds 3·max(tol, std_error); otherwise
/// Inconclusive.
IntegralityVerdict integrality_check(const RotationEstimate& estimate, double tol = 0.01);

}  // namespace dmspec
