#include "dmspec/schwartzman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "dmspec/errors.hpp"
#include "dmspec/parallel.hpp"

namespace dmspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMidpointAgreement = 1e-9;

double vector_angle(const TransferMatrix& m, double x, double y) {
  return std::atan2(m.a21 * x + m.a22 * y, m.a11 * x + m.a12 * y);
}

// Difference of two line arguments, represented in (−π/2, π/2].
double line_increment(double from, double to) {
  double d = std::remainder(to - from, kPi);
  if (d <= -0.5 * kPi) d += kPi;
  return d;
}

Direction stable_direction(std::span<const double> forward, double energy,
                           const DichotomyOptions& options, std::size_t depth,
                           std::size_t max_depth) {
  ContractedDirection best;
  bool have = false;
  for (std::size_t d = depth; d <= max_depth && d <= forward.size(); d *= 2) {
    try {
      best = most_contracted_direction(forward.first(d), energy, options.convergence_tolerance);
      have = true;
    } catch (const DegenerateSingularValues&) {
      continue;
    }
    if (best.converged) break;
  }
  if (!have) {
    throw NotHyperbolic("no contracted direction along the orbit up to depth " +
                        std::to_string(max_depth));
  }
  return best.direction;
}

}  // namespace

WindingStep argument_winding_step(double energy, double v, const Direction& dir_in,
                                  int substeps) {
  if (substeps < 8) throw InvalidParameter("argument tracking needs substeps >= 8");
  const double x = std::cos(dir_in.angle());
  const double y = std::sin(dir_in.angle());
  auto angle_at = [&](int twice_index) {
    const double t = std::min(1.0, double(twice_index) / (2.0 * substeps));
    return vector_angle(interpolated_step(energy, v, t), x, y);
  };

  double total = 0.0;
  double previous = angle_at(0);
  for (int i = 1; i <= substeps; ++i) {
    const double middle = angle_at(2 * i - 1);
    const double current = angle_at(2 * i);
    const double whole = line_increment(previous, current);
    const double first = line_increment(previous, middle);
    const double second = line_increment(middle, current);
    // Within a substep the line turns monotonically, so halves of opposite sign
    // mean one of them wrapped.
    const bool opposite = std::abs(first) > kMidpointAgreement &&
                          std::abs(second) > kMidpointAgreement && (first > 0.0) != (second > 0.0);
    if (std::abs(whole) >= 0.5 * kPi || opposite ||
        std::abs(whole - (first + second)) > kMidpointAgreement) {
      throw LiftingAmbiguity("argument increment " + std::to_string(whole) + " at substep " +
                             std::to_string(i) + " of " + std::to_string(substeps) +
                             " (E = " + std::to_string(energy) + ", v = " + std::to_string(v) +
                             "); raise substeps");
    }
    total += whole;
    previous = current;
  }
  return {Direction(previous), total};
}

RotationEstimate rotation_number(const SamplingFunction& f, double energy,
                                 const RotationOptions& options) {
  if (options.omega_samples < 1 || options.steps < 1 || options.reanchor_interval < 1) {
    throw InvalidParameter("rotation_number needs omega_samples, steps, reanchor_interval >= 1");
  }
  const DichotomyReport report = dichotomy_test(f, energy, options.dichotomy);
  if (!report.is_hyperbolic) {
    throw NotHyperbolic("E = " + std::to_string(energy) + " failed the dichotomy test: " +
                        report.reason);
  }
  const std::size_t depth = report.depth_used;
  const std::size_t max_depth =
      options.dichotomy.depth * std::max<std::size_t>(1, options.dichotomy.max_depth_factor);
  const std::size_t reach = std::max(depth, max_depth);
  const std::size_t orbit_length = options.steps + reach + 1;

  struct Track {
    double value = 0.0;
    double residual = 0.0;
    double sum = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
  };
  std::vector<Track> tracks(options.omega_samples);
  parallel_for(options.omega_samples, options.threads, [&](std::size_t s) {
    const auto v = random_potential(f, orbit_length, split_seed(options.seed, s));
    const std::span<const double> values(v);
    Track& track = tracks[s];
    Direction dir = stable_direction(values, energy, options.dichotomy, depth, max_depth);
    for (std::size_t n = 0; n < options.steps; ++n) {
      const WindingStep step = argument_winding_step(energy, values[n], dir, options.substeps);
      track.sum += step.delta_arg;
      track.min = std::min(track.min, step.delta_arg);
      track.max = std::max(track.max, step.delta_arg);
      if ((n + 1) % options.reanchor_interval == 0) {
        const Direction fresh =
            stable_direction(values.subspan(n + 1), energy, options.dichotomy, depth, max_depth);
        track.residual = std::max(track.residual, projective_distance(step.out, fresh));
        dir = fresh;
      } else {
        dir = step.out;
      }
    }
    track.value = track.sum / (kPi * double(options.steps));
  });

  RotationEstimate out;
  out.steps_used = options.steps;
  out.omega_samples = options.omega_samples;
  out.per_step_args.min = std::numeric_limits<double>::infinity();
  out.per_step_args.max = -std::numeric_limits<double>::infinity();
  double arg_sum = 0.0;
  for (const Track& t : tracks) {
    out.per_sample.push_back(t.value);
    out.value += t.value;
    arg_sum += t.sum;
    out.per_step_args.min = std::min(out.per_step_args.min, t.min);
    out.per_step_args.max = std::max(out.per_step_args.max, t.max);
    out.max_reanchor_residual = std::max(out.max_reanchor_residual, t.residual);
  }
  const double m = double(options.omega_samples);
  out.value /= m;
  out.per_step_args.mean = arg_sum / (m * double(options.steps));
  if (options.omega_samples > 1) {
    double ss = 0.0;
    for (double x : out.per_sample) ss += (x - out.value) * (x - out.value);
    out.std_error = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return out;
}

std::string IntegralityVerdict::to_string() const {
  switch (kind) {
    case Kind::Integer:
      return "Integer(" + std::to_string(integer) + ")";
    case Kind::NonInteger:
      return "NonInteger";
    case Kind::Inconclusive:
      break;
  }
  return "Inconclusive";
}

IntegralityVerdict integrality_check(const RotationEstimate& estimate, double tol) {
  IntegralityVerdict verdict;
  const double nearest = std::round(estimate.value);
  verdict.integer = static_cast<long long>(nearest);
  const double distance = std::abs(estimate.value - nearest);
  if (distance < tol && estimate.std_error < tol) {
    verdict.kind = IntegralityVerdict::Kind::Integer;
  } else if (distance > 3.0 * std::max(tol, estimate.std_error)) {
    verdict.kind = IntegralityVerdict::Kind::NonInteger;
  } else {
    verdict.kind = IntegralityVerdict::Kind::Inconclusive;
  }
  return verdict;
}

}  // namespace dmspec
