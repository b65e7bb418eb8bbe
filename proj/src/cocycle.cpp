#include "dmspec/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dmspec/errors.hpp"
#include "dmspec/parallel.hpp"

namespace dmspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRenormalizeAbove = 1e64;
constexpr double kDegenerateGap = 1e-9;

double reduce_angle(double angle) {
  double a = std::fmod(angle, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a = 0.0;
  return a;
}

struct SingularFrame {
  double sigma_max;
  double sigma_min;
  double contracted_angle;  // right singular direction of sigma_min
};

// Closed-form SVD of a 2x2 matrix: M = R(φ)·diag(Q+R, Q−R)·R(θ).
SingularFrame singular_frame(const TransferMatrix& m) {
  const double e = 0.5 * (m.a11 + m.a22);
  const double f = 0.5 * (m.a11 - m.a22);
  const double g = 0.5 * (m.a21 + m.a12);
  const double h = 0.5 * (m.a21 - m.a12);
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double theta = 0.5 * (std::atan2(h, e) - std::atan2(g, f));
  // V = R(−θ); its second column (sin θ, cos θ) is the contracted direction.
  return {q + r, std::abs(q - r), reduce_angle(0.5 * kPi - theta)};
}

}  // namespace

double TransferMatrix::norm() const { return singular_frame(*this).sigma_max; }

double TransferMatrix::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

Direction::Direction(double angle) : angle_(reduce_angle(angle)) {}

Direction Direction::from_vector(double x, double y) { return Direction(std::atan2(y, x)); }

double Direction::slope() const {
  const double c = std::cos(angle_);
  if (c == 0.0) return std::numeric_limits<double>::infinity();
  return std::sin(angle_) / c;
}

double projective_distance(const Direction& a, const Direction& b) {
  const double d = std::abs(a.angle() - b.angle());
  return std::min(d, kPi - d);
}

Direction apply(const TransferMatrix& m, const Direction& d) {
  const double x = std::cos(d.angle());
  const double y = std::sin(d.angle());
  return Direction::from_vector(m.a11 * x + m.a12 * y, m.a21 * x + m.a22 * y);
}

TransferMatrix step_matrix(double energy, double v) { return {energy - v, -1.0, 1.0, 0.0}; }

TransferMatrix cocycle_product(std::span<const double> potential, double energy) {
  TransferMatrix product;
  for (double v : potential) product = step_matrix(energy, v) * product;
  return product;
}

TransferMatrix cocycle_product(const SamplingFunction& f, double energy, const Anchor& omega,
                               std::size_t n, std::uint64_t continuation_seed) {
  const auto values = potential(f, omega, 0, static_cast<std::int64_t>(n) - 1, nullptr,
                                continuation_seed)
                          .values;
  return cocycle_product(values, energy);
}

double discriminant(std::span<const double> periodic_potential, double energy) {
  return cocycle_product(periodic_potential, energy).trace();
}

double discriminant(const PeriodicOrbit& orbit, const SamplingFunction& f, double energy) {
  return discriminant(orbit_potential(orbit, f), energy);
}

double LogProduct::log_norm() const { return log_scale + std::log(normalized.norm()); }

namespace {

void renormalize(LogProduct& p) {
  const double scale = p.normalized.max_abs();
  if (scale > kRenormalizeAbove) {
    p.normalized = p.normalized.scaled(1.0 / scale);
    p.log_scale += std::log(scale);
  }
}

}  // namespace

LogProduct log_cocycle_product(std::span<const double> potential, double energy) {
  LogProduct p;
  for (double v : potential) {
    p.normalized = step_matrix(energy, v) * p.normalized;
    renormalize(p);
  }
  return p;
}

namespace {

struct ContractionResult {
  Direction direction;
  bool degenerate = false;
  double log_norm = 0.0;
};

ContractionResult contracted(const LogProduct& p) {
  const SingularFrame frame = singular_frame(p.normalized);
  const double log_norm = p.log_scale + std::log(frame.sigma_max);
  // det = 1, so σ_min/σ_max = exp(−2·log σ_max).
  const double relative_gap = -std::expm1(-2.0 * log_norm);
  return {Direction(frame.contracted_angle), !(relative_gap >= kDegenerateGap), log_norm};
}

}  // namespace

ContractedDirection most_contracted_direction(std::span<const double> potential, double energy,
                                              double tolerance) {
  const std::size_t depth = potential.size();
  if (depth < 2) throw InvalidParameter("most_contracted_direction needs depth >= 2");
  const std::size_t half = depth / 2;
  LogProduct product;
  ContractionResult at_half;
  for (std::size_t i = 0; i < depth; ++i) {
    product.normalized = step_matrix(energy, potential[i]) * product.normalized;
    renormalize(product);
    if (i + 1 == half) at_half = contracted(product);
  }
  const ContractionResult full = contracted(product);
  if (full.degenerate) {
    throw DegenerateSingularValues("singular values of the depth-" + std::to_string(depth) +
                                   " product agree to 1e-9 at E = " + std::to_string(energy));
  }
  ContractedDirection out;
  out.direction = full.direction;
  out.depth = depth;
  out.log_norm = full.log_norm;
  out.half_depth_distance =
      at_half.degenerate ? kPi / 2 : projective_distance(full.direction, at_half.direction);
  out.converged = out.half_depth_distance < tolerance;
  return out;
}

ContractedDirection most_contracted_direction(const SamplingFunction& f, double energy,
                                              const Anchor& omega, std::size_t depth,
                                              double tolerance, std::uint64_t continuation_seed) {
  if (depth < 2) throw InvalidParameter("most_contracted_direction needs depth >= 2");
  const auto values = potential(f, omega, 0, static_cast<std::int64_t>(depth) - 1, nullptr,
                                continuation_seed)
                          .values;
  return most_contracted_direction(values, energy, tolerance);
}

ContractedDirection most_contracted_direction(const Potential& potential, double energy,
                                              std::size_t depth, double tolerance) {
  const auto forward = potential.forward();
  if (forward.size() < depth) {
    throw InvalidParameter("potential carries " + std::to_string(forward.size()) +
                           " forward values, depth " + std::to_string(depth) + " requested");
  }
  return most_contracted_direction(forward.first(depth), energy, tolerance);
}

namespace {

struct SampleOutcome {
  double omega = 0.0;
  bool converged = false;
  Direction direction;
  std::size_t depth = 0;
  double residual = 0.0;
  double norm_rate = 0.0;
  double slope = 0.0;
  std::vector<double> log_norms;  // log‖A^n‖ for n = 1..depth
};

SampleOutcome analyse_sample(std::span<const double> window, double omega, double energy,
                             const DichotomyOptions& options, std::size_t max_depth) {
  SampleOutcome out;
  out.omega = omega;
  for (std::size_t depth = options.depth; depth <= max_depth; depth *= 2) {
    out.depth = depth;
    ContractedDirection here;
    try {
      here = most_contracted_direction(window.first(depth), energy, options.convergence_tolerance);
    } catch (const DegenerateSingularValues&) {
      continue;
    }
    if (!here.converged) continue;
    ContractedDirection next;
    try {
      next = most_contracted_direction(window.subspan(1, depth), energy,
                                       options.convergence_tolerance);
    } catch (const DegenerateSingularValues&) {
      continue;
    }
    out.converged = true;
    out.direction = here.direction;
    out.residual = projective_distance(apply(step_matrix(energy, window[0]), here.direction),
                                       next.direction);
    break;
  }
  LogProduct product;
  out.log_norms.resize(out.depth);
  for (std::size_t n = 0; n < out.depth; ++n) {
    product.normalized = step_matrix(energy, window[n]) * product.normalized;
    renormalize(product);
    out.log_norms[n] = product.log_norm();
  }
  const std::size_t half = out.depth / 2;
  out.norm_rate = out.log_norms.back() / double(out.depth);
  out.slope = (out.log_norms.back() - out.log_norms[half - 1]) / double(out.depth - half);
  return out;
}

}  // namespace

DichotomyReport dichotomy_test(const SamplingFunction& f, double energy,
                               const DichotomyOptions& options) {
  if (options.sample_count < 1) throw InvalidParameter("dichotomy_test needs sample_count >= 1");
  if (options.depth < 8) throw InvalidParameter("dichotomy_test needs depth >= 8");
  const std::size_t max_depth = options.depth * std::max<std::size_t>(1, options.max_depth_factor);
  const std::size_t window_length = max_depth + 1;

  // Periodic probe points: every point of every orbit up to probe_period.
  std::vector<std::pair<double, std::vector<double>>> probes;
  if (options.probe_period > 0) {
    for (const auto& orbit : enumerate_orbits(options.probe_period)) {
      const auto period_values = orbit_potential(orbit, f);
      for (std::size_t start = 0; start < period_values.size(); ++start) {
        std::vector<double> window(window_length);
        for (std::size_t n = 0; n < window_length; ++n) {
          window[n] = period_values[(start + n) % period_values.size()];
        }
        probes.emplace_back(orbit.points[start].value(), std::move(window));
      }
    }
  }

  const std::size_t total = options.sample_count + probes.size();
  std::vector<SampleOutcome> outcomes(total);
  parallel_for(total, options.threads, [&](std::size_t i) {
    if (i < options.sample_count) {
      const std::uint64_t seed = split_seed(options.seed, i);
      const auto digits = random_digits(seed, window_length - 1 + orbit_window_digits(2));
      auto points = digit_orbit(digits, 2, window_length);
      const double omega = points[0];
      for (double& w : points) w = f(w);
      outcomes[i] = analyse_sample(points, omega, energy, options, max_depth);
    } else {
      const auto& probe = probes[i - options.sample_count];
      outcomes[i] = analyse_sample(probe.second, probe.first, energy, options, max_depth);
    }
  });

  DichotomyReport report;
  report.samples = total;
  report.growth_rate = std::numeric_limits<double>::infinity();
  report.min_norm_rate = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (o.converged) {
      ++report.converged_samples;
      report.stable_direction_at.emplace_back(o.omega, o.direction);
      report.max_invariance_residual = std::max(report.max_invariance_residual, o.residual);
    }
    report.depth_used = std::max(report.depth_used, o.depth);
    report.growth_rate = std::min(report.growth_rate, o.slope);
    report.min_norm_rate = std::min(report.min_norm_rate, o.norm_rate);
  }
  double log_prefactor = -std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    for (std::size_t n = 0; n < o.log_norms.size(); ++n) {
      log_prefactor = std::max(log_prefactor, report.growth_rate * double(n + 1) - o.log_norms[n]);
    }
  }
  report.prefactor = std::exp(log_prefactor);

  if (report.converged_samples < total) {
    report.reason = std::to_string(total - report.converged_samples) +
                    " samples without a converged contracted direction up to depth " +
                    std::to_string(max_depth);
  } else if (report.max_invariance_residual >= options.invariance_tolerance) {
    report.reason = "invariance residual " + std::to_string(report.max_invariance_residual) +
                    " exceeds tolerance";
  } else if (report.min_norm_rate < options.rate_floor) {
    report.reason = "norm growth rate " + std::to_string(report.min_norm_rate) +
                    " below floor " + std::to_string(options.rate_floor);
  } else {
    report.is_hyperbolic = true;
  }
  return report;
}

double smooth_transition(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double rise = std::exp(-1.0 / u);
  const double fall = std::exp(-1.0 / (1.0 - u));
  return rise / (rise + fall);
}

TransferMatrix interpolated_step(double energy, double v, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidParameter("interpolation time must lie in [0,1], got " + std::to_string(t));
  }
  if (t <= 0.5) {
    const double s = smooth_transition(2.0 * t);
    if (s == 0.0) return TransferMatrix::identity();
    if (s == 1.0) return {0.0, -1.0, 1.0, 0.0};
    const double theta = 0.5 * kPi * s;
    return {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
  }
  const double scale = smooth_transition(2.0 * t - 1.0);
  return {scale * (energy - v), -1.0, 1.0, 0.0};
}

}  // namespace dmspec
