#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmspec/dynamics.hpp"
#include "dmspec/sampling.hpp"

namespace dmspec {

/// 2x2 real matrix; every Schrödinger transfer matrix and product is unimodular.
struct TransferMatrix {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static TransferMatrix identity() { return {}; }
  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  /// Operator 2-norm (largest singular value).
  double norm() const;
  double max_abs() const;
  TransferMatrix scaled(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
};

/// A line through the origin, span{(cos θ, sin θ)} with θ in [0, π).
class Direction {
 public:
  Direction() = default;
  explicit Direction(double angle);
  static Direction from_vector(double x, double y);

  double angle() const { return angle_; }
  /// v₂/v₁ of a spanning vector (infinite for the vertical line).
  double slope() const;

 private:
  double angle_ = 0.0;
};

/// min(|θ−θ'|, π−|θ−θ'|)
double projective_distance(const Direction& a, const Direction& b);
Direction apply(const TransferMatrix& m, const Direction& d);

/// [[E − v, −1], [1, 0]]
TransferMatrix step_matrix(double energy, double v);

/// A(V[n−1])···A(V[1])A(V[0]) for n = potential.size().
TransferMatrix cocycle_product(std::span<const double> potential, double energy);
/// A^n_{E−f}(ω) along the forward orbit of omega.
TransferMatrix cocycle_product(const SamplingFunction& f, double energy, const Anchor& omega,
                               std::size_t n, std::uint64_t continuation_seed = 0);

/// Trace of the monodromy over one period, starting at the canonical point.
double discriminant(const PeriodicOrbit& orbit, const SamplingFunction& f, double energy);
double discriminant(std::span<const double> periodic_potential, double energy);

/// Product kept as scale·normalized so that long products cannot overflow.
struct LogProduct {
  TransferMatrix normalized;
  double log_scale = 0.0;

  double log_norm() const;
};

LogProduct log_cocycle_product(std::span<const double> potential, double energy);

struct ContractedDirection {
  Direction direction;
  /// Projective distance to the answer at half the depth below tolerance.
  bool converged = false;
  double half_depth_distance = 0.0;
  /// log of the larger singular value of the full-depth product.
  double log_norm = 0.0;
  std::size_t depth = 0;
};

/// Right singular direction of the small singular value of the product over
/// the whole window (depth = potential.size() >= 2). Throws
/// DegenerateSingularValues when the singular values differ by less than 1e−9.
ContractedDirection most_contracted_direction(std::span<const double> potential, double energy,
                                              double tolerance = 1e-8);
ContractedDirection most_contracted_direction(const SamplingFunction& f, double energy,
                                              const Anchor& omega, std::size_t depth,
                                              double tolerance = 1e-8,
                                              std::uint64_t continuation_seed = 0);
/// Reads only the n >= 0 part of a (possibly two-sided) potential.
ContractedDirection most_contracted_direction(const Potential& potential, double energy,
                                              std::size_t depth, double tolerance = 1e-8);

struct DichotomyOptions {
  std::size_t sample_count = 200;
  std::size_t depth = 60;
  /// Unconverged samples are retried at 2·depth, 4·depth, ... up to this multiple.
  std::size_t max_depth_factor = 8;
  double convergence_tolerance = 1e-8;
  double invariance_tolerance = 1e-6;
  double rate_floor = 1e-3;
  /// Points of every periodic orbit up to this period are sampled as well; 0 disables.
  int probe_period = 6;
  std::uint64_t seed = 0x5eed0001;
  int threads = 1;
};

struct DichotomyReport {
  bool is_hyperbolic = false;
  /// min over samples of the norm growth slope between depth/2 and depth.
  double growth_rate = 0.0;
  /// max over samples and n <= depth of e^{c n} / ‖A^n(ω)‖.
  double prefactor = 0.0;
  std::vector<std::pair<double, Direction>> stable_direction_at;
  std::size_t samples = 0;
  std::size_t converged_samples = 0;
  std::size_t depth_used = 0;
  double max_invariance_residual = 0.0;
  /// min over samples of (1/depth)·log‖A^depth‖
  double min_norm_rate = 0.0;
  std::string reason;
};

/// Samples Lebesgue-random ω (plus periodic probe points) and declares the
/// cocycle uniformly hyperbolic iff every sample's contracted direction
/// converges, the direction field is invariant (A(ω)Λ(ω) = Λ(Tω)) and the
/// norm grows at least at rate_floor.
DichotomyReport dichotomy_test(const SamplingFunction& f, double energy,
                               const DichotomyOptions& options = {});

/// C^∞ transition, 0 for u <= 0 and 1 for u >= 1.
double smooth_transition(double u);

/// Homotopy from the identity (t = 0) through rotation by π/2 (t = 1/2) to
/// step_matrix(E, v) (t = 1). Throws InvalidParameter for t outside [0, 1].
TransferMatrix interpolated_step(double energy, double v, double t);

}  // namespace dmspec
