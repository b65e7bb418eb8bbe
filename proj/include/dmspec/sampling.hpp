#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmspec/dynamics.hpp"

namespace dmspec {

/// constant + Σ_k cos_coeffs[k]·cos(2π(k+1)ω) + sin_coeffs[k]·sin(2π(k+1)ω)
struct TrigPoly {
  double constant = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// Right-continuous step function: values[i] on [breakpoints[i], breakpoints[i+1]).
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// The function f on the circle that generates the potentials V_ω(n) = f(T^n ω).
class SamplingFunction {
 public:
  using Representation = std::variant<TrigPoly, StepFunction>;

  SamplingFunction(TrigPoly poly);
  /// Throws InvalidParameter unless breakpoints start at 0, increase strictly,
  /// stay in [0,1) and match values in length.
  SamplingFunction(StepFunction step);

  static SamplingFunction constant(double c);
  /// 2λ·cos(2πω)
  static SamplingFunction cosine(double coupling);
  /// λ·χ_[0,1/2)(ω)
  static SamplingFunction bernoulli(double coupling);

  /// Evaluates at ω mod 1.
  double operator()(double omega) const;
  /// Upper bound for sup|f|: exact for step functions, coefficient sum for polynomials.
  double sup_norm() const;
  bool is_continuous() const { return std::holds_alternative<TrigPoly>(rep_); }
  const Representation& representation() const { return rep_; }

  /// {"type":"trigpoly","const":c,"cos":[...],"sin":[...]} or
  /// {"type":"step","breaks":[...],"values":[...]}
  nlohmann::json to_json() const;
  static SamplingFunction from_json(const nlohmann::json& j);

 private:
  Representation rep_;
};

double eval(const SamplingFunction& f, double omega);

enum class Provenance { ForwardOnly, TwoSided };

/// Finite window of V_ω(n) = f(T^n ω) for n in [n_min, n_max].
struct Potential {
  std::int64_t n_min = 0;
  std::vector<double> values;
  Anchor origin = 0.0;
  Provenance provenance = Provenance::ForwardOnly;
  std::optional<std::uint64_t> digit_seed;

  std::int64_t n_max() const { return n_min + static_cast<std::int64_t>(values.size()) - 1; }
  double at(std::int64_t n) const;
  /// The n >= 0 part, which depends only on ω.
  std::span<const double> forward() const;
};

/// Forward values come from T^n ω (exact for rational anchors; float anchors
/// continue with seeded digits once their precision runs out); negative n use
/// extend_backward with the given digits. Throws MissingDigits when n_min < 0
/// and no digits (or too few) are supplied.
Potential potential(const SamplingFunction& f, const Anchor& omega, std::int64_t n_min,
                    std::int64_t n_max, const BackwardDigits* digits = nullptr,
                    std::uint64_t continuation_seed = 0);

/// f sampled along a Lebesgue-random forward orbit: values[n] = f(T^n ω) for
/// n in [0, length), ω drawn from the seed's digit stream.
std::vector<double> random_potential(const SamplingFunction& f, std::size_t length,
                                     std::uint64_t seed, int base = 2);

/// One period of f along a periodic orbit, starting at its canonical point.
std::vector<double> orbit_potential(const PeriodicOrbit& orbit, const SamplingFunction& f);

}  // namespace dmspec
