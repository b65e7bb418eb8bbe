#pragma once

// Exact arithmetic for the m-fold expanding circle map ω ↦ mω (mod 1),
// periodic-orbit enumeration, and the backward (solenoid) extension of orbits.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dmspec {

using Wide = unsigned __int128;

std::string to_string(Wide value);

/// Largest period p for which m^p - 1 and every numerator times m fit in 127 bits.
int max_safe_period(int base);

/// Exact rational point of the circle, numerator/denominator in lowest terms,
/// value in [0, 1).
class CirclePoint {
 public:
  CirclePoint() = default;
  /// Reduces mod 1 and to lowest terms. Throws InvalidParameter for a zero denominator.
  CirclePoint(Wide numerator, Wide denominator);

  Wide numerator() const { return numerator_; }
  Wide denominator() const { return denominator_; }
  double value() const;
  std::string to_string() const;

  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
  friend std::strong_ordering operator<=>(const CirclePoint& a, const CirclePoint& b);

 private:
  Wide numerator_ = 0;
  Wide denominator_ = 1;
};

/// A point of the circle either as an exact rational or as a float in [0, 1).
using Anchor = std::variant<CirclePoint, double>;

double anchor_value(const Anchor& anchor);

/// T^steps(point) in exact arithmetic.
CirclePoint map_forward(const CirclePoint& point, std::uint64_t steps, int base = 2);
/// T^steps(omega) by repeated frac(m·ω). Exact for m = 2 but runs out of
/// mantissa after ~53 steps; see orbit_points() for long orbits.
double map_forward(double omega, std::uint64_t steps, int base = 2);

struct PeriodicOrbit {
  int period = 1;
  int map_base = 2;
  /// Starts at the canonical (smallest) point; points[i+1] = T(points[i]).
  std::vector<CirclePoint> points;

  /// m^period - 1; every point is k / common_denominator().
  Wide common_denominator() const;
  std::string label() const;
};

/// All periodic orbits of minimal period <= max_period, ordered by period and
/// then by canonical point. Throws CapacityExceeded past max_safe_period().
std::vector<PeriodicOrbit> enumerate_orbits(int max_period, int base = 2);

/// Preimage choices ω_{-n} = (ω_{-n+1} + digit(n)) / m for n = 1, 2, ...
/// Together with a circle point this stands in for a point of the solenoid.
class BackwardDigits {
 public:
  explicit BackwardDigits(std::vector<int> digits, int base = 2);
  /// i.i.d. uniform digits from a seeded stream (the fair-coin fiber measure).
  static BackwardDigits random(std::uint64_t seed, std::size_t count, int base = 2);

  int digit(std::size_t n) const;
  std::size_t size() const { return digits_.size(); }
  int base() const { return base_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

 private:
  std::vector<int> digits_;
  int base_ = 2;
  std::optional<std::uint64_t> seed_;
};

CirclePoint extend_backward(const CirclePoint& anchor, const BackwardDigits& digits, std::size_t n);
double extend_backward(double anchor, const BackwardDigits& digits, std::size_t n);

/// A point (ω, x, y) of the solid torus 𝕋 × D².
template <class Circle>
struct SolenoidPoint {
  Circle omega{};
  double x = 0.0;
  double y = 0.0;
};

/// One application of (ω,x,y) ↦ (mω, λx + cos(2πω)/2, λy + sin(2πω)/2).
/// Throws InvalidParameter unless 0 < contraction < 1/2 and (x,y) is in the unit disk.
SolenoidPoint<double> solenoid_forward(const SolenoidPoint<double>& point, double contraction,
                                       int base = 2);
SolenoidPoint<CirclePoint> solenoid_forward(const SolenoidPoint<CirclePoint>& point,
                                            double contraction, int base = 2);

// ---------------------------------------------------------------------------
// Long forward orbits through base-m digit expansions.
//
// If ω = Σ d_i m^{-i} then T^n ω = Σ d_{n+i} m^{-i}: the map is a shift of the
// digit string. A float point is evaluated from the next orbit_window_digits()
// digits, so an orbit of any length stays exact as long as digits are supplied.

/// Number of base-m digits that determine a double to full precision.
std::size_t orbit_window_digits(int base);

/// Uniform random digits; the resulting point is Lebesgue distributed.
std::vector<int> random_digits(std::uint64_t seed, std::size_t count, int base = 2);

/// Digits of omega for as long as the double carries information, continued by
/// seeded random digits.
std::vector<int> expand_digits(double omega, std::size_t count, int base,
                               std::uint64_t continuation_seed);

/// T^n ω for n in [0, count) from the digit string of ω. Needs
/// digits.size() >= count - 1 + orbit_window_digits(base).
std::vector<double> digit_orbit(std::span<const int> digits, int base, std::size_t count);

/// T^n ω for n in [0, count): exact rational iteration for CirclePoint anchors,
/// digit expansion (with seeded continuation) for float anchors.
std::vector<double> orbit_points(const Anchor& anchor, std::size_t count, int base = 2,
                                 std::uint64_t continuation_seed = 0);

}  // namespace dmspec
