#include "dmspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <utility>

#include "dmspec/errors.hpp"

namespace dmspec {

namespace {

constexpr Wide kCapacity = Wide{1} << 127;

Wide gcd(Wide a, Wide b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

void check_base(int base) {
  if (base < 2) throw InvalidParameter("map base must be >= 2, got " + std::to_string(base));
}

// Multiplying a numerator below `denominator` by m must stay below 2^127.
void check_capacity(Wide denominator, int base) {
  if (denominator > kCapacity / static_cast<Wide>(base)) {
    throw CapacityExceeded("denominator " + to_string(denominator) +
                           " too large for exact arithmetic with base " + std::to_string(base) +
                           " (max safe period " + std::to_string(max_safe_period(base)) + ")");
  }
}

std::strong_ordering compare_fractions(Wide a, Wide b, Wide c, Wide d) {
  // Continued-fraction comparison of a/b against c/d without 256-bit products.
  bool flipped = false;
  auto order = [&](std::strong_ordering o) {
    if (!flipped) return o;
    if (o == std::strong_ordering::less) return std::strong_ordering::greater;
    if (o == std::strong_ordering::greater) return std::strong_ordering::less;
    return o;
  };
  for (;;) {
    const Wide qa = a / b;
    const Wide qc = c / d;
    if (qa != qc) return order(qa < qc ? std::strong_ordering::less : std::strong_ordering::greater);
    a %= b;
    c %= d;
    if (a == 0 && c == 0) return std::strong_ordering::equal;
    if (a == 0) return order(std::strong_ordering::less);
    if (c == 0) return order(std::strong_ordering::greater);
    // a/b < c/d  <=>  b/a > d/c
    std::tie(a, b, c, d) = std::make_tuple(b, a, d, c);
    flipped = !flipped;
  }
}

double wrap_unit(double omega) {
  double w = omega - std::floor(omega);
  return w >= 1.0 ? 0.0 : w;
}

}  // namespace

std::string to_string(Wide value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

int max_safe_period(int base) {
  check_base(base);
  const Wide m = static_cast<Wide>(base);
  Wide power = m;  // m^(p+1)
  int p = 0;
  while (power <= kCapacity / m) {
    power *= m;
    ++p;
  }
  return p;
}

CirclePoint::CirclePoint(Wide numerator, Wide denominator) {
  if (denominator == 0) throw InvalidParameter("circle point with zero denominator");
  numerator %= denominator;
  const Wide g = numerator == 0 ? denominator : gcd(numerator, denominator);
  numerator_ = numerator / g;
  denominator_ = denominator / g;
}

double CirclePoint::value() const {
  return static_cast<double>(static_cast<long double>(numerator_) /
                             static_cast<long double>(denominator_));
}

std::string CirclePoint::to_string() const {
  return dmspec::to_string(numerator_) + "/" + dmspec::to_string(denominator_);
}

std::strong_ordering operator<=>(const CirclePoint& a, const CirclePoint& b) {
  return compare_fractions(a.numerator_, a.denominator_, b.numerator_, b.denominator_);
}

double anchor_value(const Anchor& anchor) {
  if (const auto* p = std::get_if<CirclePoint>(&anchor)) return p->value();
  return wrap_unit(std::get<double>(anchor));
}

CirclePoint map_forward(const CirclePoint& point, std::uint64_t steps, int base) {
  check_base(base);
  check_capacity(point.denominator(), base);
  const Wide m = static_cast<Wide>(base);
  const Wide den = point.denominator();
  Wide num = point.numerator();
  for (std::uint64_t s = 0; s < steps && num != 0; ++s) num = (num * m) % den;
  return CirclePoint(num, den);
}

double map_forward(double omega, std::uint64_t steps, int base) {
  check_base(base);
  double w = wrap_unit(omega);
  for (std::uint64_t s = 0; s < steps; ++s) w = wrap_unit(base * w);
  return w;
}

Wide PeriodicOrbit::common_denominator() const {
  Wide d = 1;
  for (int i = 0; i < period; ++i) d *= static_cast<Wide>(map_base);
  return d - 1;
}

std::string PeriodicOrbit::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ",";
    out += points[i].to_string();
  }
  return out + "}";
}

std::vector<PeriodicOrbit> enumerate_orbits(int max_period, int base) {
  check_base(base);
  if (max_period < 1) throw InvalidParameter("max_period must be >= 1");
  const int safe = max_safe_period(base);
  if (max_period > safe) {
    throw CapacityExceeded("period " + std::to_string(max_period) + " exceeds the max safe period " +
                           std::to_string(safe) + " for base " + std::to_string(base));
  }
  const Wide m = static_cast<Wide>(base);
  std::vector<PeriodicOrbit> orbits;
  Wide power = 1;
  std::vector<Wide> cycle;
  for (int p = 1; p <= max_period; ++p) {
    power *= m;
    const Wide den = power - 1;
    for (Wide k = 0; k < den; ++k) {
      // Walk the cycle of k; reject as soon as a smaller member shows up.
      cycle.assign(1, k);
      Wide x = (k * m) % den;
      bool canonical = true;
      while (x != k) {
        if (x < k || static_cast<int>(cycle.size()) >= p) {
          canonical = false;
          break;
        }
        cycle.push_back(x);
        x = (x * m) % den;
      }
      if (!canonical || static_cast<int>(cycle.size()) != p) continue;
      PeriodicOrbit orbit;
      orbit.period = p;
      orbit.map_base = base;
      orbit.points.reserve(cycle.size());
      for (Wide c : cycle) orbit.points.emplace_back(c, den);
      orbits.push_back(std::move(orbit));
    }
  }
  return orbits;
}

BackwardDigits::BackwardDigits(std::vector<int> digits, int base)
    : digits_(std::move(digits)), base_(base) {
  check_base(base);
  for (int d : digits_) {
    if (d < 0 || d >= base) {
      throw InvalidParameter("backward digit " + std::to_string(d) + " outside {0,...," +
                             std::to_string(base - 1) + "}");
    }
  }
}

BackwardDigits BackwardDigits::random(std::uint64_t seed, std::size_t count, int base) {
  BackwardDigits out(random_digits(seed, count, base), base);
  out.seed_ = seed;
  return out;
}

int BackwardDigits::digit(std::size_t n) const {
  if (n < 1 || n > digits_.size()) {
    throw MissingDigits("backward digit " + std::to_string(n) + " requested but only " +
                        std::to_string(digits_.size()) + " supplied");
  }
  return digits_[n - 1];
}

CirclePoint extend_backward(const CirclePoint& anchor, const BackwardDigits& digits,
                            std::size_t n) {
  const Wide m = static_cast<Wide>(digits.base());
  CirclePoint current = anchor;
  for (std::size_t i = 1; i <= n; ++i) {
    check_capacity(current.denominator(), digits.base());
    const Wide den = current.denominator();
    current = CirclePoint(current.numerator() + static_cast<Wide>(digits.digit(i)) * den, den * m);
  }
  return current;
}

double extend_backward(double anchor, const BackwardDigits& digits, std::size_t n) {
  double current = wrap_unit(anchor);
  for (std::size_t i = 1; i <= n; ++i) current = (current + digits.digit(i)) / digits.base();
  return current;
}

namespace {

void check_solenoid_args(double x, double y, double contraction) {
  if (!(contraction > 0.0 && contraction < 0.5)) {
    throw InvalidParameter("solenoid contraction must lie in (0, 1/2), got " +
                           std::to_string(contraction));
  }
  if (x * x + y * y > 1.0 + 1e-12) throw InvalidParameter("fiber point outside the unit disk");
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

SolenoidPoint<double> solenoid_forward(const SolenoidPoint<double>& point, double contraction,
                                       int base) {
  check_solenoid_args(point.x, point.y, contraction);
  const double w = wrap_unit(point.omega);
  return {map_forward(w, 1, base), contraction * point.x + 0.5 * std::cos(kTwoPi * w),
          contraction * point.y + 0.5 * std::sin(kTwoPi * w)};
}

SolenoidPoint<CirclePoint> solenoid_forward(const SolenoidPoint<CirclePoint>& point,
                                            double contraction, int base) {
  check_solenoid_args(point.x, point.y, contraction);
  const double w = point.omega.value();
  return {map_forward(point.omega, 1, base), contraction * point.x + 0.5 * std::cos(kTwoPi * w),
          contraction * point.y + 0.5 * std::sin(kTwoPi * w)};
}

std::size_t orbit_window_digits(int base) {
  check_base(base);
  if (base == 2) return 53;
  return static_cast<std::size_t>(std::ceil(53.0 * std::log(2.0) / std::log(double(base))));
}

std::vector<int> random_digits(std::uint64_t seed, std::size_t count, int base) {
  check_base(base);
  std::mt19937_64 engine(seed);
  std::vector<int> digits(count);
  const auto m = static_cast<std::uint64_t>(base);
  for (auto& d : digits) d = static_cast<int>(engine() % m);
  return digits;
}

std::vector<int> expand_digits(double omega, std::size_t count, int base,
                               std::uint64_t continuation_seed) {
  check_base(base);
  double x = wrap_unit(omega);
  // Leading zero digits plus one window of significant digits come from omega.
  std::size_t from_anchor = orbit_window_digits(base);
  if (x > 0.0) {
    const auto leading = static_cast<std::size_t>(
        std::max(0.0, std::floor(-std::log(x) / std::log(double(base)))));
    from_anchor += std::min<std::size_t>(leading, 1100);
  }
  std::vector<int> digits;
  digits.reserve(count);
  for (std::size_t i = 0; i < std::min(count, from_anchor); ++i) {
    x *= base;
    const double d = std::floor(x);
    x -= d;
    digits.push_back(std::clamp(static_cast<int>(d), 0, base - 1));
  }
  if (digits.size() < count) {
    auto tail = random_digits(continuation_seed, count - digits.size(), base);
    digits.insert(digits.end(), tail.begin(), tail.end());
  }
  return digits;
}

std::vector<double> digit_orbit(std::span<const int> digits, int base, std::size_t count) {
  const std::size_t window = orbit_window_digits(base);
  if (count == 0) return {};
  if (digits.size() < count - 1 + window) {
    throw MissingDigits("digit orbit of length " + std::to_string(count) + " needs " +
                        std::to_string(count - 1 + window) + " digits, got " +
                        std::to_string(digits.size()));
  }
  const double below_one = std::nextafter(1.0, 0.0);
  std::vector<double> points(count);
  for (std::size_t n = 0; n < count; ++n) {
    double x = 0.0;
    for (std::size_t j = window; j-- > 0;) x = (x + digits[n + j]) / base;
    points[n] = std::min(x, below_one);
  }
  return points;
}

std::vector<double> orbit_points(const Anchor& anchor, std::size_t count, int base,
                                 std::uint64_t continuation_seed) {
  check_base(base);
  if (const auto* p = std::get_if<CirclePoint>(&anchor)) {
    check_capacity(p->denominator(), base);
    const Wide m = static_cast<Wide>(base);
    const Wide den = p->denominator();
    Wide num = p->numerator();
    std::vector<double> points(count);
    for (std::size_t n = 0; n < count; ++n) {
      points[n] = CirclePoint(num, den).value();
      num = (num * m) % den;
    }
    return points;
  }
  if (count == 0) return {};
  const auto digits = expand_digits(std::get<double>(anchor), count - 1 + orbit_window_digits(base),
                                    base, continuation_seed);
  return digit_orbit(digits, base, count);
}

}  // namespace dmspec
