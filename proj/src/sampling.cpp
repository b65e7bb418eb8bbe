#include "dmspec/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dmspec/errors.hpp"

namespace dmspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double omega) {
  double w = omega - std::floor(omega);
  return w >= 1.0 ? 0.0 : w;
}

struct Evaluator {
  double omega;

  double operator()(const TrigPoly& p) const {
    double sum = p.constant;
    for (std::size_t k = 0; k < p.cos_coeffs.size(); ++k) {
      sum += p.cos_coeffs[k] * std::cos(kTwoPi * double(k + 1) * omega);
    }
    for (std::size_t k = 0; k < p.sin_coeffs.size(); ++k) {
      sum += p.sin_coeffs[k] * std::sin(kTwoPi * double(k + 1) * omega);
    }
    return sum;
  }

  double operator()(const StepFunction& s) const {
    const auto it = std::upper_bound(s.breakpoints.begin(), s.breakpoints.end(), omega);
    return s.values[static_cast<std::size_t>(it - s.breakpoints.begin()) - 1];
  }
};

}  // namespace

SamplingFunction::SamplingFunction(TrigPoly poly) : rep_(std::move(poly)) {}

SamplingFunction::SamplingFunction(StepFunction step) {
  const auto& b = step.breakpoints;
  if (b.empty() || b.size() != step.values.size()) {
    throw InvalidParameter("step function needs as many values as breakpoints (at least one)");
  }
  if (b.front() != 0.0) throw InvalidParameter("step function must start at breakpoint 0");
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (!(b[i] > b[i - 1])) throw InvalidParameter("step breakpoints must increase strictly");
  }
  if (!(b.back() < 1.0)) throw InvalidParameter("step breakpoints must lie in [0,1)");
  rep_ = std::move(step);
}

SamplingFunction SamplingFunction::constant(double c) { return TrigPoly{c, {}, {}}; }

SamplingFunction SamplingFunction::cosine(double coupling) {
  return TrigPoly{0.0, {2.0 * coupling}, {}};
}

SamplingFunction SamplingFunction::bernoulli(double coupling) {
  return StepFunction{{0.0, 0.5}, {coupling, 0.0}};
}

double SamplingFunction::operator()(double omega) const {
  return std::visit(Evaluator{wrap_unit(omega)}, rep_);
}

double eval(const SamplingFunction& f, double omega) { return f(omega); }

double SamplingFunction::sup_norm() const {
  if (const auto* p = std::get_if<TrigPoly>(&rep_)) {
    double bound = std::abs(p->constant);
    for (double c : p->cos_coeffs) bound += std::abs(c);
    for (double s : p->sin_coeffs) bound += std::abs(s);
    return bound;
  }
  double bound = 0.0;
  for (double v : std::get<StepFunction>(rep_).values) bound = std::max(bound, std::abs(v));
  return bound;
}

nlohmann::json SamplingFunction::to_json() const {
  if (const auto* p = std::get_if<TrigPoly>(&rep_)) {
    return {{"type", "trigpoly"}, {"const", p->constant}, {"cos", p->cos_coeffs},
            {"sin", p->sin_coeffs}};
  }
  const auto& s = std::get<StepFunction>(rep_);
  return {{"type", "step"}, {"breaks", s.breakpoints}, {"values", s.values}};
}

SamplingFunction SamplingFunction::from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "trigpoly") {
      TrigPoly p;
      p.constant = j.value("const", 0.0);
      p.cos_coeffs = j.value("cos", std::vector<double>{});
      p.sin_coeffs = j.value("sin", std::vector<double>{});
      return p;
    }
    if (type == "step") {
      return StepFunction{j.at("breaks").get<std::vector<double>>(),
                          j.at("values").get<std::vector<double>>()};
    }
    throw InvalidParameter("unknown sampling function type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed sampling function: ") + e.what());
  }
}

double Potential::at(std::int64_t n) const {
  if (n < n_min || n > n_max()) {
    throw InvalidParameter("potential index " + std::to_string(n) + " outside [" +
                           std::to_string(n_min) + ", " + std::to_string(n_max()) + "]");
  }
  return values[static_cast<std::size_t>(n - n_min)];
}

std::span<const double> Potential::forward() const {
  if (n_max() < 0) return {};
  const auto skip = static_cast<std::size_t>(std::max<std::int64_t>(0, -n_min));
  return std::span<const double>(values).subspan(skip);
}

Potential potential(const SamplingFunction& f, const Anchor& omega, std::int64_t n_min,
                    std::int64_t n_max, const BackwardDigits* digits,
                    std::uint64_t continuation_seed) {
  if (n_min > 0 || n_max < 0) throw InvalidParameter("potential window must contain n = 0");
  const auto backward = static_cast<std::size_t>(-n_min);
  if (backward > 0) {
    if (digits == nullptr) {
      throw MissingDigits("negative indices require backward digits (n_min = " +
                          std::to_string(n_min) + ")");
    }
    if (digits->size() < backward) {
      throw MissingDigits("need " + std::to_string(backward) + " backward digits, got " +
                          std::to_string(digits->size()));
    }
  }
  const int base = digits ? digits->base() : 2;

  Potential out;
  out.n_min = n_min;
  out.origin = omega;
  out.provenance = backward > 0 ? Provenance::TwoSided : Provenance::ForwardOnly;
  if (backward > 0) out.digit_seed = digits->seed();
  out.values.resize(backward + static_cast<std::size_t>(n_max) + 1);

  // Backward chain ω_{-1}, ω_{-2}, ... built one preimage at a time.
  if (const auto* p = std::get_if<CirclePoint>(&omega)) {
    CirclePoint current = *p;
    for (std::size_t n = 1; n <= backward; ++n) {
      current = extend_backward(current, BackwardDigits({digits->digit(n)}, base), 1);
      out.values[backward - n] = f(current.value());
    }
  } else {
    double current = anchor_value(omega);
    for (std::size_t n = 1; n <= backward; ++n) {
      current = (current + digits->digit(n)) / base;
      out.values[backward - n] = f(current);
    }
  }

  const auto forward =
      orbit_points(omega, static_cast<std::size_t>(n_max) + 1, base, continuation_seed);
  for (std::size_t n = 0; n < forward.size(); ++n) out.values[backward + n] = f(forward[n]);
  return out;
}

std::vector<double> random_potential(const SamplingFunction& f, std::size_t length,
                                     std::uint64_t seed, int base) {
  if (length == 0) return {};
  const auto digits = random_digits(seed, length - 1 + orbit_window_digits(base), base);
  auto points = digit_orbit(digits, base, length);
  for (double& w : points) w = f(w);
  return points;
}

std::vector<double> orbit_potential(const PeriodicOrbit& orbit, const SamplingFunction& f) {
  std::vector<double> values;
  values.reserve(orbit.points.size());
  for (const auto& point : orbit.points) values.push_back(f(point.value()));
  return values;
}

}  // namespace dmspec
