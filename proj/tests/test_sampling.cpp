#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dmspec/errors.hpp"
#include "dmspec/sampling.hpp"
#include "support/generators.hpp"

using namespace dmspec;

TEST_CASE("eval examples") {
  const auto c = SamplingFunction::cosine(1.0);
  CHECK(eval(c, 0.0) == doctest::Approx(2.0));
  CHECK(eval(c, 0.5) == doctest::Approx(-2.0));
  CHECK(std::abs(eval(c, 0.25)) < 1e-15);
  CHECK(eval(c, 1.25) == doctest::Approx(eval(c, 0.25)));

  const auto b = SamplingFunction::bernoulli(5.0);
  CHECK(eval(b, 0.0) == 5.0);
  CHECK(eval(b, 0.4999) == 5.0);
  CHECK(eval(b, 0.5) == 0.0);
  CHECK(eval(b, 0.99) == 0.0);
  CHECK(eval(b, -0.25) == 0.0);  // -0.25 ≡ 0.75

  CHECK(eval(SamplingFunction::constant(-1.5), 0.37) == -1.5);

  const SamplingFunction p(TrigPoly{1.0, {0.0, 1.0}, {1.0}});
  CHECK(eval(p, 0.25) == doctest::Approx(1.0 + std::cos(std::numbers::pi) + 1.0));
}

TEST_CASE("potential examples") {
  const auto c = potential(SamplingFunction::constant(2.0), 0.3, 0, 9);
  CHECK(c.values == std::vector<double>(10, 2.0));
  CHECK(c.provenance == Provenance::ForwardOnly);

  const auto cos1 = potential(SamplingFunction::cosine(1.0), CirclePoint(1, 3), 0, 2);
  REQUIRE(cos1.values.size() == 3);
  for (double v : cos1.values) CHECK(v == doctest::Approx(-1.0));

  const auto bern = potential(SamplingFunction::bernoulli(5.0), CirclePoint(1, 3), 0, 3);
  CHECK(bern.values == std::vector<double>{5.0, 0.0, 5.0, 0.0});
}

TEST_CASE("two-sided potentials need backward digits") {
  const auto f = SamplingFunction::bernoulli(1.0);
  CHECK_THROWS_AS(potential(f, 0.2, -3, 5), MissingDigits);
  const BackwardDigits two({1, 0});
  CHECK_THROWS_AS(potential(f, 0.2, -3, 5, &two), MissingDigits);
  CHECK_THROWS_AS(potential(f, 0.2, 1, 5), InvalidParameter);

  // Period-two cycle: going back with digits (1, 0) retraces 1/3 ← 2/3 ← 1/3.
  const BackwardDigits cyc({1, 0, 1, 0});
  const auto v = potential(f, CirclePoint(1, 3), -4, 3, &cyc);
  CHECK(v.provenance == Provenance::TwoSided);
  CHECK(v.n_max() == 3);
  CHECK(v.values == std::vector<double>{1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0});
  CHECK(v.at(-1) == 0.0);
  CHECK(v.at(0) == 1.0);
  CHECK_THROWS_AS(v.at(4), InvalidParameter);
  REQUIRE(v.forward().size() == 4);
  CHECK(v.forward()[0] == 1.0);
}

TEST_CASE("forward part does not depend on backward digits") {
  const auto f = SamplingFunction::cosine(0.7);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = BackwardDigits::random(seed, 20);
    const auto b = BackwardDigits::random(seed + 100, 20);
    const auto pa = potential(f, 0.123, -20, 40, &a, 5);
    const auto pb = potential(f, 0.123, -20, 40, &b, 5);
    const auto fa = pa.forward();
    const auto fb = pb.forward();
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == fb[i]);
    CHECK(pa.digit_seed == seed);
  }
}

TEST_CASE("potentials along rational points are periodic") {
  const auto f = SamplingFunction::cosine(0.5);
  for (const auto& orbit : enumerate_orbits(7)) {
    const auto v = potential(f, orbit.points[0], 0, 3 * orbit.period);
    for (int n = 0; n < 2 * orbit.period; ++n) {
      CHECK(v.values[n] == v.values[n + orbit.period]);
    }
    const auto one = orbit_potential(orbit, f);
    for (int n = 0; n < orbit.period; ++n) CHECK(one[n] == v.values[n]);
  }
}

TEST_CASE("samples stay within the sup-norm bound") {
  gen::Source src(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = trial % 2 ? src.trig_poly() : src.step_function();
    const double bound = f.sup_norm();
    for (double v : random_potential(f, 300, trial)) CHECK(std::abs(v) <= bound + 1e-12);
  }
}

TEST_CASE("random_potential is reproducible and seed dependent") {
  const auto f = SamplingFunction::cosine(1.0);
  CHECK(random_potential(f, 100, 3) == random_potential(f, 100, 3));
  CHECK(random_potential(f, 100, 3) != random_potential(f, 100, 4));
  CHECK(random_potential(f, 0, 3).empty());
}

TEST_CASE("json round trip") {
  gen::Source src(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = trial % 2 ? src.trig_poly() : src.step_function();
    const auto j = f.to_json();
    const auto g = SamplingFunction::from_json(nlohmann::json::parse(j.dump()));
    CHECK(g.to_json() == j);
    for (double w : {0.0, 0.1, 0.33, 0.5, 0.77}) CHECK(f(w) == g(w));
  }
  CHECK(SamplingFunction::bernoulli(2.0).to_json()["type"] == "step");
  CHECK_THROWS_AS(SamplingFunction::from_json({{"type", "spline"}}), InvalidParameter);
  CHECK_THROWS_AS(SamplingFunction::from_json({{"type", "step"}}), InvalidParameter);
  CHECK_THROWS_AS(SamplingFunction::from_json(nlohmann::json::array()), InvalidParameter);
}

TEST_CASE("step functions are validated") {
  CHECK_THROWS_AS(SamplingFunction(StepFunction{{0.1, 0.5}, {1, 2}}), InvalidParameter);
  CHECK_THROWS_AS(SamplingFunction(StepFunction{{0.0, 0.5, 0.5}, {1, 2, 3}}), InvalidParameter);
  CHECK_THROWS_AS(SamplingFunction(StepFunction{{0.0, 1.0}, {1, 2}}), InvalidParameter);
  CHECK_THROWS_AS(SamplingFunction(StepFunction{{0.0}, {1, 2}}), InvalidParameter);
  CHECK_THROWS_AS(SamplingFunction(StepFunction{{}, {}}), InvalidParameter);
  CHECK_FALSE(SamplingFunction::bernoulli(1.0).is_continuous());
  CHECK(SamplingFunction::cosine(1.0).is_continuous());
  CHECK(SamplingFunction::cosine(1.5).sup_norm() == 3.0);
  CHECK(SamplingFunction(StepFunction{{0.0, 0.3}, {-4.0, 2.0}}).sup_norm() == 4.0);
}
