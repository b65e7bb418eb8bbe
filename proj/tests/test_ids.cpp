#include <cmath>

#include "doctest.h"
#include "dmspec/errors.hpp"
#include "dmspec/ids.hpp"
#include "dmspec/verify/oracles.hpp"
#include "support/generators.hpp"

using namespace dmspec;

TEST_CASE("eigen_count examples") {
  const std::vector<double> one{0.0};
  CHECK(eigen_count(one, -0.1) == 0);
  CHECK(eigen_count(one, 0.0) == 1);

  // [[0,1],[1,0]] has eigenvalues ±1; the zero pivot at E = 0 must not break the count.
  const std::vector<double> two{0.0, 0.0};
  CHECK(eigen_count(two, -1.5) == 0);
  CHECK(eigen_count(two, 0.0) == 1);
  CHECK(eigen_count(two, 1.0) == 2);

  const std::vector<double> free(10, 0.0);
  CHECK(eigen_count(free, -2.0) == 0);
  CHECK(eigen_count(free, 2.0) == 10);
  CHECK(eigen_count(free, 0.0) == 5);
  CHECK(eigen_count(std::span<const double>{}, 0.0) == 0);

  const auto p = potential(SamplingFunction::constant(1.0), 0.2, 0, 9);
  CHECK(eigen_count(p, 1.0) == 5);
}

TEST_CASE("Sturm counts agree with dense eigensolves") {
  gen::Source src(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::size_t>(src.integer(1, 64));
    const auto v = src.values(n, -3.0, 3.0);
    for (int k = 0; k < 10; ++k) {
      const double e = src.uniform(-6.0, 6.0);
      CHECK(eigen_count(v, e) == oracle::dense_eigen_count(v, e));
    }
  }
}

TEST_CASE("periodic and Dirichlet truncations differ by at most two eigenvalues") {
  gen::Source src(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_potential(src.trig_poly(), 64, trial);
    for (double e = -5.0; e <= 5.0; e += 0.25) {
      const double a = double(eigen_count(v, e));
      const double b = double(oracle::dense_eigen_count(v, e, oracle::Boundary::Periodic));
      CHECK(std::abs(a - b) <= 2.0);
    }
  }
}

TEST_CASE("free IDS") {
  const auto zero = SamplingFunction::constant(0.0);
  const std::vector<double> grid{-3.0, -1.0, 0.0, 1.0, 3.0};
  const auto t = ids_estimate(zero, grid, 400, 4, 1);
  CHECK(t.k_values[0] == 0.0);
  CHECK(t.k_values[2] == doctest::Approx(0.5).epsilon(0.04));
  CHECK(t.k_values[4] == 1.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(std::abs(t.k_values[j] - oracle::free_ids(grid[j])) <= t.tolerance());
  }
  CHECK(t.tolerance() == doctest::Approx(3.0 / std::sqrt(1600.0) + 2.0 / 400.0));
}

TEST_CASE("bernoulli IDS in the main gap") {
  const auto f = SamplingFunction::bernoulli(5.0);
  const std::vector<double> grid{2.5};
  const auto t = ids_estimate(f, grid, 2000, 40, 0x1d5001);
  CHECK(std::abs(t.k_values[0] - 0.5) <= 0.02);

  double dense = 0.0;
  double sturm = 0.0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto v = random_potential(f, 256, s);
    dense += double(oracle::dense_eigen_count(v, 2.5));
    sturm += double(eigen_count(v, 2.5));
  }
  CHECK(dense == sturm);
  CHECK(std::abs(dense / (8 * 256) - 0.5) <= 0.05);
}

TEST_CASE("IDS is nondecreasing with the right limits") {
  gen::Source src(43);
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = trial % 2 ? src.trig_poly() : src.step_function();
    const double r = f.sup_norm() + 2.0;
    const auto grid = uniform_grid(-r - 0.5, r + 0.5, 301);
    const auto t = ids_estimate(f, grid, 128, 8, trial);
    CHECK(t.k_values.front() == 0.0);
    CHECK(t.k_values.back() == 1.0);
    for (std::size_t j = 1; j < grid.size(); ++j) CHECK(t.k_values[j] >= t.k_values[j - 1]);
  }
}

TEST_CASE("IDS is flat across gaps of the union spectrum") {
  const auto f = SamplingFunction::bernoulli(5.0);
  const auto s = union_spectrum(f, 8);
  const auto report = gap_report(s);
  REQUIRE_FALSE(report.gaps.empty());
  const Gap widest = report.gaps.front().gap;
  const auto t = ids_estimate(f, uniform_grid(widest.lo, widest.hi, 41), 1000, 20, 7);
  const auto label = gap_label(t, widest);
  CHECK(label.flat);
  CHECK(label.grid_points == 39);
  CHECK(std::abs(label.value - 0.5) <= 0.02);
}

TEST_CASE("ids_estimate is reproducible across thread counts") {
  const auto f = SamplingFunction::cosine(0.5);
  const auto grid = uniform_grid(-3.0, 3.0, 31);
  const auto a = ids_estimate(f, grid, 64, 12, 5, 1);
  const auto b = ids_estimate(f, grid, 64, 12, 5, 4);
  CHECK(a.k_values == b.k_values);
  CHECK(a.seed == 5u);
  CHECK(ids_estimate(f, grid, 64, 12, 6).k_values != a.k_values);
}

TEST_CASE("ids_estimate validates its input") {
  const auto f = SamplingFunction::cosine(0.5);
  const std::vector<double> grid{0.0, 1.0};
  const std::vector<double> unsorted{1.0, 0.0};
  CHECK_THROWS_AS(ids_estimate(f, grid, 15, 1, 0), InvalidParameter);
  CHECK_THROWS_AS(ids_estimate(f, grid, 16, 0, 0), InvalidParameter);
  CHECK_THROWS_AS(ids_estimate(f, unsorted, 16, 1, 0), InvalidParameter);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 10), InvalidParameter);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), InvalidParameter);
}

TEST_CASE("grids") {
  const auto g = uniform_grid(-1.0, 1.0, 5);
  CHECK(g == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  SpectrumApprox s;
  s.hull = {-2.0, 2.0};
  const auto d = default_ids_grid(s);
  CHECK(d.size() == 2001);
  CHECK(d.front() == -3.0);
  CHECK(d.back() == 3.0);
}

TEST_CASE("gap_label examples") {
  IdsTable t;
  t.energies = {0.0, 1.0, 2.0, 3.0, 4.0};
  t.k_values = {0.0, 0.2, 0.2, 0.21, 1.0};
  t.truncation_size = 1000;
  t.sample_count = 100;
  const auto label = gap_label(t, 0.5, 3.5);
  CHECK(label.grid_points == 3);
  CHECK(label.value == doctest::Approx(0.61 / 3));
  CHECK(label.spread == doctest::Approx(0.01));
  CHECK(label.flat);  // 0.01 <= 3·(3/√(10⁵) + 0.002)

  const auto steep = gap_label(t, 2.5, 4.5);
  CHECK_FALSE(steep.flat);
  CHECK(gap_label(t, Gap{0.0, 2.0}).grid_points == 1);  // open interval
  CHECK_THROWS_AS(gap_label(t, 0.1, 0.9), EmptyGapGrid);
}
