#include "dmspec/ids.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmspec/errors.hpp"
#include "dmspec/parallel.hpp"

namespace dmspec {

namespace {

constexpr double kZeroPivot = -1e-300;

}  // namespace

std::size_t eigen_count(std::span<const double> potential, double energy) {
  std::size_t negatives = 0;
  double d = 0.0;
  for (std::size_t i = 0; i < potential.size(); ++i) {
    d = potential[i] - energy - (i == 0 ? 0.0 : 1.0 / d);
    if (d == 0.0) d = kZeroPivot;
    if (d < 0.0) ++negatives;
  }
  return negatives;
}

std::size_t eigen_count(const Potential& potential, double energy) {
  return eigen_count(potential.values, energy);
}

double IdsTable::tolerance() const {
  const double n = double(truncation_size);
  return 3.0 / std::sqrt(double(sample_count) * n) + 2.0 / n;
}

IdsTable ids_estimate(const SamplingFunction& f, std::span<const double> grid, std::size_t N,
                      std::size_t M, std::uint64_t seed, int threads) {
  if (N < 16) throw InvalidParameter("ids_estimate needs N >= 16, got " + std::to_string(N));
  if (M < 1) throw InvalidParameter("ids_estimate needs M >= 1");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidParameter("energy grid must be sorted");
  }

  std::vector<std::vector<std::size_t>> counts(M);
  parallel_for(M, threads, [&](std::size_t s) {
    const auto v = random_potential(f, N, split_seed(seed, s));
    auto& row = counts[s];
    row.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) row[j] = eigen_count(v, grid[j]);
  });

  IdsTable table;
  table.energies.assign(grid.begin(), grid.end());
  table.k_values.assign(grid.size(), 0.0);
  table.truncation_size = N;
  table.sample_count = M;
  table.seed = seed;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::size_t total = 0;
    for (const auto& row : counts) total += row[j];
    table.k_values[j] = double(total) / (double(M) * double(N));
  }
  return table;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw InvalidParameter("uniform grid needs lo < hi and count >= 2");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * double(i) / double(count - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> default_ids_grid(const SpectrumApprox& spectrum, std::size_t count) {
  return uniform_grid(spectrum.hull.lo - 1.0, spectrum.hull.hi + 1.0, count);
}

GapLabel gap_label(const IdsTable& table, double lo, double hi) {
  GapLabel out;
  double sum = 0.0;
  double kmin = 1.0;
  double kmax = 0.0;
  for (std::size_t j = 0; j < table.energies.size(); ++j) {
    const double e = table.energies[j];
    if (!(e > lo && e < hi)) continue;
    const double k = table.k_values[j];
    sum += k;
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
    ++out.grid_points;
  }
  if (out.grid_points == 0) {
    throw EmptyGapGrid("no grid energy inside the gap (" + std::to_string(lo) + ", " +
                       std::to_string(hi) + ")");
  }
  out.value = sum / double(out.grid_points);
  out.spread = kmax - kmin;
  out.flat = out.spread <= 3.0 * table.tolerance();
  return out;
}

}  // namespace dmspec
