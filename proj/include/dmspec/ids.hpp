#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dmspec/sampling.hpp"
#include "dmspec/spectrum.hpp"

namespace dmspec {

/// Number of eigenvalues <= energy of the Dirichlet truncation with diagonal
/// `potential` and unit off-diagonal, by Sturm sign counting.
std::size_t eigen_count(std::span<const double> potential, double energy);
std::size_t eigen_count(const Potential& potential, double energy);

struct IdsTable {
  std::vector<double> energies;
  std::vector<double> k_values;
  std::size_t truncation_size = 0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  /// 3/√(M·N) + 2/N
  double tolerance() const;
};

/// k(E) ≈ (1/(M·N)) Σ eigen_count over M random orbits of length N. Every grid
/// energy is evaluated on the same potentials, so k is nondecreasing in E.
IdsTable ids_estimate(const SamplingFunction& f, std::span<const double> grid, std::size_t N,
                      std::size_t M, std::uint64_t seed, int threads = 1);

std::vector<double> uniform_grid(double lo, double hi, std::size_t count);
/// 2001 points over the hull widened by 1 on each side.
std::vector<double> default_ids_grid(const SpectrumApprox& spectrum, std::size_t count = 2001);

struct GapLabel {
  double value = 0.0;
  /// max − min of k over the grid points inside the gap.
  double spread = 0.0;
  bool flat = true;
  std::size_t grid_points = 0;
};

/// Mean of k over grid points strictly inside (lo, hi). Throws EmptyGapGrid if
/// there are none.
GapLabel gap_label(const IdsTable& table, double lo, double hi);
inline GapLabel gap_label(const IdsTable& table, const Gap& gap) {
  return gap_label(table, gap.lo, gap.hi);
}

}  // namespace dmspec
