#pragma once

// Independent reference computations used to cross-check the fast paths:
// dense eigen-solves, closed forms for the free operator, interval geometry.

#include <cstddef>
#include <span>
#include <vector>

#include "dmspec/spectrum.hpp"

namespace dmspec::oracle {

enum class Boundary { Dirichlet, Periodic };

/// Eigenvalues <= energy of the N×N truncation, by dense symmetric eigensolve.
std::size_t dense_eigen_count(std::span<const double> potential, double energy,
                              Boundary boundary = Boundary::Dirichlet);

/// Sorted eigenvalues of the p×p periodic (sign = +1) or antiperiodic (sign = −1)
/// Jacobi matrix with the given diagonal.
std::vector<double> floquet_eigenvalues(std::span<const double> periodic_potential, int sign);

/// Bands [e₁,e₂], [e₃,e₄], ... from the 2p merged periodic and antiperiodic eigenvalues.
std::vector<Band> floquet_bands(std::span<const double> periodic_potential);

/// 2·T_p(E/2), the discriminant of the free operator over any period p.
double free_discriminant(int period, double energy);

/// 1 − arccos(E/2)/π, clamped to [0,1] outside [−2,2].
double free_ids(double energy);

/// Hausdorff distance between two finite unions of closed intervals.
double hausdorff_distance(std::span<const Band> a, std::span<const Band> b);

/// Sorts and joins bands whose separation is at most tol.
std::vector<Band> merged(std::vector<Band> bands, double tol);

}  // namespace dmspec::oracle
