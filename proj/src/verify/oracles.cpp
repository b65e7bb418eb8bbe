#include "dmspec/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "dmspec/errors.hpp"

namespace dmspec::oracle {

namespace {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Distance from x to the nearest point of a union of closed intervals.
double distance_to(double x, std::span<const Band> set) {
  double best = std::numeric_limits<double>::infinity();
  for (const Band& b : set) {
    if (b.contains(x)) return 0.0;
    best = std::min({best, std::abs(x - b.lo), std::abs(x - b.hi)});
  }
  return best;
}

double directed_hausdorff(std::span<const Band> from, std::span<const Band> to) {
  // The farthest point of `from` is an endpoint or the point closest to the
  // middle of a hole in `to`.
  std::vector<double> probes;
  for (const Band& b : from) {
    probes.push_back(b.lo);
    probes.push_back(b.hi);
  }
  std::vector<Band> sorted(to.begin(), to.end());
  std::sort(sorted.begin(), sorted.end(), [](const Band& x, const Band& y) { return x.lo < y.lo; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double mid = 0.5 * (sorted[i].hi + sorted[i + 1].lo);
    for (const Band& b : from) probes.push_back(std::clamp(mid, b.lo, b.hi));
  }
  double worst = 0.0;
  for (double x : probes) worst = std::max(worst, distance_to(x, to));
  return worst;
}

}  // namespace

std::size_t dense_eigen_count(std::span<const double> potential, double energy,
                              Boundary boundary) {
  const auto n = static_cast<Eigen::Index>(potential.size());
  if (n == 0) return 0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = potential[static_cast<std::size_t>(i)];
    if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = 1.0;
  }
  if (boundary == Boundary::Periodic && n > 1) {
    h(0, n - 1) += 1.0;
    h(n - 1, 0) += 1.0;
  }
  const Eigen::VectorXd ev = symmetric_eigenvalues(h);
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(),
                                                [&](double x) { return x <= energy; }));
}

std::vector<double> floquet_eigenvalues(std::span<const double> periodic_potential, int sign) {
  const auto p = static_cast<Eigen::Index>(periodic_potential.size());
  if (p == 0) throw InvalidParameter("empty periodic potential");
  if (sign != 1 && sign != -1) throw InvalidParameter("Floquet sign must be +1 or -1");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) h(i, i) = periodic_potential[static_cast<std::size_t>(i)];
  if (p == 1) {
    h(0, 0) += 2.0 * sign;
  } else {
    // Bloch condition ψ(n + p) = sign·ψ(n): neighbour couplings wrap with that sign.
    for (Eigen::Index i = 0; i + 1 < p; ++i) {
      h(i, i + 1) += 1.0;
      h(i + 1, i) += 1.0;
    }
    h(0, p - 1) += sign;
    h(p - 1, 0) += sign;
  }
  const Eigen::VectorXd ev = symmetric_eigenvalues(h);
  std::vector<double> out(ev.begin(), ev.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Band> floquet_bands(std::span<const double> periodic_potential) {
  auto all = floquet_eigenvalues(periodic_potential, 1);
  const auto anti = floquet_eigenvalues(periodic_potential, -1);
  all.insert(all.end(), anti.begin(), anti.end());
  std::sort(all.begin(), all.end());
  std::vector<Band> bands;
  for (std::size_t j = 0; j + 1 < all.size(); j += 2) bands.push_back({all[j], all[j + 1]});
  return bands;
}

double free_discriminant(int period, double energy) {
  // T_0 = 1, T_1 = x, T_{k+1} = 2x·T_k − T_{k−1} with x = E/2.
  const double x = 0.5 * energy;
  double previous = 1.0;
  double current = x;
  for (int k = 1; k < period; ++k) {
    const double next = 2.0 * x * current - previous;
    previous = current;
    current = next;
  }
  return 2.0 * (period == 0 ? previous : current);
}

double free_ids(double energy) {
  if (energy <= -2.0) return 0.0;
  if (energy >= 2.0) return 1.0;
  return 1.0 - std::acos(0.5 * energy) / std::numbers::pi;
}

double hausdorff_distance(std::span<const Band> a, std::span<const Band> b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<Band> merged(std::vector<Band> bands, double tol) {
  std::sort(bands.begin(), bands.end(), [](const Band& x, const Band& y) { return x.lo < y.lo; });
  std::vector<Band> out;
  for (const Band& b : bands) {
    if (!out.empty() && b.lo - out.back().hi <= tol) {
      out.back().hi = std::max(out.back().hi, b.hi);
    } else {
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace dmspec::oracle
