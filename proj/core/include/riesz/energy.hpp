#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "riesz/point_cloud.hpp"

namespace riesz {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// |r|^{-s} for r > 0: direct powers for s in {0, 1, 2}, exp(-s log r) otherwise.
inline double riesz_kernel(double r, double s) noexcept;

/// Normalised discrete energy over ordered pairs,
///   J_s(P) = 1/(n(n-1)) * sum_{x != y} |x - y|^{-s}.
/// Throws TooFewPoints for n < 2 and InvalidArgument for s < 0. Distinctness
/// is guaranteed by PointCloud.
double discrete_energy(const PointCloud& cloud, double s);

/// J for several exponents in one pass over the pairs.
std::vector<double> discrete_energies(const PointCloud& cloud, std::span<const double> s_values);

/// Per-point interaction with everything earlier in the sequence:
///   row(i, k) = sum_{j < i} |x_i - x_j|^{-s_k}
/// for i < n, stored as rows[i * s_values.size() + k]. Each row is a
/// compensated sum, so results are identical at any thread count.
std::vector<double> lower_row_sums(const PointCloud& cloud, std::span<const double> s_values, std::size_t n);

/// J_s(P_n) for every n in [2, n_max], built by accumulating the rows of
/// lower_row_sums in order. Element k is J at n = k + 2.
std::vector<double> running_energy(const PointCloud& cloud, double s, std::size_t n_max);

struct EnergyProfile {
  std::vector<double> s_grid;       // ascending, s >= 0
  std::vector<std::size_t> n_grid;  // ascending, n >= 2
  std::vector<std::vector<double>> values;  // values[i][j] = J_{s_grid[i]}(P_{n_grid[j]})

  double at(std::size_t s_index, std::size_t n_index) const { return values.at(s_index).at(n_index); }
};

/// Profile over prefixes of one generating sequence.
EnergyProfile energy_profile(const PointCloud& cloud, std::span<const double> s_grid,
                             std::span<const std::size_t> n_grid);

/// Profile over an indexed family of sets P_n that need not be nested
/// (e.g. the grids m/(n+1)).
template <class Family>
EnergyProfile energy_profile_family(Family&& family, std::span<const double> s_grid,
                                    std::span<const std::size_t> n_grid);

/// Discrete Riesz potential of the normalised counting measure,
///   V_s(x) = (1/n) sum_i |x - x_i|^{-s},
/// +infinity when x coincides with a point and s > 0.
double riesz_potential_discrete(const PointCloud& cloud, std::span<const double> x, double s);

/// Radial cutoff: 1 on [0, 1], 0 on [2, inf), cubic smoothstep between.
double cutoff(double r) noexcept;

/// I_s^R of the counting measure with kernel (1 - cutoff(|x-y|/R)) |x-y|^{-s},
/// averaged over all n^2 ordered pairs (the diagonal contributes 0).
double truncated_energy(const PointCloud& cloud, double s, double radius);

void validate_exponent(double s);
void validate_grids(std::span<const double> s_grid, std::span<const std::size_t> n_grid);

// ---------------------------------------------------------------------------

inline double riesz_kernel(double r, double s) noexcept {
  if (s == 0.0) return 1.0;
  if (s == 1.0) return 1.0 / r;
  if (s == 2.0) return 1.0 / (r * r);
  return std::exp(-s * std::log(r));
}

template <class Family>
EnergyProfile energy_profile_family(Family&& family, std::span<const double> s_grid,
                                    std::span<const std::size_t> n_grid) {
  validate_grids(s_grid, n_grid);
  EnergyProfile profile;
  profile.s_grid.assign(s_grid.begin(), s_grid.end());
  profile.n_grid.assign(n_grid.begin(), n_grid.end());
  profile.values.assign(s_grid.size(), std::vector<double>(n_grid.size()));
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    const PointCloud set = family(n_grid[j]);
    const std::vector<double> energies = discrete_energies(set, s_grid);
    for (std::size_t i = 0; i < s_grid.size(); ++i) profile.values[i][j] = energies[i];
  }
  return profile;
}

}  // namespace riesz
