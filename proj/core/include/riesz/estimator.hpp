#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "riesz/energy.hpp"
#include "riesz/measures.hpp"

namespace riesz {

struct FitWindow {
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
};

/// Top half of the n-grid, widened to at least 4 points when available.
FitWindow default_window(std::span<const std::size_t> n_grid);

struct SlopeFit {
  double s = 0.0;
  double slope = 0.0;
  double residual = 0.0;  // RMS of the fit residuals
};

/// Least-squares slope of log J_s(P_n) against log n over the window, per s.
/// Throws WindowTooSmall with fewer than 4 grid points inside the window.
std::vector<SlopeFit> adaptability_slopes(const EnergyProfile& profile, const FitWindow& window);

/// Growth exponent of successive increments |J(n_{j+1}) - J(n_j)| in n: the
/// least-squares slope of their logs against log sqrt(n_j n_{j+1}). Strongly
/// negative when the energies converge; -infinity when every increment is zero.
double increment_exponent(std::span<const std::size_t> n_values, std::span<const double> energies);

struct DimensionEstimate {
  double s_hat = 0.0;
  std::vector<double> s_grid;
  std::vector<double> slopes;
  std::vector<double> increment_exponents;
  std::vector<double> residuals;
  std::vector<bool> accepted;
  double threshold = 0.1;
  FitWindow window;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double midpoint = 0.0;
  bool midpoint_accepted = false;
  double midpoint_slope = 0.0;
  double midpoint_increment_exponent = 0.0;
  bool slopes_monotone = true;  // flag only: slopes nondecreasing past the transition
};

/// Returns J_s(P_n) at each n of the profile's n-grid.
using EnergyEvaluator = std::function<std::vector<double>(double s)>;

EnergyEvaluator prefix_evaluator(const PointCloud& cloud, std::vector<std::size_t> n_grid);
EnergyEvaluator family_evaluator(std::function<PointCloud(std::size_t)> family, std::vector<std::size_t> n_grid);

/// Largest exponent whose energies stay bounded on the window. Exponents are
/// scanned upward; s is accepted while its log-log slope is <= threshold or
/// its increments shrink, and the first rejection ends the scan. The bracket
/// is refined once at its midpoint using evaluator. Throws NoTransition when
/// every exponent, or none, is accepted.
DimensionEstimate dimension_estimate(const EnergyProfile& profile, double threshold, const EnergyEvaluator& evaluator,
                                     std::optional<FitWindow> window = std::nullopt);

/// Profile over prefixes of cloud, then dimension_estimate.
DimensionEstimate dimension_estimate(const PointCloud& cloud, std::span<const double> s_grid,
                                     std::span<const std::size_t> n_grid, double threshold = 0.1,
                                     std::optional<FitWindow> window = std::nullopt);

/// Geometric n-grid of prefix sizes from n_min to n_max (inclusive), count points.
std::vector<std::size_t> geometric_grid(std::size_t n_min, std::size_t n_max, std::size_t count);

/// Evenly spaced exponents lo, lo + step, ..., <= hi.
std::vector<double> exponent_grid(double lo, double hi, double step);

struct DispersionScore {
  double s = 0.0;
  double score = 0.0;  // max over reps of J_s divided by the median
};

/// One sample per rep (seed derive_seed(seed, rep)) evaluated at every s.
std::vector<DispersionScore> variance_blowup_scan(const MeasureSpec& measure, std::span<const double> s_grid,
                                                  std::size_t n, std::size_t reps, std::uint64_t seed);

}  // namespace riesz
