#include "riesz/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riesz/error.hpp"
#include "riesz/parallel.hpp"
#include "riesz/random.hpp"
#include "riesz/stats.hpp"

namespace riesz {

namespace {

struct LineFit {
  double slope = 0.0;
  double residual = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

std::vector<std::size_t> window_indices(std::span<const std::size_t> n_grid, const FitWindow& window) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n_grid.size(); ++j)
    if (n_grid[j] >= window.n_lo && n_grid[j] <= window.n_hi) idx.push_back(j);
  require(idx.size() >= 4, ErrorKind::WindowTooSmall,
          "window [" + std::to_string(window.n_lo) + ", " + std::to_string(window.n_hi) + "] holds " +
              std::to_string(idx.size()) + " grid points; at least 4 are needed");
  return idx;
}

LineFit log_log_fit(std::span<const std::size_t> n_grid, std::span<const double> energies,
                    const std::vector<std::size_t>& idx) {
  std::vector<double> x, y;
  for (std::size_t j : idx) {
    x.push_back(std::log(static_cast<double>(n_grid[j])));
    y.push_back(std::log(energies[j]));
  }
  return least_squares(x, y);
}

struct Verdict {
  double slope = 0.0;
  double residual = 0.0;
  double increment = 0.0;
  bool accepted = false;
};

Verdict judge(std::span<const std::size_t> n_grid, std::span<const double> energies,
              const std::vector<std::size_t>& idx, double threshold) {
  const LineFit fit = log_log_fit(n_grid, energies, idx);
  std::vector<std::size_t> ns;
  std::vector<double> js;
  for (std::size_t j : idx) {
    ns.push_back(n_grid[j]);
    js.push_back(energies[j]);
  }
  Verdict v;
  v.slope = fit.slope;
  v.residual = fit.residual;
  v.increment = increment_exponent(ns, js);
  v.accepted = v.slope >= -threshold && (v.slope <= threshold || v.increment <= 0.0);
  return v;
}

}  // namespace

FitWindow default_window(std::span<const std::size_t> n_grid) {
  require(!n_grid.empty(), ErrorKind::WindowTooSmall, "empty n-grid");
  const std::size_t size = n_grid.size();
  std::size_t start = size / 2;
  if (size - start < 4) start = size >= 4 ? size - 4 : 0;
  return {n_grid[start], n_grid.back()};
}

std::vector<SlopeFit> adaptability_slopes(const EnergyProfile& profile, const FitWindow& window) {
  const auto idx = window_indices(profile.n_grid, window);
  std::vector<SlopeFit> out;
  for (std::size_t i = 0; i < profile.s_grid.size(); ++i) {
    const LineFit fit = log_log_fit(profile.n_grid, profile.values[i], idx);
    out.push_back({profile.s_grid[i], fit.slope, fit.residual});
  }
  return out;
}

double increment_exponent(std::span<const std::size_t> n_values, std::span<const double> energies) {
  std::vector<double> x, y;
  for (std::size_t j = 1; j < n_values.size(); ++j) {
    const double delta = std::abs(energies[j] - energies[j - 1]);
    if (delta == 0.0) continue;
    x.push_back(0.5 * (std::log(static_cast<double>(n_values[j])) + std::log(static_cast<double>(n_values[j - 1]))));
    y.push_back(std::log(delta));
  }
  if (x.size() < 2) return -kInfinity;
  return least_squares(x, y).slope;
}

EnergyEvaluator prefix_evaluator(const PointCloud& cloud, std::vector<std::size_t> n_grid) {
  return [cloud, n_grid = std::move(n_grid)](double s) {
    const double exponent[] = {s};
    return energy_profile(cloud, exponent, n_grid).values.front();
  };
}

EnergyEvaluator family_evaluator(std::function<PointCloud(std::size_t)> family, std::vector<std::size_t> n_grid) {
  return [family = std::move(family), n_grid = std::move(n_grid)](double s) {
    const double exponent[] = {s};
    return energy_profile_family(family, exponent, n_grid).values.front();
  };
}

DimensionEstimate dimension_estimate(const EnergyProfile& profile, double threshold, const EnergyEvaluator& evaluator,
                                     std::optional<FitWindow> window) {
  require(threshold > 0.0 && threshold <= 0.2, ErrorKind::InvalidArgument, "threshold must lie in (0, 0.2]");
  require(profile.s_grid.size() >= 2, ErrorKind::NoTransition, "s_grid needs at least 2 exponents");
  DimensionEstimate est;
  est.threshold = threshold;
  est.window = window.value_or(default_window(profile.n_grid));
  est.s_grid = profile.s_grid;
  const auto idx = window_indices(profile.n_grid, est.window);

  for (std::size_t i = 0; i < profile.s_grid.size(); ++i) {
    const Verdict v = judge(profile.n_grid, profile.values[i], idx, threshold);
    est.slopes.push_back(v.slope);
    est.residuals.push_back(v.residual);
    est.increment_exponents.push_back(v.increment);
    est.accepted.push_back(v.accepted);
  }

  const auto first_reject = std::find(est.accepted.begin(), est.accepted.end(), false);
  require(first_reject != est.accepted.begin(), ErrorKind::NoTransition,
          "energies grow at every exponent; the cloud looks degenerate");
  require(first_reject != est.accepted.end(), ErrorKind::NoTransition,
          "energies stay bounded at every exponent; extend s_grid upward");
  const auto hi = static_cast<std::size_t>(first_reject - est.accepted.begin());

  est.bracket_lo = profile.s_grid[hi - 1];
  est.bracket_hi = profile.s_grid[hi];
  est.s_hat = est.bracket_lo;
  est.midpoint = 0.5 * (est.bracket_lo + est.bracket_hi);
  if (evaluator) {
    const std::vector<double> energies = evaluator(est.midpoint);
    const Verdict v = judge(profile.n_grid, energies, idx, threshold);
    est.midpoint_accepted = v.accepted;
    est.midpoint_slope = v.slope;
    est.midpoint_increment_exponent = v.increment;
    if (v.accepted) est.s_hat = est.midpoint;
  }

  constexpr double kSlopeNoise = 0.02;
  for (std::size_t i = hi; i + 1 < est.slopes.size(); ++i)
    if (est.slopes[i + 1] < est.slopes[i] - kSlopeNoise) est.slopes_monotone = false;
  return est;
}

DimensionEstimate dimension_estimate(const PointCloud& cloud, std::span<const double> s_grid,
                                     std::span<const std::size_t> n_grid, double threshold,
                                     std::optional<FitWindow> window) {
  const EnergyProfile profile = energy_profile(cloud, s_grid, n_grid);
  return dimension_estimate(profile, threshold,
                            prefix_evaluator(cloud, std::vector<std::size_t>(n_grid.begin(), n_grid.end())), window);
}

std::vector<std::size_t> geometric_grid(std::size_t n_min, std::size_t n_max, std::size_t count) {
  require(n_min >= 2 && n_max >= n_min && count >= 1, ErrorKind::InvalidArgument, "invalid geometric grid");
  std::vector<std::size_t> grid;
  const double ratio = count > 1 ? std::log(static_cast<double>(n_max) / static_cast<double>(n_min)) /
                                       static_cast<double>(count - 1)
                                 : 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const auto n = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_min) * std::exp(ratio * static_cast<double>(j))));
    if (grid.empty() || n > grid.back()) grid.push_back(std::min(n, n_max));
  }
  if (grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

std::vector<double> exponent_grid(double lo, double hi, double step) {
  require(step > 0.0 && hi >= lo, ErrorKind::InvalidArgument, "invalid exponent grid");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + step * static_cast<double>(i));
  return grid;
}

std::vector<DispersionScore> variance_blowup_scan(const MeasureSpec& measure, std::span<const double> s_grid,
                                                  std::size_t n, std::size_t reps, std::uint64_t seed) {
  require(reps >= 50, ErrorKind::InvalidArgument, "variance scan needs reps >= 50");
  require(n >= 2, ErrorKind::TooFewPoints, "variance scan needs n >= 2");
  require(!s_grid.empty(), ErrorKind::InvalidArgument, "s_grid must be nonempty");
  for (double s : s_grid) validate_exponent(s);
  validate(measure);

  const std::size_t ns = s_grid.size();
  std::vector<double> table(reps * ns);
  parallel_for_chunks(reps, 1, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t r = begin; r < end; ++r) {
      const Sample draw = sample(measure, n, derive_seed(seed, r));
      const auto energies = discrete_energies(draw.cloud, s_grid);
      std::copy(energies.begin(), energies.end(), table.begin() + static_cast<std::ptrdiff_t>(r * ns));
    }
  });

  std::vector<DispersionScore> out;
  for (std::size_t k = 0; k < ns; ++k) {
    std::vector<double> column(reps);
    for (std::size_t r = 0; r < reps; ++r) column[r] = table[r * ns + k];
    const double max = *std::max_element(column.begin(), column.end());
    out.push_back({s_grid[k], max / median(column)});
  }
  return out;
}

}  // namespace riesz
