#include "riesz/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riesz/error.hpp"
#include "riesz/parallel.hpp"
#include "riesz/summation.hpp"

namespace riesz {

namespace {

constexpr std::size_t kRowChunk = 32;

bool is_direct_power(double s) noexcept { return s == 0.0 || s == 1.0 || s == 2.0; }

void require_pairs(const PointCloud& cloud, std::size_t n) {
  require(n >= 2, ErrorKind::TooFewPoints, "energy needs at least 2 points, got " + std::to_string(n));
  require(n <= cloud.size(), ErrorKind::InvalidArgument,
          "prefix length " + std::to_string(n) + " exceeds cloud size " + std::to_string(cloud.size()));
}

}  // namespace

void validate_exponent(double s) {
  require(std::isfinite(s) && s >= 0.0, ErrorKind::InvalidArgument, "exponent must be finite and >= 0");
}

void validate_grids(std::span<const double> s_grid, std::span<const std::size_t> n_grid) {
  require(!s_grid.empty() && !n_grid.empty(), ErrorKind::InvalidArgument, "profile grids must be nonempty");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    validate_exponent(s_grid[i]);
    require(i == 0 || s_grid[i] > s_grid[i - 1], ErrorKind::InvalidArgument, "s_grid must be strictly ascending");
  }
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    require(n_grid[j] >= 2, ErrorKind::TooFewPoints, "n_grid entries must be >= 2");
    require(j == 0 || n_grid[j] > n_grid[j - 1], ErrorKind::InvalidArgument, "n_grid must be strictly ascending");
  }
}

std::vector<double> lower_row_sums(const PointCloud& cloud, std::span<const double> s_values, std::size_t n) {
  require(n <= cloud.size(), ErrorKind::InvalidArgument, "row count exceeds cloud size");
  for (double s : s_values) validate_exponent(s);
  const std::size_t ns = s_values.size();
  const bool needs_log = std::any_of(s_values.begin(), s_values.end(), [](double s) { return !is_direct_power(s); });
  const std::size_t dim = cloud.dim();
  const double* coords = cloud.coords().data();

  std::vector<double> rows(n * ns, 0.0);
  parallel_for_chunks(n, kRowChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<CompensatedSum> acc(ns);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(acc.begin(), acc.end(), CompensatedSum{});
      const double* xi = coords + i * dim;
      for (std::size_t j = 0; j < i; ++j) {
        const double* xj = coords + j * dim;
        double sq = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
          const double diff = xi[a] - xj[a];
          sq += diff * diff;
        }
        const double r = std::sqrt(sq);
        const double log_r = needs_log ? std::log(r) : 0.0;
        for (std::size_t k = 0; k < ns; ++k) {
          const double s = s_values[k];
          double term;
          if (s == 0.0) term = 1.0;
          else if (s == 1.0) term = 1.0 / r;
          else if (s == 2.0) term = 1.0 / sq;
          else term = std::exp(-s * log_r);
          acc[k].add(term);
        }
      }
      for (std::size_t k = 0; k < ns; ++k) rows[i * ns + k] = acc[k].value();
    }
  });
  return rows;
}

std::vector<double> discrete_energies(const PointCloud& cloud, std::span<const double> s_values) {
  const std::size_t n = cloud.size();
  require_pairs(cloud, n);
  const std::size_t ns = s_values.size();
  const std::vector<double> rows = lower_row_sums(cloud, s_values, n);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<double> out(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) total.add(rows[i * ns + k]);
    out[k] = 2.0 * total.value() / pairs;
  }
  return out;
}

double discrete_energy(const PointCloud& cloud, double s) {
  const double exponent[] = {s};
  return discrete_energies(cloud, exponent).front();
}

std::vector<double> running_energy(const PointCloud& cloud, double s, std::size_t n_max) {
  require_pairs(cloud, n_max);
  const double exponent[] = {s};
  const std::vector<double> rows = lower_row_sums(cloud, exponent, n_max);
  std::vector<double> out;
  out.reserve(n_max - 1);
  CompensatedSum total;
  total.add(rows[0]);
  for (std::size_t i = 1; i < n_max; ++i) {
    total.add(rows[i]);
    const double n = static_cast<double>(i + 1);
    out.push_back(2.0 * total.value() / (n * (n - 1.0)));
  }
  return out;
}

EnergyProfile energy_profile(const PointCloud& cloud, std::span<const double> s_grid,
                             std::span<const std::size_t> n_grid) {
  validate_grids(s_grid, n_grid);
  const std::size_t n_max = n_grid.back();
  require_pairs(cloud, n_max);
  const std::size_t ns = s_grid.size();
  const std::vector<double> rows = lower_row_sums(cloud, s_grid, n_max);

  EnergyProfile profile;
  profile.s_grid.assign(s_grid.begin(), s_grid.end());
  profile.n_grid.assign(n_grid.begin(), n_grid.end());
  profile.values.assign(ns, std::vector<double>(n_grid.size()));
  for (std::size_t k = 0; k < ns; ++k) {
    CompensatedSum total;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_max && next < n_grid.size(); ++i) {
      total.add(rows[i * ns + k]);
      const std::size_t n = i + 1;
      if (n == n_grid[next]) {
        const double nd = static_cast<double>(n);
        profile.values[k][next++] = 2.0 * total.value() / (nd * (nd - 1.0));
      }
    }
  }
  return profile;
}

double riesz_potential_discrete(const PointCloud& cloud, std::span<const double> x, double s) {
  require(!cloud.empty(), ErrorKind::TooFewPoints, "potential of an empty cloud");
  require(x.size() == cloud.dim(), ErrorKind::DimensionMismatch,
          "evaluation point has dimension " + std::to_string(x.size()) + ", cloud has " + std::to_string(cloud.dim()));
  validate_exponent(s);
  CompensatedSum acc;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double r = distance(x, cloud.point(i));
    if (r == 0.0) {
      if (s > 0.0) return kInfinity;
      acc.add(1.0);
      continue;
    }
    acc.add(riesz_kernel(r, s));
  }
  return acc.value() / static_cast<double>(cloud.size());
}

double cutoff(double r) noexcept {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double u = r - 1.0;
  return 1.0 - u * u * (3.0 - 2.0 * u);
}

double truncated_energy(const PointCloud& cloud, double s, double radius) {
  const std::size_t n = cloud.size();
  require_pairs(cloud, n);
  validate_exponent(s);
  require(std::isfinite(radius) && radius > 0.0, ErrorKind::InvalidArgument, "truncation radius must be positive");

  std::vector<double> rows(n, 0.0);
  parallel_for_chunks(n, kRowChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      CompensatedSum acc;
      for (std::size_t j = 0; j < i; ++j) {
        const double r = distance(cloud.point(i), cloud.point(j));
        const double weight = 1.0 - cutoff(r / radius);
        if (weight > 0.0) acc.add(weight * riesz_kernel(r, s));
      }
      rows[i] = acc.value();
    }
  });
  const double nd = static_cast<double>(n);
  return 2.0 * compensated_total(rows) / (nd * nd);
}

}  // namespace riesz
