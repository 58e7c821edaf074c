#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riesz/measures.hpp"

namespace riesz {

struct CellStats {
  std::size_t n = 0;
  std::uint64_t seed = 0;  // cell seed; rep r uses derive_seed(seed, r)
  double mean = 0.0;
  double standard_error = 0.0;  // sample std / sqrt(reps)
  double dispersion = 0.0;      // max / median over reps
  std::optional<double> z_score;
  std::optional<double> exceedance_rate;
  std::vector<double> values;  // per-rep J_s, in rep order
};

struct ExperimentReport {
  std::string kind;  // "expectation" | "wlln"
  MeasureSpec measure;
  double s = 0.0;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::optional<double> eps;
  std::optional<double> oracle;
  std::string oracle_method;
  std::vector<CellStats> cells;
};

/// J_s of reps independent clouds of size n; rep r is drawn with
/// derive_seed(seed, r). Replicates run in parallel, results are in rep order.
std::vector<double> replicate_energies(const MeasureSpec& measure, double s, std::size_t n, std::size_t reps,
                                       std::uint64_t seed);

/// Seed of grid cell j for a master seed.
std::uint64_t cell_seed(std::uint64_t master, std::size_t cell) noexcept;

CellStats summarize(std::size_t n, std::span<const double> values);

/// Mean and standard error of J_s(P_n) over reps draws, with the z-score
/// against I_s(mu). Throws OracleUnavailable when no oracle exists unless
/// waive_oracle is set.
ExperimentReport expectation_experiment(const MeasureSpec& measure, double s, std::size_t n, std::size_t reps,
                                        std::uint64_t seed, bool waive_oracle = false);

/// Per n, the fraction of reps with |J_s - I_s| > eps.
ExperimentReport wlln_exceedance(const MeasureSpec& measure, double s, double eps,
                                 const std::vector<std::size_t>& n_grid, std::size_t reps, std::uint64_t seed);

/// One growing sample x_1..x_{n_max}; element k is (k + 2, J_s(P_{k+2})).
std::vector<std::pair<std::size_t, double>> slln_path(const MeasureSpec& measure, double s, std::size_t n_max,
                                                      std::uint64_t seed);

/// sup of |J - oracle| over path entries with n in [n_lo, n_hi].
double sup_deviation(const std::vector<std::pair<std::size_t, double>>& path, double oracle, std::size_t n_lo,
                     std::size_t n_hi);

double median(std::vector<double> values);

}  // namespace riesz
