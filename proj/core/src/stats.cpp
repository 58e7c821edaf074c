#include "riesz/stats.hpp"

#include <algorithm>
#include <cmath>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/parallel.hpp"
#include "riesz/random.hpp"
#include "riesz/summation.hpp"

namespace riesz {

namespace {

void require_finite_oracle(const ReferenceEnergy& ref) {
  require(std::isfinite(ref.value), ErrorKind::OracleUnavailable,
          "the reference energy is infinite; exceedance against it is not defined");
}

ReferenceEnergy oracle_for(const MeasureSpec& measure, double s) {
  require(has_reference_energy(measure), ErrorKind::OracleUnavailable,
          "no reference energy for " + variant_name(measure));
  return reference_energy(measure, s);
}

}  // namespace

double median(std::vector<double> values) {
  require(!values.empty(), ErrorKind::InvalidArgument, "median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t cell) noexcept { return derive_seed(master, cell); }

std::vector<double> replicate_energies(const MeasureSpec& measure, double s, std::size_t n, std::size_t reps,
                                       std::uint64_t seed) {
  validate(measure);
  validate_exponent(s);
  require(n >= 2, ErrorKind::TooFewPoints, "replicates need n >= 2");
  require(reps >= 1, ErrorKind::InvalidArgument, "reps must be >= 1");
  std::vector<double> values(reps);
  parallel_for_chunks(reps, 1, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t r = begin; r < end; ++r) {
      const Sample draw = sample(measure, n, derive_seed(seed, r));
      values[r] = discrete_energy(draw.cloud, s);
    }
  });
  return values;
}

CellStats summarize(std::size_t n, std::span<const double> values) {
  CellStats cell;
  cell.n = n;
  cell.values.assign(values.begin(), values.end());
  const double count = static_cast<double>(values.size());
  cell.mean = compensated_total(values) / count;
  CompensatedSum sq;
  for (double v : values) sq.add((v - cell.mean) * (v - cell.mean));
  const double var = values.size() > 1 ? sq.value() / (count - 1.0) : 0.0;
  cell.standard_error = std::sqrt(var) / std::sqrt(count);
  const double max = *std::max_element(values.begin(), values.end());
  cell.dispersion = max / median(cell.values);
  return cell;
}

ExperimentReport expectation_experiment(const MeasureSpec& measure, double s, std::size_t n, std::size_t reps,
                                        std::uint64_t seed, bool waive_oracle) {
  require(reps >= 30, ErrorKind::InvalidArgument, "expectation experiments need reps >= 30");
  ExperimentReport report;
  report.kind = "expectation";
  report.measure = measure;
  report.s = s;
  report.n_grid = {n};
  report.reps = reps;
  report.seed = seed;
  if (!waive_oracle) {
    const ReferenceEnergy ref = oracle_for(measure, s);
    report.oracle = ref.value;
    report.oracle_method = ref.method;
  }

  const std::uint64_t cseed = cell_seed(seed, 0);
  const auto values = replicate_energies(measure, s, n, reps, cseed);
  CellStats cell = summarize(n, values);
  cell.seed = cseed;
  if (report.oracle) {
    const double diff = cell.mean - *report.oracle;
    if (cell.standard_error > 0.0) cell.z_score = diff / cell.standard_error;
    else cell.z_score = diff == 0.0 ? 0.0 : std::copysign(kInfinity, diff);
  }
  report.cells.push_back(std::move(cell));
  return report;
}

ExperimentReport wlln_exceedance(const MeasureSpec& measure, double s, double eps,
                                 const std::vector<std::size_t>& n_grid, std::size_t reps, std::uint64_t seed) {
  require(std::isfinite(eps) && eps > 0.0, ErrorKind::InvalidArgument, "eps must be positive");
  require(n_grid.size() >= 3, ErrorKind::InvalidArgument, "n_grid needs at least 3 values");
  for (std::size_t j = 1; j < n_grid.size(); ++j)
    require(n_grid[j] > n_grid[j - 1], ErrorKind::InvalidArgument, "n_grid must be strictly ascending");
  require(reps >= 1, ErrorKind::InvalidArgument, "reps must be >= 1");
  const ReferenceEnergy ref = oracle_for(measure, s);
  require_finite_oracle(ref);

  ExperimentReport report;
  report.kind = "wlln";
  report.measure = measure;
  report.s = s;
  report.n_grid = n_grid;
  report.reps = reps;
  report.seed = seed;
  report.eps = eps;
  report.oracle = ref.value;
  report.oracle_method = ref.method;
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    const std::uint64_t cseed = cell_seed(seed, j);
    const auto values = replicate_energies(measure, s, n_grid[j], reps, cseed);
    CellStats cell = summarize(n_grid[j], values);
    cell.seed = cseed;
    std::size_t exceed = 0;
    for (double v : values) exceed += std::abs(v - ref.value) > eps ? 1 : 0;
    cell.exceedance_rate = static_cast<double>(exceed) / static_cast<double>(reps);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::vector<std::pair<std::size_t, double>> slln_path(const MeasureSpec& measure, double s, std::size_t n_max,
                                                      std::uint64_t seed) {
  require(n_max >= 100, ErrorKind::InvalidArgument, "slln_path needs n_max >= 100");
  const Sample draw = sample(measure, n_max, seed);
  const auto running = running_energy(draw.cloud, s, n_max);
  std::vector<std::pair<std::size_t, double>> path;
  path.reserve(running.size());
  for (std::size_t k = 0; k < running.size(); ++k) path.emplace_back(k + 2, running[k]);
  return path;
}

double sup_deviation(const std::vector<std::pair<std::size_t, double>>& path, double oracle, std::size_t n_lo,
                     std::size_t n_hi) {
  double sup = 0.0;
  for (const auto& [n, j] : path)
    if (n >= n_lo && n <= n_hi) sup = std::max(sup, std::abs(j - oracle));
  return sup;
}

}  // namespace riesz
