#include <cmath>
#include <numeric>

#include "../oracles.hpp"
#include "riesz/energy.hpp"
#include "riesz/generators.hpp"
#include "riesz/random.hpp"
#include "riesz/stats.hpp"
#include "test_util.hpp"

using namespace riesz;
using testutil::error_kind;
using testutil::rel;

namespace {

double sample_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(cell_seed(5, 3) == derive_seed(5, 3));
  }

  TEST_CASE("replicates follow the per-rep seed rule") {
    const MeasureSpec line = UniformCube{1};
    const auto values = replicate_energies(line, 0.5, 30, 5, 99);
    for (std::size_t r = 0; r < 5; ++r) CHECK(values[r] == discrete_energy(sample(line, 30, derive_seed(99, r)).cloud, 0.5));
  }

  TEST_CASE("summary statistics") {
    const std::vector<double> v = {1.0, 2.0, 3.0, 10.0};
    const CellStats c = summarize(7, v);
    CHECK(c.n == 7);
    CHECK(c.mean == 4.0);
    CHECK(c.standard_error == doctest::Approx(sample_std(v) / 2.0));
    CHECK(c.dispersion == doctest::Approx(10.0 / 2.5));
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  }

  TEST_CASE("expectation on the circle") {
    const ExperimentReport r = expectation_experiment(UniformCircle{}, 0.5, 200, 500, 31);
    const double oracle_value = oracle::uniform_circle(0.5);
    REQUIRE(r.oracle.has_value());
    CHECK(rel(*r.oracle, oracle_value) < 1e-7);
    CHECK(r.oracle_method == "closed-form");
    const auto& cell = r.cells.front();
    MESSAGE("circle z = " << *cell.z_score);
    CHECK(std::abs(cell.mean - oracle_value) <= 4.0 * cell.standard_error);
    CHECK(cell.standard_error == doctest::Approx(sample_std(cell.values) / std::sqrt(500.0)).epsilon(1e-12));
  }

  TEST_CASE("s = 0 has mean one and zero error") {
    const ExperimentReport r = expectation_experiment(UniformCube{2}, 0.0, 50, 30, 1);
    CHECK(r.cells.front().mean == 1.0);
    CHECK(r.cells.front().standard_error == 0.0);
    CHECK(*r.cells.front().z_score == 0.0);
  }

  TEST_CASE("unbiased at every n") {
    for (std::size_t n : {10, 100, 1000}) {
      const ExperimentReport r = expectation_experiment(UniformCube{1}, 0.4, n, 200, 1000 + n);
      MESSAGE("n = " << n << ": z = " << *r.cells.front().z_score);
      CHECK(std::abs(*r.cells.front().z_score) <= 4.0);
    }
  }

  TEST_CASE("expectation preconditions") {
    CHECK(error_kind([] { expectation_experiment(UniformCube{1}, 0.5, 20, 29, 1); }) == ErrorKind::InvalidArgument);
    const MeasureSpec cantor = CantorProduct{{make_cantor_factor(2, 3)}};
    CHECK(error_kind([&] { expectation_experiment(cantor, 0.5, 20, 30, 1); }) == ErrorKind::OracleUnavailable);
    const ExperimentReport waived = expectation_experiment(cantor, 0.5, 20, 30, 1, true);
    CHECK_FALSE(waived.oracle.has_value());
    CHECK_FALSE(waived.cells.front().z_score.has_value());
  }

  TEST_CASE("reports are reproducible") {
    const auto a = wlln_exceedance(UniformCube{1}, 0.4, 0.1, {20, 40, 80}, 60, 8);
    const auto b = wlln_exceedance(UniformCube{1}, 0.4, 0.1, {20, 40, 80}, 60, 8);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(a.cells[j].values == b.cells[j].values);
      CHECK(a.cells[j].seed == cell_seed(8, j));
    }
  }

  TEST_CASE("exceedance edge cases") {
    const auto zero = wlln_exceedance(UniformCube{1}, 0.0, 1e-6, {10, 20, 40}, 40, 2);
    for (const auto& c : zero.cells) CHECK(*c.exceedance_rate == 0.0);
    const auto loose = wlln_exceedance(UniformCube{1}, 0.3, 100.0, {10, 20, 40}, 40, 2);
    for (const auto& c : loose.cells) CHECK(*c.exceedance_rate == 0.0);
    const auto mid = wlln_exceedance(UniformCube{1}, 0.4, 0.05, {10, 20, 40}, 40, 2);
    for (const auto& c : mid.cells) CHECK((*c.exceedance_rate >= 0.0 && *c.exceedance_rate <= 1.0));
  }

  TEST_CASE("exceedance preconditions") {
    CHECK(error_kind([] { wlln_exceedance(UniformCube{1}, 1.2, 0.1, {10, 20, 40}, 40, 2); }) ==
          ErrorKind::OracleUnavailable);
    CHECK(error_kind([] { wlln_exceedance(UniformCube{3}, 0.5, 0.1, {10, 20, 40}, 40, 2); }) ==
          ErrorKind::OracleUnavailable);
    CHECK(error_kind([] { wlln_exceedance(UniformCube{1}, 0.5, 0.1, {10, 20}, 40, 2); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { wlln_exceedance(UniformCube{1}, 0.5, 0.1, {10, 40, 20}, 40, 2); }) ==
          ErrorKind::InvalidArgument);
    CHECK(error_kind([] { wlln_exceedance(UniformCube{1}, 0.5, 0.0, {10, 20, 40}, 40, 2); }) ==
          ErrorKind::InvalidArgument);
  }

  TEST_CASE("standard error times sqrt(reps) stabilises when 2s is below the dimension") {
    const auto few = expectation_experiment(UniformCube{1}, 0.2, 100, 200, 3);
    const auto many = expectation_experiment(UniformCube{1}, 0.2, 100, 1600, 3);
    const double a = few.cells.front().standard_error * std::sqrt(200.0);
    const double b = many.cells.front().standard_error * std::sqrt(1600.0);
    MESSAGE("spread " << a << " vs " << b);
    CHECK(rel(a, b) < 0.2);
  }

  TEST_CASE("path at s = 0 is constant") {
    for (const auto& [n, j] : slln_path(UniformCube{2}, 0.0, 150, 5)) CHECK(j == 1.0);
  }

  TEST_CASE("path matches batch recomputation") {
    const MeasureSpec line = UniformCube{1};
    const auto path = slln_path(line, 0.6, 400, 9);
    REQUIRE(path.size() == 399);
    CHECK(path.front().first == 2);
    CHECK(path.back().first == 400);
    const PointCloud cloud = sample(line, 400, 9).cloud;
    for (std::size_t k = 0; k < path.size(); k += 37)
      CHECK(rel(path[k].second, discrete_energy(cloud.prefix(path[k].first), 0.6)) < 1e-10);
    CHECK(rel(path.back().second, oracle::energy(testutil::rows(cloud), 0.6)) < 1e-10);
    CHECK(error_kind([&] { slln_path(line, 0.6, 99, 9); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("path-wise tail deviations at s = 0.4") {
    const double oracle_value = 25.0 / 12.0;
    CHECK(oracle_value == doctest::Approx(oracle::uniform_interval(0.4)).epsilon(1e-9));
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto path = slln_path(UniformCube{1}, 0.4, 5000, seed);
      const double dev = sup_deviation(path, oracle_value, 3750, 5000);
      MESSAGE("seed " << seed << ": sup deviation " << dev);
      if (dev < 0.1) ++good;
    }
    CHECK(good >= 9);
  }

  TEST_CASE("sup deviation") {
    const std::vector<std::pair<std::size_t, double>> path = {{2, 5.0}, {3, 1.5}, {4, 0.5}, {5, 1.1}};
    CHECK(sup_deviation(path, 1.0, 3, 5) == 0.5);
    CHECK(sup_deviation(path, 1.0, 2, 5) == 4.0);
  }
}
