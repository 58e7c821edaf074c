#include <limits>
#include <numbers>
#include <sstream>

#include "../oracles.hpp"
#include "riesz/energy.hpp"
#include "riesz/generators.hpp"
#include "riesz/parallel.hpp"
#include "test_util.hpp"

using namespace riesz;
using testutil::error_kind;
using testutil::rel;

TEST_SUITE("core_energy") {
  TEST_CASE("two points at distance one half") {
    const PointCloud cloud(1, {0.0, 0.5});
    CHECK(discrete_energy(cloud, 1.0) == 2.0);
    CHECK(discrete_energy(cloud, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }

  TEST_CASE("s = 0 gives exactly one") {
    for (std::uint64_t seed : {1, 2, 3}) CHECK(discrete_energy(testutil::random_cloud(57, 3, seed), 0.0) == 1.0);
  }

  TEST_CASE("3x3 integer grid matches a brute-force double loop") {
    const PointCloud grid = testutil::integer_grid(3);
    for (double s : {0.5, 1.0, 1.7, 2.0}) CHECK(rel(discrete_energy(grid, s), oracle::energy(testutil::rows(grid), s)) < 1e-14);
  }

  TEST_CASE("random clouds match the brute-force oracle") {
    for (std::size_t d : {1, 2, 3}) {
      const PointCloud cloud = testutil::random_cloud(300, d, 40 + d);
      for (double s : {0.3, 1.0, 2.5}) CHECK(rel(discrete_energy(cloud, s), oracle::energy(testutil::rows(cloud), s)) < 1e-12);
    }
  }

  TEST_CASE("discrete_energies agrees with single calls") {
    const PointCloud cloud = testutil::random_cloud(200, 2, 9);
    const std::vector<double> s = {0.0, 0.5, 1.0, 2.0, 3.3};
    const auto many = discrete_energies(cloud, s);
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(many[k] == discrete_energy(cloud, s[k]));
  }

  TEST_CASE("error paths") {
    CHECK(error_kind([] { discrete_energy(PointCloud(1, {0.3}), 1.0); }) == ErrorKind::TooFewPoints);
    CHECK(error_kind([] { discrete_energy(PointCloud(1, {0.0, 1.0}), -0.1); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { PointCloud(2, {0.0, 1.0, 0.0, 1.0}); }) == ErrorKind::DuplicatePoints);
    CHECK(error_kind([] { PointCloud(1, {0.0, std::numeric_limits<double>::quiet_NaN()}); }) ==
          ErrorKind::NonFiniteCoordinate);
    CHECK(error_kind([] { PointCloud(1, {0.0, std::numeric_limits<double>::infinity()}); }) ==
          ErrorKind::NonFiniteCoordinate);
  }

  TEST_CASE("energy_profile examples") {
    const PointCloud g4 = grid_1d(4);
    const double s0[] = {0.0};
    const std::size_t n3[] = {2, 3, 4};
    const EnergyProfile p = energy_profile(g4, s0, n3);
    CHECK(p.values[0] == std::vector<double>{1.0, 1.0, 1.0});

    const PointCloud g100 = grid_1d(100);
    const double s5[] = {0.5};
    const std::size_t n100[] = {100};
    CHECK(energy_profile(g100, s5, n100).at(0, 0) == discrete_energy(g100, 0.5));

    CantorSpec spec{{make_cantor_factor(2, 3)}, 5};
    const PointCloud cantor = cantor_points(spec);
    const std::size_t ns[] = {16, 32, 64};
    const EnergyProfile cp = energy_profile(cantor, s5, ns);
    for (std::size_t j = 0; j < 3; ++j) CHECK(rel(cp.at(0, j), discrete_energy(cantor.prefix(ns[j]), 0.5)) < 1e-12);
  }

  TEST_CASE("energy_profile entries are nonnegative and nondecreasing in s for diameter <= 1") {
    const PointCloud cloud = testutil::random_cloud(400, 2, 5, 0.7);
    const std::vector<double> s = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
    const std::vector<std::size_t> n = {10, 50, 100, 400};
    const EnergyProfile p = energy_profile(cloud, s, n);
    for (std::size_t j = 0; j < n.size(); ++j) {
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(p.at(i, j) >= 0.0);
      for (std::size_t i = 1; i < s.size(); ++i) CHECK(p.at(i, j) >= p.at(i - 1, j));
    }
  }

  TEST_CASE("energy_profile rejects unsorted or oversized grids") {
    const PointCloud cloud = grid_1d(10);
    const double s[] = {0.5};
    const double bad_s[] = {1.0, 0.5};
    const std::size_t big[] = {11};
    const std::size_t unsorted[] = {5, 4};
    CHECK_THROWS_AS(energy_profile(cloud, s, big), Error);
    CHECK_THROWS_AS(energy_profile(cloud, s, unsorted), Error);
    const std::size_t ok[] = {5};
    CHECK_THROWS_AS(energy_profile(cloud, bad_s, ok), Error);
  }

  TEST_CASE("running_energy equals batch recomputation at every prefix") {
    const PointCloud cloud = testutil::random_cloud(300, 2, 17);
    const auto run = running_energy(cloud, 0.8, 300);
    REQUIRE(run.size() == 299);
    for (std::size_t n = 2; n <= 300; n += 7) CHECK(rel(run[n - 2], discrete_energy(cloud.prefix(n), 0.8)) < 1e-10);
    CHECK(run.back() == discrete_energy(cloud, 0.8));
  }

  TEST_CASE("riesz_potential_discrete") {
    const PointCloud two(1, {0.0, 1.0});
    const double mid[] = {0.5};
    const double end[] = {0.0};
    CHECK(riesz_potential_discrete(two, mid, 1.0) == 2.0);
    CHECK(riesz_potential_discrete(two, end, 1.0) == std::numeric_limits<double>::infinity());
    const PointCloud grid = testutil::integer_grid(3);
    const std::vector<double> x = {10.0, 10.0};
    CHECK(rel(riesz_potential_discrete(grid, x, 2.0), oracle::potential(testutil::rows(grid), x, 2.0)) < 1e-14);
    CHECK(error_kind([&] { riesz_potential_discrete(grid, mid, 1.0); }) == ErrorKind::DimensionMismatch);
  }

  TEST_CASE("cutoff shape") {
    CHECK(cutoff(0.0) == 1.0);
    CHECK(cutoff(1.0) == 1.0);
    CHECK(cutoff(1.5) == doctest::Approx(0.5));
    CHECK(cutoff(2.0) == 0.0);
    CHECK(cutoff(7.0) == 0.0);
    for (double r = 1.0; r < 2.0; r += 0.01) CHECK(cutoff(r + 0.01) <= cutoff(r));
  }

  TEST_CASE("truncated_energy examples") {
    const PointCloud cloud(1, {0.0, 0.5});
    CHECK(truncated_energy(cloud, 1.0, 0.2) == 1.0);
    CHECK(truncated_energy(cloud, 1.0, 2.0) == 0.0);
    CHECK(truncated_energy(cloud, 1.0, 5.0) == 0.0);

    const PointCloud g8 = grid_1d(8);
    const double limit = 7.0 / 8.0 * discrete_energy(g8, 0.5);
    double previous = std::abs(truncated_energy(g8, 0.5, 1.0) - limit);
    for (double R : {0.1, 0.01}) {
      const double gap = std::abs(truncated_energy(g8, 0.5, R) - limit);
      CHECK(gap <= previous);
      previous = gap;
    }
    CHECK(previous < 1e-14);
  }

  TEST_CASE("truncated_energy is exact once R is below half the minimum distance") {
    const PointCloud cloud = testutil::random_cloud(60, 2, 3);
    double dmin = 1e9;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      for (std::size_t j = i + 1; j < cloud.size(); ++j) dmin = std::min(dmin, distance(cloud.point(i), cloud.point(j)));
    const double n = 60.0;
    CHECK(rel(truncated_energy(cloud, 1.2, 0.49 * dmin), (n - 1) / n * discrete_energy(cloud, 1.2)) < 1e-12);
  }

  TEST_CASE("scaling law") {
    const PointCloud cloud = testutil::random_cloud(150, 3, 11);
    for (double lambda : {1e-3, 0.5, 7.0, 1e4})
      for (double s : {0.4, 1.0, 2.0, 2.9})
        CHECK(rel(discrete_energy(cloud.scaled(lambda), s), std::pow(lambda, -s) * discrete_energy(cloud, s)) < 1e-12);
  }

  TEST_CASE("rigid-motion invariance") {
    const PointCloud cloud = testutil::random_cloud(150, 2, 12);
    const double th = 0.83;
    const double rot[] = {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
    const double shift[] = {-3.5, 12.25};
    const PointCloud moved = cloud.transformed(rot).translated(shift);
    for (double s : {0.5, 1.0, 1.9}) CHECK(rel(discrete_energy(moved, s), discrete_energy(cloud, s)) < 1e-10);

    const PointCloud c3 = testutil::random_cloud(100, 3, 13);
    const double flip[] = {0, 1, 0, 0, 0, 1, 1, 0, 0};
    CHECK(rel(discrete_energy(c3.transformed(flip), 2.2), discrete_energy(c3, 2.2)) < 1e-10);
  }

  TEST_CASE("monotone in s when the diameter is at most one") {
    const PointCloud cloud = testutil::random_cloud(120, 2, 14, 0.7);
    double prev = 0.0;
    for (double s = 0.0; s <= 3.0; s += 0.125) {
      const double j = discrete_energy(cloud, s);
      CHECK(j >= prev);
      prev = j;
    }
  }

  TEST_CASE("results are bit-identical at every thread count") {
    const PointCloud cloud = testutil::random_cloud(1500, 2, 15);
    const std::vector<double> s = {0.3, 1.0, 2.4};
    const std::vector<std::size_t> n = {100, 700, 1500};
    set_max_threads(1);
    const auto serial = discrete_energies(cloud, s);
    const auto serial_profile = energy_profile(cloud, s, n).values;
    for (unsigned t : {2u, 3u, 8u, 0u}) {
      set_max_threads(t);
      CHECK(discrete_energies(cloud, s) == serial);
      CHECK(energy_profile(cloud, s, n).values == serial_profile);
    }
    set_max_threads(0);
    const double naive = oracle::energy(testutil::rows(cloud), 1.0);
    CHECK(rel(serial[1], naive) < 1e-10);
  }

  TEST_CASE("CSV round trip keeps every bit") {
    const PointCloud cloud = testutil::random_cloud(50, 3, 16);
    std::stringstream io;
    write_points_csv(io, cloud);
    const PointCloud back = read_points_csv(io);
    CHECK(back.dim() == 3);
    CHECK(std::vector<double>(back.coords().begin(), back.coords().end()) ==
          std::vector<double>(cloud.coords().begin(), cloud.coords().end()));
  }

  TEST_CASE("CSV reader errors") {
    std::istringstream ragged("0,1\n2\n");
    CHECK(error_kind([&] { read_points_csv(ragged); }) == ErrorKind::DimensionMismatch);
    std::istringstream text("0,abc\n");
    CHECK(error_kind([&] { read_points_csv(text); }) == ErrorKind::ParseError);
    std::istringstream header("# dim=2\n0,1,2\n");
    CHECK_THROWS_AS(read_points_csv(header), Error);
  }
}
