#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracles.hpp"
#include "riesz/energy.hpp"
#include "riesz/estimator.hpp"
#include "riesz/generators.hpp"
#include "riesz/measures.hpp"
#include "riesz/parallel.hpp"
#include "riesz/random.hpp"
#include "riesz/sets.hpp"
#include "riesz/stats.hpp"

using namespace riesz;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::vector<std::vector<double>> oracle_rows(const PointCloud& c) {
  std::vector<std::vector<double>> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i].assign(c.point(i).begin(), c.point(i).end());
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

template <class... T>
std::string fmt(const T&... parts) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << parts);
  return os.str();
}

Outcome expectation_identity() {
  constexpr double kSs = 0.5, kZ = 4.0;
  constexpr std::size_t kN = 200, kReps = 500;
  const double oracle_value = oracle::uniform_interval(kSs);
  const ExperimentReport r = expectation_experiment(UniformCube{1}, kSs, kN, kReps, 20240601);
  const CellStats& c = r.cells.front();
  const double z = (c.mean - oracle_value) / c.standard_error;
  Outcome o;
  o.pass = std::abs(oracle_value - 8.0 / 3.0) < 1e-9 && std::abs(z) <= kZ;
  o.detail = fmt("mean ", c.mean, ", oracle ", oracle_value, ", SE ", c.standard_error, ", z ", z);
  return o;
}

Outcome grid_bound() {
  Outcome o{true, "", {}};
  double worst = 0.0;
  for (double t : {0.25, 0.5, 0.75}) {
    for (std::size_t n : {10, 100, 1000, 10000}) {
      const double nn = static_cast<double>(n);
      const double bound = 2.0 * (nn + 1) * (nn + 1) / (nn * (nn - 1) * (1 - t) * (2 - t));
      const double j = discrete_energy(grid_1d(n), t);
      worst = std::max(worst, j / bound);
      if (!(j <= bound)) {
        o.pass = false;
        o.notes.push_back(fmt("t ", t, ", n ", n, ": J ", j, " > bound ", bound));
      }
    }
  }
  o.detail = fmt("largest J / bound ", worst);
  return o;
}

Outcome cantor_dimension_recovery() {
  constexpr double kTol1 = 0.07, kTol2 = 0.1;
  const CantorSpec line{{make_cantor_factor(2, 3)}, 8};
  const CantorSpec square{{make_cantor_factor(2, 3), make_cantor_factor(2, 3)}, 5};
  const double s1 = dimension_estimate(cantor_points(line), exponent_grid(0.1, 1.0, 0.05),
                                       cantor_level_sizes(line)).s_hat;
  const double s2 = dimension_estimate(cantor_points(square), exponent_grid(0.1, 2.0, 0.05),
                                       cantor_level_sizes(square)).s_hat;
  const double d1 = cantor_dimension(line), d2 = cantor_dimension(square);
  Outcome o;
  o.pass = std::abs(s1 - d1) <= kTol1 && std::abs(s2 - d2) <= kTol2;
  o.detail = fmt("(2,3) level 8: s_hat ", s1, " vs ", d1, "; (2,3)x(2,3) level 5: s_hat ", s2, " vs ", d2);
  return o;
}

Outcome ball_identity() {
  constexpr double kSs = 0.5, kTol = 0.02;
  const BallMeasureParams params{kSs, 1.0};
  Outcome o;
  std::vector<double> gaps;
  double gap64 = 0.0;
  for (std::size_t n : {16, 32, 64, 128}) {
    const PointCloud pts = grid_1d(n);
    const BallEnergy numeric = ball_energy_numeric(pts, params);
    const BallPrediction pred = ball_energy_predicted(pts, params);
    const double gap = rel(numeric.total, pred.value);
    const double exact_self = pred.discrete_part + numeric.self;
    o.notes.push_back(fmt("n ", n, ": numeric ", numeric.total, ", predicted ", pred.value, ", gap ", gap,
                          "; gap against the exact self term ", rel(numeric.total, exact_self)));
    gaps.push_back(gap);
    if (n == 64) gap64 = gap;
  }
  bool shrinking = true;
  for (std::size_t k = 1; k < gaps.size(); ++k) shrinking = shrinking && gaps[k] < gaps[k - 1];
  o.pass = gap64 <= kTol && shrinking;
  o.detail = fmt("gap at n = 64 ", gap64, " (limit ", kTol, "), shrinking ", shrinking ? "yes" : "no");
  return o;
}

Outcome variance_boundary() {
  constexpr double kLowLimit = 3.0, kRatio = 5.0;
  constexpr std::size_t kReps = 200;
  const std::vector<double> s = {0.3, 0.7};
  Outcome o{true, "", {}};
  double low1600 = 0.0, high1600 = 0.0;
  for (std::size_t n : {100, 400, 1600}) {
    const auto scores = variance_blowup_scan(UniformCube{1}, s, n, kReps, 31337 + n);
    o.notes.push_back(fmt("n ", n, ": score(0.3) ", scores[0].score, ", score(0.7) ", scores[1].score));
    if (!(scores[0].score < kLowLimit)) o.pass = false;
    if (n == 1600) low1600 = scores[0].score, high1600 = scores[1].score;
  }
  const double ratio = high1600 / low1600;
  if (!(ratio >= kRatio)) o.pass = false;
  o.notes.push_back(fmt("excess ratio (score(0.7) - 1) / (score(0.3) - 1) at n = 1600: ",
                        (high1600 - 1.0) / (low1600 - 1.0)));
  o.detail = fmt("score(0.3) < ", kLowLimit, " at every n; ratio at n = 1600 ", ratio, " (need >= ", kRatio, ")");
  return o;
}

Outcome wlln() {
  constexpr double kFinal = 0.05;
  const ExperimentReport r = wlln_exceedance(UniformCube{1}, 0.4, 0.1, {50, 200, 800}, 400, 4242);
  std::vector<double> rates;
  for (const auto& c : r.cells) rates.push_back(*c.exceedance_rate);
  bool nonincreasing = true;
  for (std::size_t k = 1; k < rates.size(); ++k) nonincreasing = nonincreasing && rates[k] <= rates[k - 1];
  Outcome o;
  o.pass = nonincreasing && rates.back() < kFinal;
  o.detail = fmt("rates ", rates[0], ", ", rates[1], ", ", rates[2]);
  return o;
}

Outcome counting_measure() {
  constexpr double kTol = 0.05;
  const double target = oracle::uniform_interval(0.5);
  std::vector<double> errors;
  Outcome o;
  for (std::size_t k = 8; k <= 12; ++k) {
    errors.push_back(rel(discrete_energy(lattice(1, k), 0.5), target));
    o.notes.push_back(fmt("k ", k, ": relative error ", errors.back()));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < errors.size(); ++k) decreasing = decreasing && errors[k] < errors[k - 1];
  o.pass = decreasing && errors.back() < kTol;
  o.detail = fmt("relative error at k = 12 ", errors.back(), ", decreasing ", decreasing ? "yes" : "no");
  return o;
}

Outcome constructor() {
  constexpr double kTol = 1e-6;
  const std::vector<double> targets = {5, 3, 7, 2};
  const EnergySequence seq = energy_sequence_points({1.0, targets, 1e-9}, 2);
  Outcome o{seq.checkpoints.size() == targets.size(), "", {}};
  double worst = 0.0;
  for (std::size_t k = 0; k < seq.checkpoints.size(); ++k) {
    const auto& cp = seq.checkpoints[k];
    const double err = rel(oracle::energy(oracle_rows(seq.cloud.prefix(cp.n)), 1.0), targets[k]);
    worst = std::max(worst, err);
    o.notes.push_back(fmt("target ", targets[k], " at n ", cp.n, ": relative error ", err));
  }
  o.pass = o.pass && worst <= kTol;
  o.detail = fmt("largest relative error ", worst);
  return o;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

Outcome set_counts() {
  Outcome o{true, "", {}};
  const ValueSet grid = distance_set(PointCloud(2, {0, 0, 0, 1, 0, 2, 1, 0, 1, 1, 1, 2, 2, 0, 2, 1, 2, 2}));
  std::vector<std::vector<long long>> lattice_pts;
  for (long long i = 0; i < 3; ++i)
    for (long long j = 0; j < 3; ++j) lattice_pts.push_back({i, j});
  const std::size_t brute = oracle::integer_distance_count(lattice_pts);
  if (grid.count != 5 || brute != 5) o.pass = false;
  std::size_t line_bad = 0;
  for (std::size_t n = 2; n <= 100; ++n)
    if (distance_set(grid_1d(n)).count != n - 1) ++line_bad;
  if (line_bad) o.pass = false;

  constexpr int kTrials = 10000;
  Rng rng(907);
  int violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t d = 1 + uniform_below(rng, 3);
    const double alpha = uniform01(rng);
    std::vector<double> x(d), y(d), u(d), v(d);
    for (auto& c : x) c = uniform01(rng);
    for (auto& c : y) c = uniform01(rng);
    for (auto* w : {&u, &v}) {
      double norm = 0.0;
      for (auto& c : *w) c = 2.0 * uniform01(rng) - 1.0, norm += c * c;
      const double scale = alpha * uniform01(rng) / std::sqrt(norm);
      for (auto& c : *w) c *= scale;
    }
    std::vector<double> xu(d), yv(d);
    for (std::size_t k = 0; k < d; ++k) xu[k] = x[k] + u[k], yv[k] = y[k] + v[k];
    const double change = std::abs(dot(xu, yv) - dot(x, y));
    worst = std::max(worst, change / alpha);
    if (change > 3.0 * alpha) ++violations;
  }
  if (violations) o.pass = false;
  o.detail = fmt("3x3 grid count ", grid.count, " (brute force ", brute, "); grid_1d mismatches ", line_bad,
                 "; 3 alpha violations ", violations, " of ", kTrials, " (d in 1..3, largest change / alpha ", worst,
                 ")");
  return o;
}

Outcome determinism() {
  constexpr double kTol = 1e-10;
  Rng rng(1234);
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  double worst_parallel = 0.0;
  for (int c = 0; c < 10000; ++c) {
    const std::size_t d = 1 + uniform_below(rng, 3);
    const std::size_t n = 2 + uniform_below(rng, c % 100 == 0 ? 3000 : 200);
    std::vector<double> coords(n * d);
    for (auto& x : coords) x = uniform01(rng);
    const PointCloud cloud(d, coords);
    const double s = 0.1 + 1.8 * uniform01(rng);
    set_max_threads(1);
    const double serial = discrete_energy(cloud, s);
    set_max_threads(hw);
    const double parallel = discrete_energy(cloud, s);
    worst_parallel = std::max(worst_parallel, rel(parallel, serial));
  }
  set_max_threads(0);

  double worst_path = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MeasureSpec line = UniformCube{1};
    const auto path = slln_path(line, 0.6, 1000, seed);
    const PointCloud cloud = sample(line, 1000, seed).cloud;
    for (const auto& [n, j] : path) worst_path = std::max(worst_path, rel(j, discrete_energy(cloud.prefix(n), 0.6)));
  }
  Outcome o;
  o.pass = worst_parallel <= kTol && worst_path <= kTol;
  o.detail = fmt("parallel vs serial worst ", worst_parallel, " over 10000 clouds; incremental vs batch worst ",
                 worst_path);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "expectation identity", 30, expectation_identity},
      {2, "grid energy bound", 60, grid_bound},
      {3, "Cantor dimension recovery", 300, cantor_dimension_recovery},
      {4, "ball-measure energy", 120, ball_identity},
      {5, "variance boundary", 120, variance_boundary},
      {6, "weak law exceedance", 120, wlln},
      {7, "counting-measure convergence", 60, counting_measure},
      {8, "energy-sequence constructor", 10, constructor},
      {9, "set counts and dot-product perturbation", 30, set_counts},
      {10, "determinism and incremental equivalence", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("%s %2d %s: %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), seconds, c.budget_seconds);
    for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
