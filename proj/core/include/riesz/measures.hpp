#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "riesz/generators.hpp"
#include "riesz/point_cloud.hpp"

namespace riesz {

struct UniformCube {
  std::size_t d = 1;
};
struct UniformCircle {};
/// Self-similar limit measure of a CantorSpec (its level is ignored).
struct CantorProduct {
  std::vector<CantorFactor> factors;
};
/// Half the uniform measure on the unit circle plus half the uniform
/// measure on the arc (t - pi/2, t + pi/2).
struct RotatingSemicircle {
  double t = 0.0;
};
struct Empirical {
  PointCloud cloud;
};

using MeasureSpec = std::variant<UniformCube, UniformCircle, CantorProduct, RotatingSemicircle, Empirical>;

std::string variant_name(const MeasureSpec& measure);
std::size_t measure_dim(const MeasureSpec& measure);
void validate(const MeasureSpec& measure);

struct Sample {
  PointCloud cloud;
  std::size_t perturbed = 0;  // Empirical only: duplicate draws that were nudged apart
};

struct SampleOptions {
  std::size_t cantor_depth = 30;  // base-n digits, further capped by double precision
};

/// count IID draws, bit-reproducible for a given seed.
Sample sample(const MeasureSpec& measure, std::size_t count, std::uint64_t seed, const SampleOptions& options = {});

/// Base-n digits used per Cantor coordinate: min(requested, floor(53 ln 2 / ln n)).
std::size_t cantor_sample_depth(std::size_t n, std::size_t requested = 30);

struct ReferenceEnergy {
  double value = 0.0;  // kInfinity when the energy diverges
  std::string method;  // "closed-form" | "quadrature"
};

/// I_s(mu) for UniformCube(1), UniformCube(2) and UniformCircle; throws
/// UnsupportedVariant for the rest.
ReferenceEnergy reference_energy(const MeasureSpec& measure, double s);
bool has_reference_energy(const MeasureSpec& measure) noexcept;

/// Surface area of the unit sphere in R^d and volume of the unit ball
/// (sigma_1 = 2, omega_1 = 2).
double unit_sphere_area(std::size_t d);
double unit_ball_volume(std::size_t d);

/// I_s of the uniform probability measure on the unit ball of R^d, d in {1, 2}.
double uniform_ball_self_energy(std::size_t d, double s);

struct BallMeasureParams {
  double s = 0.5;
  double c = 1.0;
};

/// Radius c n^{-1/s} of every ball.
double ball_radius(const BallMeasureParams& params, std::size_t n);

struct BallEnergyOptions {
  std::size_t max_quadrature_pairs = 200'000;  // distinct centre distances before Monte Carlo
  bool allow_monte_carlo = false;              // permits d >= 3
  std::size_t monte_carlo_samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
};

struct BallEnergy {
  double self = 0.0;   // same-ball contribution
  double cross = 0.0;  // distinct-ball contribution
  double total = 0.0;
  std::string method;  // "quadrature" | "monte-carlo" | "closed-form"
  double standard_error = 0.0;
};

/// I_s(kappa_{n,c}) of the uniform measure on the union of the n balls.
/// Throws HypothesisViolated when two balls overlap and UnsupportedDimension
/// for d >= 3 unless Monte Carlo is allowed.
BallEnergy ball_energy_numeric(const PointCloud& cloud, const BallMeasureParams& params,
                               const BallEnergyOptions& options = {});

struct BallHypothesis {
  double min_distance = 0.0;
  double epsilon_max = 0.0;   // largest eps with min_distance > 2 c n^{-1/s + eps}
  double n_threshold = 0.0;   // 2^{s+1}
  bool separated = false;
  bool n_large_enough = false;
  std::size_t closest_i = 0, closest_j = 0;
};

BallHypothesis ball_hypothesis(const PointCloud& cloud, const BallMeasureParams& params);

struct BallPrediction {
  double value = 0.0;
  double discrete_part = 0.0;  // ((n-1)/n) J_s(P_n)
  double self_constant = 0.0;  // sigma_d 2^{d-s} / (omega_d c^s (d-s))
  BallHypothesis hypothesis;
};

/// ((n-1)/n) J_s(P_n) + sigma_d 2^{d-s} / (omega_d c^s (d-s)). Requires 0 < s < d,
/// the separation hypothesis and n > 2^{s+1}; throws HypothesisViolated.
BallPrediction ball_energy_predicted(const PointCloud& cloud, const BallMeasureParams& params);

}  // namespace riesz
