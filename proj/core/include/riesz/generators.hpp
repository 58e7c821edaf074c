#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riesz/point_cloud.hpp"

namespace riesz {

/// {m/(n+1) : m = 1..n} in R^1, ascending.
PointCloud grid_1d(std::size_t n);

/// The dyadic grid {i/2^k : 0 <= i < 2^k}^d, ordered so that the first
/// 2^{jd} points are exactly the level-j grid for every j <= k. Index t is
/// read in base 2^d; digit l supplies bit 2^{-(l+1)} of every axis, with
/// axis 0 taking the digit's high bit.
PointCloud lattice(std::size_t d, std::size_t k, const SizeCaps& caps = {});

struct CantorFactor {
  std::size_t m = 2;
  std::size_t n = 3;
  std::vector<std::size_t> kept;  // m strictly increasing indices in [0, n)
};

struct CantorSpec {
  std::vector<CantorFactor> factors;  // one per coordinate
  std::size_t level = 1;

  std::size_t dim() const noexcept { return factors.size(); }
};

/// m indices spread evenly over [0, n): round(i (n-1) / (m-1)).
std::vector<std::size_t> default_kept(std::size_t m, std::size_t n);
CantorFactor make_cantor_factor(std::size_t m, std::size_t n);

void validate(const CantorSpec& spec);

/// Endpoints of the surviving level-k intervals, product over factors.
/// Points appear in order of the first level j at which they belong to the
/// level-j set, lexicographically within a level.
PointCloud cantor_points(const CantorSpec& spec, const SizeCaps& caps = {});

/// Number of points of cantor_points(spec) that belong to some level j' <= j,
/// for j = 1..level. For nested selections (kept contains 0 and n-1) entry j
/// is the size of the level-j set and a prefix of the sequence.
std::vector<std::size_t> cantor_level_sizes(const CantorSpec& spec, const SizeCaps& caps = {});

/// sum_i ln(m_i) / ln(n_i).
double cantor_dimension(const CantorSpec& spec);

/// Points on the unit circle approximating, phase by phase, the measures
/// half-uniform plus half-uniform-on-a-semicircle whose centre advances by the
/// harmonic increments 1/p. points_per_phase caps each phase; a phase ends
/// early once the mass of the growing wedge overshoots its target and stops
/// improving.
PointCloud semicircle_phase_points(std::size_t num_phases, std::size_t points_per_phase);

/// Angular centre of the semicircle targeted by phase p (the harmonic sum H_p).
double semicircle_phase_centre(std::size_t phase) noexcept;

struct SemicirclePhases {
  PointCloud cloud;
  std::vector<std::size_t> phase_ends;  // cumulative point count after each phase
};
SemicirclePhases semicircle_phase_construction(std::size_t num_phases, std::size_t points_per_phase);

struct EnergyTargetSpec {
  double s = 1.0;
  std::vector<double> targets;
  double tolerance = 1e-9;
};

void validate(const EnergyTargetSpec& spec, std::size_t d);

struct EnergyCheckpoint {
  std::size_t n = 0;
  double target = 0.0;
  double achieved = 0.0;
};

struct EnergySequence {
  PointCloud cloud;
  std::vector<EnergyCheckpoint> checkpoints;
};

/// Inductive placement realising J_s(P_{n_k}) = e_k: x_1 at the origin, x_2 at
/// distance e_1^{-1/s}; each later target is hit either by sliding one new
/// point along a ray toward an extreme point, or, when the target is below
/// (n-1)/(n+1) times the current energy, by first appending far points.
/// Throws TargetUnreachable when bracketing fails or the tolerance is missed.
EnergySequence energy_sequence_points(const EnergyTargetSpec& spec, std::size_t d);

}  // namespace riesz
