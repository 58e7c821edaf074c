#include "riesz/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/random.hpp"
#include "riesz/summation.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double tanh_sinh_integral(const auto& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, kQuadTolerance);
}

double gauss_kronrod_integral(const auto& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kQuadTolerance);
}

// Area of the intersection of two unit disks whose centres are r apart.
double disk_overlap(double r) noexcept {
  if (r >= 2.0) return 0.0;
  return 2.0 * std::acos(r / 2.0) - (r / 2.0) * std::sqrt(4.0 - r * r);
}

double unit_square_energy(double s) {
  const double head = tanh_sinh_integral(
      [s](double r) { return 2.0 * std::pow(r, 1.0 - s) * (kPi - 4.0 * r + r * r); }, 0.0, 1.0);
  const double tail = tanh_sinh_integral(
      [s](double r) {
        const double density =
            2.0 * r * (4.0 * std::sqrt(r * r - 1.0) - (r * r + 2.0 - kPi) - 4.0 * std::acos(1.0 / r));
        return density * std::pow(r, -s);
      },
      1.0, std::sqrt(2.0));
  return head + tail;
}

// Mean of |L e_1 + w|^{-s} over the difference w of two independent uniform
// points of a radius-rho ball, for L > 2 rho.
double ball_pair_kernel(std::size_t d, double L, double rho, double s) {
  if (d == 1) {
    const double h = 2.0 * rho;
    return gauss_kronrod_integral(
        [&](double v) { return (1.0 - v) * (std::pow(L + h * v, -s) + std::pow(L - h * v, -s)); }, 0.0, 1.0);
  }
  auto ring_mean = [&](double r) {
    return gauss_kronrod_integral(
               [&](double theta) { return std::pow(L * L + r * r + 2.0 * L * r * std::cos(theta), -s / 2.0); }, 0.0,
               kPi) /
           kPi;
  };
  return gauss_kronrod_integral([&](double q) { return (2.0 * q / kPi) * disk_overlap(q) * ring_mean(rho * q); },
                                0.0, 2.0);
}

double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

void uniform_in_ball(Rng& rng, std::size_t d, std::span<double> out) {
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& c : out) {
      c = standard_normal(rng);
      norm += c * c;
    }
  } while (norm == 0.0);
  const double radius = std::pow(uniform01(rng), 1.0 / static_cast<double>(d)) / std::sqrt(norm);
  for (auto& c : out) c *= radius;
}

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanAndError mean_and_error(std::span<const double> values) {
  const double count = static_cast<double>(values.size());
  const double mean = compensated_total(values) / count;
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double var = values.size() > 1 ? sq.value() / (count - 1.0) : 0.0;
  return {mean, std::sqrt(var / count)};
}

}  // namespace

std::string variant_name(const MeasureSpec& measure) {
  return std::visit(Overloaded{
                        [](const UniformCube&) { return std::string("UniformCube"); },
                        [](const UniformCircle&) { return std::string("UniformCircle"); },
                        [](const CantorProduct&) { return std::string("CantorProduct"); },
                        [](const RotatingSemicircle&) { return std::string("RotatingSemicircle"); },
                        [](const Empirical&) { return std::string("Empirical"); },
                    },
                    measure);
}

std::size_t measure_dim(const MeasureSpec& measure) {
  return std::visit(Overloaded{
                        [](const UniformCube& m) { return m.d; },
                        [](const UniformCircle&) { return std::size_t{2}; },
                        [](const CantorProduct& m) { return m.factors.size(); },
                        [](const RotatingSemicircle&) { return std::size_t{2}; },
                        [](const Empirical& m) { return m.cloud.dim(); },
                    },
                    measure);
}

void validate(const MeasureSpec& measure) {
  std::visit(Overloaded{
                 [](const UniformCube& m) { require(m.d >= 1, ErrorKind::InvalidArgument, "UniformCube needs d >= 1"); },
                 [](const UniformCircle&) {},
                 [](const CantorProduct& m) { validate(CantorSpec{m.factors, 1}); },
                 [](const RotatingSemicircle& m) {
                   require(std::isfinite(m.t), ErrorKind::InvalidArgument, "phase must be finite");
                 },
                 [](const Empirical& m) {
                   require(!m.cloud.empty(), ErrorKind::TooFewPoints, "Empirical measure needs a nonempty cloud");
                 },
             },
             measure);
}

std::size_t cantor_sample_depth(std::size_t n, std::size_t requested) {
  const auto limit = static_cast<std::size_t>(std::floor(53.0 * std::log(2.0) / std::log(static_cast<double>(n))));
  return std::max<std::size_t>(1, std::min(requested, limit));
}

Sample sample(const MeasureSpec& measure, std::size_t count, std::uint64_t seed, const SampleOptions& options) {
  validate(measure);
  require(count >= 1, ErrorKind::InvalidArgument, "sample count must be >= 1");
  Rng rng(seed);
  const std::size_t d = measure_dim(measure);
  std::vector<double> coords(count * d);
  Sample out{PointCloud(1, {0.0}), 0};

  std::visit(
      Overloaded{
          [&](const UniformCube&) {
            for (auto& c : coords) c = uniform01(rng);
          },
          [&](const UniformCircle&) {
            for (std::size_t i = 0; i < count; ++i) {
              const double angle = 2.0 * kPi * uniform01(rng);
              coords[2 * i] = std::cos(angle);
              coords[2 * i + 1] = std::sin(angle);
            }
          },
          [&](const RotatingSemicircle& m) {
            for (std::size_t i = 0; i < count; ++i) {
              const bool uniform_half = uniform01(rng) < 0.5;
              const double u = uniform01(rng);
              const double angle = uniform_half ? 2.0 * kPi * u : m.t + kPi * (u - 0.5);
              coords[2 * i] = std::cos(angle);
              coords[2 * i + 1] = std::sin(angle);
            }
          },
          [&](const CantorProduct& m) {
            std::vector<std::size_t> depth(d);
            std::vector<double> denom(d);
            for (std::size_t a = 0; a < d; ++a) {
              depth[a] = cantor_sample_depth(m.factors[a].n, options.cantor_depth);
              denom[a] = std::pow(static_cast<double>(m.factors[a].n), static_cast<double>(depth[a]));
            }
            auto draw = [&](std::span<double> point) {
              for (std::size_t a = 0; a < d; ++a) {
                const auto& f = m.factors[a];
                std::uint64_t numer = 0;
                for (std::size_t l = 0; l < depth[a]; ++l) numer = numer * f.n + f.kept[uniform_below(rng, f.m)];
                point[a] = static_cast<double>(numer) / denom[a];
              }
            };
            // The depth-truncated measure is atomic; colliding draws are redrawn.
            for (std::size_t i = 0; i < count; ++i) draw(std::span<double>(coords).subspan(i * d, d));
            for (int pass = 0; pass < 64; ++pass) {
              std::vector<std::size_t> order(count);
              for (std::size_t i = 0; i < count; ++i) order[i] = i;
              auto row = [&](std::size_t i) { return std::span<const double>(coords).subspan(i * d, d); };
              std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                auto ra = row(a), rb = row(b);
                return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end()) ||
                       (std::equal(ra.begin(), ra.end(), rb.begin()) && a < b);
              });
              bool clean = true;
              for (std::size_t k = 1; k < count; ++k) {
                auto ra = row(order[k - 1]), rb = row(order[k]);
                if (std::equal(ra.begin(), ra.end(), rb.begin())) {
                  draw(std::span<double>(coords).subspan(order[k] * d, d));
                  ++out.perturbed;
                  clean = false;
                }
              }
              if (clean) break;
            }
          },
          [&](const Empirical& m) {
            const std::size_t source = m.cloud.size();
            const double step = 1e-12 * (m.cloud.extent() > 0.0 ? m.cloud.extent() : 1.0);
            std::vector<std::size_t> uses(source, 0);
            for (std::size_t i = 0; i < count; ++i) {
              const std::size_t pick = uniform_below(rng, source);
              auto p = m.cloud.point(pick);
              std::copy(p.begin(), p.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * d));
              if (uses[pick]++ > 0) {
                std::vector<double> dir(d);
                double norm = 0.0;
                do {
                  norm = 0.0;
                  for (auto& c : dir) {
                    c = standard_normal(rng);
                    norm += c * c;
                  }
                } while (norm == 0.0);
                const double shift = step * static_cast<double>(uses[pick] - 1) / std::sqrt(norm);
                for (std::size_t a = 0; a < d; ++a) coords[i * d + a] += shift * dir[a];
                ++out.perturbed;
              }
            }
          },
      },
      measure);

  out.cloud = PointCloud(d, std::move(coords));
  return out;
}

bool has_reference_energy(const MeasureSpec& measure) noexcept {
  if (const auto* cube = std::get_if<UniformCube>(&measure)) return cube->d == 1 || cube->d == 2;
  return std::holds_alternative<UniformCircle>(measure);
}

ReferenceEnergy reference_energy(const MeasureSpec& measure, double s) {
  validate_exponent(s);
  require(has_reference_energy(measure), ErrorKind::UnsupportedVariant,
          "no reference energy for " + variant_name(measure));
  if (const auto* cube = std::get_if<UniformCube>(&measure)) {
    if (cube->d == 1) {
      if (s >= 1.0) return {kInfinity, "closed-form"};
      return {2.0 / ((1.0 - s) * (2.0 - s)), "closed-form"};
    }
    if (s == 0.0) return {1.0, "closed-form"};
    if (s >= 2.0) return {kInfinity, "closed-form"};
    return {unit_square_energy(s), "quadrature"};
  }
  if (s >= 1.0) return {kInfinity, "closed-form"};
  const double g = std::tgamma(1.0 - s / 2.0);
  return {std::tgamma(1.0 - s) / (g * g), "closed-form"};
}

double unit_sphere_area(std::size_t d) {
  require(d >= 1, ErrorKind::InvalidArgument, "dimension must be >= 1");
  if (d == 1) return 2.0;
  if (d == 2) return 2.0 * kPi;
  const double h = static_cast<double>(d) / 2.0;
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double unit_ball_volume(std::size_t d) {
  require(d >= 1, ErrorKind::InvalidArgument, "dimension must be >= 1");
  if (d == 1) return 2.0;
  if (d == 2) return kPi;
  const double h = static_cast<double>(d) / 2.0;
  return std::pow(kPi, h) / std::tgamma(h + 1.0);
}

double uniform_ball_self_energy(std::size_t d, double s) {
  validate_exponent(s);
  require(d == 1 || d == 2, ErrorKind::UnsupportedDimension, "ball self-energy is available for d in {1, 2}");
  if (s == 0.0) return 1.0;
  if (s >= static_cast<double>(d)) return kInfinity;
  if (d == 1) return std::pow(2.0, 1.0 - s) / ((1.0 - s) * (2.0 - s));
  return tanh_sinh_integral([s](double r) { return (2.0 / kPi) * std::pow(r, 1.0 - s) * disk_overlap(r); }, 0.0,
                            2.0);
}

double ball_radius(const BallMeasureParams& params, std::size_t n) {
  require(params.s > 0.0 && std::isfinite(params.s), ErrorKind::InvalidArgument, "ball exponent must be > 0");
  require(params.c > 0.0 && std::isfinite(params.c), ErrorKind::InvalidArgument, "ball scale c must be > 0");
  return params.c * std::pow(static_cast<double>(n), -1.0 / params.s);
}

BallHypothesis ball_hypothesis(const PointCloud& cloud, const BallMeasureParams& params) {
  const std::size_t n = cloud.size();
  BallHypothesis h;
  h.n_threshold = std::pow(2.0, params.s + 1.0);
  h.n_large_enough = static_cast<double>(n) > h.n_threshold;
  h.min_distance = kInfinity;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double r = distance(cloud.point(i), cloud.point(j));
      if (r < h.min_distance) {
        h.min_distance = r;
        h.closest_i = j;
        h.closest_j = i;
      }
    }
  }
  if (n < 2) {
    h.epsilon_max = kInfinity;
  } else {
    h.epsilon_max = std::log(h.min_distance / (2.0 * params.c)) / std::log(static_cast<double>(n)) + 1.0 / params.s;
  }
  h.separated = h.epsilon_max > 0.0;
  return h;
}

BallEnergy ball_energy_numeric(const PointCloud& cloud, const BallMeasureParams& params,
                               const BallEnergyOptions& options) {
  require(!cloud.empty(), ErrorKind::TooFewPoints, "ball measure needs at least one centre");
  validate_exponent(params.s);
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  const double nd = static_cast<double>(n);
  const double s = params.s;
  if (s == 0.0) return {1.0 / nd, (nd - 1.0) / nd, 1.0, "closed-form", 0.0};

  const double rho = ball_radius(params, n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      require(distance(cloud.point(i), cloud.point(j)) > 2.0 * rho, ErrorKind::HypothesisViolated,
              "balls around points " + std::to_string(j) + " and " + std::to_string(i) + " overlap (radius " +
                  format_double(rho) + ")");

  const double pair_count = nd * (nd - 1.0) / 2.0;
  const bool quadrature = d <= 2 && pair_count <= static_cast<double>(options.max_quadrature_pairs);
  require(d <= 2 || options.allow_monte_carlo, ErrorKind::UnsupportedDimension,
          "ball energy for d >= 3 requires Monte Carlo to be enabled");

  BallEnergy out;
  Rng rng(options.seed);
  const std::size_t samples = std::max<std::size_t>(2, options.monte_carlo_samples);
  double self_se = 0.0;

  if (d <= 2) {
    out.self = std::pow(params.c, -s) * uniform_ball_self_energy(d, s);
  } else {
    std::vector<double> x(d), y(d), values(samples);
    for (auto& v : values) {
      uniform_in_ball(rng, d, x);
      uniform_in_ball(rng, d, y);
      v = riesz_kernel(distance(x, y), s);
    }
    const auto stats = mean_and_error(values);
    out.self = std::pow(params.c, -s) * stats.mean;
    self_se = std::pow(params.c, -s) * stats.standard_error;
  }

  if (n >= 2 && quadrature) {
    std::unordered_map<double, double> cache;
    CompensatedSum acc;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double L = distance(cloud.point(i), cloud.point(j));
        auto it = cache.find(L);
        if (it == cache.end()) it = cache.emplace(L, ball_pair_kernel(d, L, rho, s)).first;
        acc.add(it->second);
      }
    }
    out.cross = 2.0 * acc.value() / (nd * nd);
    out.method = "quadrature";
  } else if (n >= 2) {
    std::vector<double> x(d), y(d), values(samples);
    for (auto& v : values) {
      const std::size_t a = uniform_below(rng, n);
      std::size_t b = uniform_below(rng, n - 1);
      if (b >= a) ++b;
      uniform_in_ball(rng, d, x);
      uniform_in_ball(rng, d, y);
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = (cloud(a, k) + rho * x[k]) - (cloud(b, k) + rho * y[k]);
        sq += diff * diff;
      }
      v = riesz_kernel(std::sqrt(sq), s);
    }
    const auto stats = mean_and_error(values);
    out.cross = (nd - 1.0) / nd * stats.mean;
    out.standard_error = (nd - 1.0) / nd * stats.standard_error;
    out.method = "monte-carlo";
  } else {
    out.method = d <= 2 ? "quadrature" : "monte-carlo";
  }
  if (d > 2) out.method = "monte-carlo";
  out.standard_error = std::hypot(out.standard_error, self_se);
  out.total = out.self + out.cross;
  return out;
}

BallPrediction ball_energy_predicted(const PointCloud& cloud, const BallMeasureParams& params) {
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  const double s = params.s;
  require(std::isfinite(s) && s > 0.0 && s < static_cast<double>(d), ErrorKind::InvalidArgument,
          "prediction needs 0 < s < d");
  require(params.c > 0.0 && std::isfinite(params.c), ErrorKind::InvalidArgument, "ball scale c must be > 0");
  require(n >= 2, ErrorKind::TooFewPoints, "prediction needs at least 2 points");

  BallPrediction out;
  out.hypothesis = ball_hypothesis(cloud, params);
  const auto& h = out.hypothesis;
  require(h.separated, ErrorKind::HypothesisViolated,
          "points " + std::to_string(h.closest_i) + " and " + std::to_string(h.closest_j) + " are " +
              format_double(h.min_distance) + " apart, not more than 2 c n^(-1/s + eps) for any eps > 0");
  require(h.n_large_enough, ErrorKind::HypothesisViolated,
          "n = " + std::to_string(n) + " does not exceed 2^(s+1) = " + format_double(h.n_threshold));

  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  out.discrete_part = (nd - 1.0) / nd * discrete_energy(cloud, s);
  out.self_constant =
      unit_sphere_area(d) * std::pow(2.0, dd - s) / (unit_ball_volume(d) * std::pow(params.c, s) * (dd - s));
  out.value = out.discrete_part + out.self_constant;
  return out;
}

}  // namespace riesz
