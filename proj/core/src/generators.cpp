#include "riesz/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/summation.hpp"

namespace riesz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_point_cap(double count, const SizeCaps& caps, const char* what) {
  require(count <= static_cast<double>(caps.max_points), ErrorKind::SizeCapExceeded,
          std::string(what) + " would produce " + format_double(count) + " points (cap " +
              std::to_string(caps.max_points) + ")");
}

// n^k, or 0 when it exceeds 2^62.
std::uint64_t checked_power(std::uint64_t base, std::size_t exponent) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (result > (std::uint64_t{1} << 62) / base) return 0;
    result *= base;
  }
  return result;
}

// Sorted, deduplicated level-j endpoint numerators over denominator n^j.
std::vector<std::uint64_t> factor_endpoints(const CantorFactor& f, std::size_t j) {
  std::vector<std::uint64_t> lefts{0};
  for (std::size_t l = 0; l < j; ++l) {
    std::vector<std::uint64_t> next;
    next.reserve(lefts.size() * f.kept.size());
    for (std::uint64_t left : lefts)
      for (std::size_t idx : f.kept) next.push_back(left * f.n + idx);
    lefts = std::move(next);
  }
  std::vector<std::uint64_t> ends;
  ends.reserve(2 * lefts.size());
  for (std::uint64_t left : lefts) {
    ends.push_back(left);
    ends.push_back(left + 1);
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  return ends;
}

struct CantorLayout {
  std::vector<std::vector<std::uint64_t>> finals;  // per factor, over n^k
  std::vector<std::uint64_t> denominators;         // n^k per factor
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (level, flat index), sorted
};

CantorLayout cantor_layout(const CantorSpec& spec, const SizeCaps& caps) {
  validate(spec);
  const std::size_t k = spec.level;
  const std::size_t d = spec.dim();
  double bound = 1.0;
  for (const auto& f : spec.factors) bound *= 2.0 * std::pow(static_cast<double>(f.m), static_cast<double>(k));
  check_point_cap(std::min(bound, 1e300), caps, "cantor_points");

  CantorLayout layout;
  // levels[a][j-1]: level-j endpoints of factor a rescaled to denominator n^k.
  std::vector<std::vector<std::vector<std::uint64_t>>> levels(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto& f = spec.factors[a];
    const std::uint64_t denom = checked_power(f.n, k);
    require(denom != 0, ErrorKind::SizeCapExceeded, "n^level exceeds 2^62 for factor " + std::to_string(a));
    layout.denominators.push_back(denom);
    for (std::size_t j = 1; j <= k; ++j) {
      const std::uint64_t scale = checked_power(f.n, k - j);
      auto ends = factor_endpoints(f, j);
      for (auto& e : ends) e *= scale;
      levels[a].push_back(std::move(ends));
    }
    layout.finals.push_back(levels[a].back());
  }

  std::size_t total = 1;
  for (const auto& fin : layout.finals) total *= fin.size();
  check_point_cap(static_cast<double>(total), caps, "cantor_points");

  layout.order.reserve(total);
  std::vector<std::size_t> digits(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = d; a-- > 0;) {
      digits[a] = rem % layout.finals[a].size();
      rem /= layout.finals[a].size();
    }
    std::size_t level = k;
    for (std::size_t j = 1; j < k; ++j) {
      bool member = true;
      for (std::size_t a = 0; a < d && member; ++a) {
        const auto& set = levels[a][j - 1];
        member = std::binary_search(set.begin(), set.end(), layout.finals[a][digits[a]]);
      }
      if (member) {
        level = j;
        break;
      }
    }
    layout.order.emplace_back(level, flat);
  }
  std::sort(layout.order.begin(), layout.order.end());
  return layout;
}

bool in_arc(double angle, double start, double width) noexcept {
  double offset = std::fmod(angle - start, kTwoPi);
  if (offset < 0.0) offset += kTwoPi;
  return offset < width;
}

double potential_sum(const std::vector<double>& pts, std::size_t d, std::span<const double> y, double s) {
  CompensatedSum acc;
  for (std::size_t i = 0; i * d < pts.size(); ++i) {
    std::span<const double> x(pts.data() + i * d, d);
    acc.add(riesz_kernel(distance(x, y), s));
  }
  return acc.value();
}

}  // namespace

PointCloud grid_1d(std::size_t n) {
  require(n >= 2, ErrorKind::InvalidArgument, "grid_1d needs n >= 2");
  std::vector<double> coords(n);
  const double denom = static_cast<double>(n + 1);
  for (std::size_t m = 1; m <= n; ++m) coords[m - 1] = static_cast<double>(m) / denom;
  return PointCloud(1, std::move(coords));
}

PointCloud lattice(std::size_t d, std::size_t k, const SizeCaps& caps) {
  require(d >= 1 && k >= 1, ErrorKind::InvalidArgument, "lattice needs d >= 1 and k >= 1");
  require(k * d < 63, ErrorKind::SizeCapExceeded, "lattice size 2^(k d) overflows");
  const std::size_t count = std::size_t{1} << (k * d);
  check_point_cap(static_cast<double>(count), caps, "lattice");

  std::vector<double> coords(count * d);
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t bit = d - 1 - a;
      double value = 0.0;
      double weight = 0.5;
      for (std::size_t l = 0; l < k; ++l, weight *= 0.5) {
        if ((t >> (l * d + bit)) & 1U) value += weight;
      }
      coords[t * d + a] = value;
    }
  }
  return PointCloud(d, std::move(coords));
}

std::vector<std::size_t> default_kept(std::size_t m, std::size_t n) {
  require(m >= 1 && m < n, ErrorKind::InvalidArgument, "Cantor factor needs 0 < m < n");
  if (m == 1) return {0};
  std::vector<std::size_t> kept(m);
  for (std::size_t i = 0; i < m; ++i)
    kept[i] = static_cast<std::size_t>(std::llround(static_cast<double>(i * (n - 1)) / static_cast<double>(m - 1)));
  return kept;
}

CantorFactor make_cantor_factor(std::size_t m, std::size_t n) { return {m, n, default_kept(m, n)}; }

void validate(const CantorSpec& spec) {
  require(!spec.factors.empty(), ErrorKind::InvalidArgument, "CantorSpec needs at least one factor");
  require(spec.level >= 1, ErrorKind::InvalidArgument, "CantorSpec level must be >= 1");
  for (std::size_t a = 0; a < spec.factors.size(); ++a) {
    const auto& f = spec.factors[a];
    const std::string where = "factor " + std::to_string(a) + ": ";
    require(f.m > 0 && f.m < f.n, ErrorKind::InvalidArgument, where + "needs 0 < m < n");
    require(f.kept.size() == f.m, ErrorKind::InvalidArgument, where + "kept must list exactly m indices");
    for (std::size_t i = 0; i < f.kept.size(); ++i) {
      require(f.kept[i] < f.n, ErrorKind::InvalidArgument, where + "kept index out of range");
      require(i == 0 || f.kept[i] > f.kept[i - 1], ErrorKind::InvalidArgument,
              where + "kept indices must be strictly increasing");
    }
  }
}

PointCloud cantor_points(const CantorSpec& spec, const SizeCaps& caps) {
  const CantorLayout layout = cantor_layout(spec, caps);
  const std::size_t d = spec.dim();
  std::vector<double> coords;
  coords.reserve(layout.order.size() * d);
  for (const auto& [level, flat] : layout.order) {
    std::size_t rem = flat;
    const std::size_t base = coords.size();
    coords.resize(base + d);
    for (std::size_t a = d; a-- > 0;) {
      const auto& fin = layout.finals[a];
      coords[base + a] = static_cast<double>(fin[rem % fin.size()]) / static_cast<double>(layout.denominators[a]);
      rem /= fin.size();
    }
  }
  return PointCloud(d, std::move(coords));
}

std::vector<std::size_t> cantor_level_sizes(const CantorSpec& spec, const SizeCaps& caps) {
  const CantorLayout layout = cantor_layout(spec, caps);
  std::vector<std::size_t> sizes(spec.level, 0);
  for (const auto& entry : layout.order) ++sizes[entry.first - 1];
  for (std::size_t j = 1; j < sizes.size(); ++j) sizes[j] += sizes[j - 1];
  return sizes;
}

double cantor_dimension(const CantorSpec& spec) {
  validate(spec);
  double dim = 0.0;
  for (const auto& f : spec.factors) dim += std::log(static_cast<double>(f.m)) / std::log(static_cast<double>(f.n));
  return dim;
}

double semicircle_phase_centre(std::size_t phase) noexcept {
  double h = 0.0;
  for (std::size_t k = 1; k <= phase; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

SemicirclePhases semicircle_phase_construction(std::size_t num_phases, std::size_t points_per_phase) {
  require(num_phases >= 1, ErrorKind::InvalidArgument, "num_phases must be >= 1");
  require(points_per_phase >= 2 && points_per_phase % 2 == 0, ErrorKind::InvalidArgument,
          "points_per_phase must be even and >= 2");
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double silver = std::sqrt(2.0) - 1.0;
  const std::size_t pairs_per_phase = points_per_phase / 2;

  // Uniform filling starts at 2 pi golden; semicircle filling starts at its
  // centre. Distinct rotation numbers keep the two fillings disjoint.
  auto uniform_angle = [&](std::size_t k) {
    const double u = static_cast<double>(k + 1) * golden;
    return kTwoPi * (u - std::floor(u));
  };
  auto semicircle_angle = [&](std::size_t k) {
    const double u = 0.5 + static_cast<double>(k) * silver;
    return std::numbers::pi * ((u - std::floor(u)) - 0.5);
  };

  std::vector<double> angles;
  SemicirclePhases out{PointCloud(2, {1.0, 0.0}), {}};
  std::size_t next = 0;

  for (std::size_t k = 0; k < pairs_per_phase; ++k, ++next) {
    angles.push_back(uniform_angle(next));
    angles.push_back(semicircle_angle(next));
  }
  out.phase_ends.push_back(angles.size());

  for (std::size_t p = 1; p < num_phases; ++p) {
    const double prev = semicircle_phase_centre(p - 1);
    const double width = 1.0 / static_cast<double>(p);
    const double shrink_start = prev - std::numbers::pi / 2.0;
    const double grow_start = prev + std::numbers::pi / 2.0;
    const double target = 3.0 * width / (4.0 * std::numbers::pi);

    std::size_t in_grow = 0;
    for (double a : angles) in_grow += in_arc(a, grow_start, width) ? 1 : 0;
    auto error_at = [&](std::size_t count, std::size_t total) {
      return std::abs(static_cast<double>(count) / static_cast<double>(total) - target);
    };
    double best = error_at(in_grow, angles.size());

    for (std::size_t k = 0; k < pairs_per_phase; ++k) {
      double ax = uniform_angle(next);
      double ay = semicircle_angle(next) + prev;
      if (in_arc(ax, shrink_start, width)) ax += std::numbers::pi;
      if (in_arc(ay, shrink_start, width)) ay += std::numbers::pi;
      const std::size_t count = in_grow + (in_arc(ax, grow_start, width) ? 1 : 0) + (in_arc(ay, grow_start, width) ? 1 : 0);
      const std::size_t total = angles.size() + 2;
      const double err = error_at(count, total);
      const bool overshoot = static_cast<double>(count) / static_cast<double>(total) >= target;
      if (overshoot && err >= best) break;
      angles.push_back(ax);
      angles.push_back(ay);
      in_grow = count;
      best = std::min(best, err);
      ++next;
    }
    out.phase_ends.push_back(angles.size());
  }

  std::vector<double> coords;
  coords.reserve(2 * angles.size());
  for (double a : angles) {
    coords.push_back(std::cos(a));
    coords.push_back(std::sin(a));
  }
  out.cloud = PointCloud(2, std::move(coords));
  return out;
}

PointCloud semicircle_phase_points(std::size_t num_phases, std::size_t points_per_phase) {
  return semicircle_phase_construction(num_phases, points_per_phase).cloud;
}

void validate(const EnergyTargetSpec& spec, std::size_t d) {
  require(d >= 1, ErrorKind::InvalidArgument, "dimension must be >= 1");
  require(std::isfinite(spec.s) && spec.s > 0.0 && spec.s <= static_cast<double>(d), ErrorKind::InvalidArgument,
          "exponent must lie in (0, d]");
  require(!spec.targets.empty(), ErrorKind::InvalidArgument, "at least one target is required");
  for (double e : spec.targets)
    require(std::isfinite(e) && e > 0.0, ErrorKind::InvalidArgument, "targets must be finite and positive");
  require(spec.tolerance > 0.0 && spec.tolerance <= 1e-3, ErrorKind::InvalidArgument,
          "tolerance must lie in (0, 1e-3]");
}

EnergySequence energy_sequence_points(const EnergyTargetSpec& spec, std::size_t d) {
  validate(spec, d);
  const double s = spec.s;
  const SizeCaps caps;

  std::vector<double> u(d);
  double norm = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    u[a] = 1.0 + 0.6180339887498949 * static_cast<double>(a);
    norm += u[a] * u[a];
  }
  for (double& c : u) c /= std::sqrt(norm);

  std::vector<double> pts(d, 0.0);
  pts.push_back(std::pow(spec.targets[0], -1.0 / s));
  pts.resize(2 * d, 0.0);
  CompensatedSum pair_sum;
  pair_sum.add(spec.targets[0]);

  auto count = [&] { return pts.size() / d; };

  // Appends a point whose potential against the current points equals goal.
  auto slide = [&](double goal) {
    std::size_t anchor = 0;
    double best = -kInfinity;
    std::vector<double> lo(d, kInfinity), hi(d, -kInfinity);
    for (std::size_t i = 0; i < count(); ++i) {
      double proj = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double c = pts[i * d + a];
        proj += u[a] * c;
        lo[a] = std::min(lo[a], c);
        hi[a] = std::max(hi[a], c);
      }
      if (proj > best) {
        best = proj;
        anchor = i;
      }
    }
    double diam = 0.0;
    for (std::size_t a = 0; a < d; ++a) diam += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    diam = std::sqrt(diam);

    const std::vector<double> base(pts.begin() + static_cast<std::ptrdiff_t>(anchor * d),
                                   pts.begin() + static_cast<std::ptrdiff_t>((anchor + 1) * d));
    std::vector<double> y(d);
    auto at = [&](double t) -> std::span<const double> {
      for (std::size_t a = 0; a < d; ++a) y[a] = base[a] + t * u[a];
      return y;
    };

    double t_hi = diam + 1.0;
    int doublings = 0;
    while (potential_sum(pts, d, at(t_hi), s) >= goal) {
      require(++doublings <= 60, ErrorKind::TargetUnreachable, "could not move a point far enough away");
      t_hi *= 2.0;
    }
    double t_lo = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      if (potential_sum(pts, d, at(mid), s) > goal) t_lo = mid;
      else t_hi = mid;
    }
    at(0.5 * (t_lo + t_hi));
    require(count() + 1 <= caps.max_points, ErrorKind::SizeCapExceeded, "energy sequence exceeds the point cap");
    pair_sum.add(potential_sum(pts, d, y, s));
    pts.insert(pts.end(), y.begin(), y.end());
  };

  EnergySequence out{PointCloud(d, pts), {}};
  auto record = [&](double target) {
    const PointCloud cloud(d, pts);
    const double achieved = discrete_energy(cloud, s);
    require(std::abs(achieved - target) <= spec.tolerance * target, ErrorKind::TargetUnreachable,
            "target " + format_double(target) + " missed: achieved " + format_double(achieved));
    out.checkpoints.push_back({count(), target, achieved});
  };
  record(spec.targets[0]);

  for (std::size_t k = 1; k < spec.targets.size(); ++k) {
    const double e = spec.targets[k];
    const double n = static_cast<double>(count());
    const double goal = e * n * (n + 1.0) / 2.0 - pair_sum.value();
    if (goal > 0.0) {
      slide(goal);
    } else {
      std::size_t ell = 2;
      auto pairs_after = [&](std::size_t l) {
        const double m = n + static_cast<double>(l);
        return m * (m - 1.0) / 2.0;
      };
      while (pair_sum.value() >= e * pairs_after(ell)) {
        ++ell;
        require(count() + ell <= caps.max_points, ErrorKind::SizeCapExceeded, "energy sequence exceeds the point cap");
      }
      const double budget = 0.5 * (e * pairs_after(ell) - pair_sum.value()) / static_cast<double>(ell - 1);
      for (std::size_t i = 0; i + 1 < ell; ++i) slide(budget);
      slide(e * pairs_after(ell) - pair_sum.value());
    }
    record(e);
  }
  out.cloud = PointCloud(d, std::move(pts));
  return out;
}

}  // namespace riesz
