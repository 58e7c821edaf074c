#include "riesz/sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "riesz/energy.hpp"
#include "riesz/error.hpp"
#include "riesz/parallel.hpp"

namespace riesz {

namespace {

constexpr std::size_t kRowChunk = 64;
constexpr double kLatticeTolerance = 1e-6;

struct Lattice {
  double unit = 0.0;
  std::vector<std::int64_t> coords;  // row-major integer coordinates
};

// Euclid on nonnegative doubles, treating remainders within tol as zero.
double approximate_gcd(double a, double b, double tol) {
  while (b > tol) {
    double r = std::fmod(a, b);
    if (b - r <= tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

// Integer coordinates k with coords ~= offset + k * unit, if they exist and
// the needed integer products stay below 2^62.
std::optional<Lattice> detect_lattice(const PointCloud& cloud, bool translate, bool products) {
  const std::size_t d = cloud.dim();
  std::vector<double> offset(d, 0.0);
  if (translate) {
    for (std::size_t a = 0; a < d; ++a) {
      offset[a] = cloud(0, a);
      for (std::size_t i = 1; i < cloud.size(); ++i) offset[a] = std::min(offset[a], cloud(i, a));
    }
  }
  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t a = 0; a < d; ++a) values.push_back(cloud(i, a) - offset[a]);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() < 2) return std::nullopt;
  const double tol = kLatticeTolerance * 1e-3 * std::max(std::abs(values.front()), std::abs(values.back()));
  double unit = 0.0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    unit = approximate_gcd(unit, values[j] - values[j - 1], tol);
    if (unit <= tol) return std::nullopt;
  }

  Lattice lat;
  lat.unit = unit;
  lat.coords.reserve(cloud.size() * d);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      const double q = (cloud(i, a) - offset[a]) / unit;
      const double r = std::round(q);
      if (std::abs(q - r) > kLatticeTolerance || std::abs(r) > 1e15) return std::nullopt;
      lat.coords.push_back(static_cast<std::int64_t>(r));
      max_abs = std::max(max_abs, std::abs(r));
    }
  }
  const double span = products ? max_abs * max_abs : 4.0 * max_abs * max_abs;
  if (static_cast<double>(d) * span >= 0x1.0p62) return std::nullopt;
  return lat;
}

struct Entry {
  std::int64_t key;
  double value;
  bool operator<(const Entry& o) const noexcept { return key < o.key || (key == o.key && value < o.value); }
};

// For each key, the smallest value, ordered by key.
std::vector<Entry> dedup(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const Entry& a, const Entry& b) { return a.key == b.key; }),
                entries.end());
  return entries;
}

// Runs per_row(i, out) over rows in fixed chunks, dedups per chunk and merges
// in chunk order.
template <class RowFn>
std::vector<Entry> collect(std::size_t rows, RowFn per_row) {
  const std::size_t chunks = chunk_count(rows, kRowChunk);
  std::vector<std::vector<Entry>> parts(chunks);
  parallel_for_chunks(rows, kRowChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    std::vector<Entry> local;
    for (std::size_t i = begin; i < end; ++i) per_row(i, local);
    parts[chunk] = dedup(std::move(local));
  });
  std::vector<Entry> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return dedup(std::move(all));
}

ValueSet finish(ValueKind kind, std::vector<Entry> entries, QuantizationUsed used) {
  ValueSet out;
  out.kind = kind;
  out.quantization = std::move(used);
  out.values.reserve(entries.size());
  for (const auto& e : entries) out.values.push_back(e.value);
  std::sort(out.values.begin(), out.values.end());
  out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());
  out.count = out.values.size();
  return out;
}

double checked_step(double step, double fallback) {
  require(std::isfinite(step) && step >= 0.0, ErrorKind::InvalidArgument, "quantization step must be >= 0");
  return step > 0.0 ? step : fallback;
}

}  // namespace

std::string to_string(ValueKind kind) { return kind == ValueKind::Distance ? "distance" : "dot-product"; }

ValueSet distance_set(const PointCloud& cloud, const Quantization& quantization) {
  require(cloud.size() >= 2, ErrorKind::TooFewPoints, "distance set needs at least 2 points");
  const std::size_t d = cloud.dim();
  if (quantization.exact) {
    if (auto lat = detect_lattice(cloud, true, false)) {
      const auto& k = lat->coords;
      const double unit = lat->unit;
      auto entries = collect(cloud.size(), [&](std::size_t i, std::vector<Entry>& out) {
        for (std::size_t j = 0; j < i; ++j) {
          std::int64_t sq = 0;
          for (std::size_t a = 0; a < d; ++a) {
            const std::int64_t diff = k[i * d + a] - k[j * d + a];
            sq += diff * diff;
          }
          out.push_back({sq, std::sqrt(static_cast<double>(sq)) * unit});
        }
      });
      return finish(ValueKind::Distance, std::move(entries), {"exact-integer", 0.0, unit});
    }
  }
  const double step = checked_step(quantization.step, 1e-9 * cloud.extent());
  auto entries = collect(cloud.size(), [&](std::size_t i, std::vector<Entry>& out) {
    for (std::size_t j = 0; j < i; ++j) {
      const double r = distance(cloud.point(i), cloud.point(j));
      out.push_back({std::llround(r / step), r});
    }
  });
  return finish(ValueKind::Distance, std::move(entries), {"quantized", step, 0.0});
}

ValueSet dot_product_set(const PointCloud& cloud, const Quantization& quantization) {
  require(cloud.size() >= 1, ErrorKind::TooFewPoints, "dot-product set needs at least 1 point");
  const std::size_t d = cloud.dim();
  // x . y = y . x, so unordered pairs plus the diagonal cover every ordered pair.
  if (quantization.exact) {
    if (auto lat = detect_lattice(cloud, false, true)) {
      const auto& k = lat->coords;
      const double unit2 = lat->unit * lat->unit;
      auto entries = collect(cloud.size(), [&](std::size_t i, std::vector<Entry>& out) {
        for (std::size_t j = 0; j <= i; ++j) {
          std::int64_t dot = 0;
          for (std::size_t a = 0; a < d; ++a) dot += k[i * d + a] * k[j * d + a];
          out.push_back({dot, static_cast<double>(dot) * unit2});
        }
      });
      return finish(ValueKind::DotProduct, std::move(entries), {"exact-integer", 0.0, lat->unit});
    }
  }
  double max_norm2 = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double sq = 0.0;
    for (double c : cloud.point(i)) sq += c * c;
    max_norm2 = std::max(max_norm2, sq);
  }
  const double step = checked_step(quantization.step, 1e-9 * (max_norm2 > 0.0 ? max_norm2 : 1.0));
  auto entries = collect(cloud.size(), [&](std::size_t i, std::vector<Entry>& out) {
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t a = 0; a < d; ++a) dot += cloud(i, a) * cloud(j, a);
      out.push_back({std::llround(dot / step), dot});
    }
  });
  return finish(ValueKind::DotProduct, std::move(entries), {"quantized", step, 0.0});
}

std::vector<std::pair<double, std::string>> default_erdos_exponents(std::size_t d) {
  require(d >= 1, ErrorKind::InvalidArgument, "dimension must be >= 1");
  const double dd = static_cast<double>(d);
  std::vector<std::pair<double, std::string>> out{{dd / 2.0, "d/2"}};
  if (d == 2) out.emplace_back(1.25, "5/4");
  if (d >= 3) out.emplace_back(dd / 2.0 + 0.25 - 1.0 / (8.0 * dd + 4.0), "d/2+1/4-1/(8d+4)");
  return out;
}

ErdosReport erdos_report(const PointCloud& cloud, std::optional<std::vector<double>> exponents,
                         const Quantization& quantization) {
  const ValueSet set = distance_set(cloud, quantization);
  ErdosReport report;
  report.n = cloud.size();
  report.d = cloud.dim();
  report.count = set.count;
  report.quantization = set.quantization;
  std::vector<std::pair<double, std::string>> list;
  if (exponents) {
    for (double s0 : *exponents) list.emplace_back(s0, "custom");
  } else {
    list = default_erdos_exponents(cloud.dim());
  }
  const double n = static_cast<double>(cloud.size());
  for (const auto& [s0, label] : list) {
    require(std::isfinite(s0) && s0 > 0.0, ErrorKind::InvalidArgument, "exponents must be positive");
    const double bound = std::pow(n, 1.0 / s0);
    report.rows.push_back({s0, label, bound, static_cast<double>(set.count) / bound});
  }
  return report;
}

}  // namespace riesz
