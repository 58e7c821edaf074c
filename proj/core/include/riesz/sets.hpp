#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riesz/point_cloud.hpp"

namespace riesz {

enum class ValueKind { Distance, DotProduct };

/// How values are deduplicated. With exact set, the cloud is tested for an
/// integer lattice structure (coordinates that are integer multiples of one
/// unit); if found, squared distances or dot products are compared as exact
/// integers. Otherwise values sharing llround(v / step) are merged, with step
/// defaulting to 1e-9 times the cloud's extent (or its largest squared norm
/// for dot products).
struct Quantization {
  bool exact = true;
  double step = 0.0;
};

struct QuantizationUsed {
  std::string mode;   // "exact-integer" | "quantized"
  double step = 0.0;  // quantized: bucket width
  double unit = 0.0;  // exact: lattice unit
};

struct ValueSet {
  ValueKind kind = ValueKind::Distance;
  std::vector<double> values;  // strictly increasing
  QuantizationUsed quantization;
  std::size_t count = 0;
};

std::string to_string(ValueKind kind);

/// Distinct |x - y| over unordered pairs x != y (0 excluded).
ValueSet distance_set(const PointCloud& cloud, const Quantization& quantization = {});

/// Distinct x . y over all ordered pairs, including x = y.
ValueSet dot_product_set(const PointCloud& cloud, const Quantization& quantization = {});

struct ErdosRow {
  double s0 = 0.0;
  std::string label;
  double bound = 0.0;  // n^{1/s0}
  double ratio = 0.0;  // #distances / bound
};

struct ErdosReport {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t count = 0;
  QuantizationUsed quantization;
  std::vector<ErdosRow> rows;
};

/// Default exponents: d/2; 5/4 when d = 2; d/2 + 1/4 - 1/(8d + 4) when d >= 3.
std::vector<std::pair<double, std::string>> default_erdos_exponents(std::size_t d);

/// Ratio #distance_set / n^{1/s0} per exponent; observational only.
ErdosReport erdos_report(const PointCloud& cloud, std::optional<std::vector<double>> exponents = std::nullopt,
                         const Quantization& quantization = {});

}  // namespace riesz
