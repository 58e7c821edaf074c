#include "riesz/point_cloud.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "riesz/error.hpp"

namespace riesz {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  require(dim_ > 0, ErrorKind::InvalidArgument, "point dimension must be positive");
  require(coords_.size() % dim_ == 0, ErrorKind::DimensionMismatch,
          "coordinate count " + std::to_string(coords_.size()) + " is not a multiple of dim " + std::to_string(dim_));
  validate();
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), ErrorKind::InvalidArgument, "cannot infer dimension from zero rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == dim, ErrorKind::DimensionMismatch,
            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " coordinates, expected " +
                std::to_string(dim));
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointCloud(dim, std::move(coords));
}

void PointCloud::validate() const {
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      fail(ErrorKind::NonFiniteCoordinate, "point " + std::to_string(k / dim_) + " has a non-finite coordinate");
    }
  }
  const std::size_t n = size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [this](std::size_t i) { return coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(dim_), row(b),
                                        row(b) + static_cast<std::ptrdiff_t>(dim_));
  });
  for (std::size_t k = 1; k < n; ++k) {
    if (std::equal(row(order[k - 1]), row(order[k - 1]) + static_cast<std::ptrdiff_t>(dim_), row(order[k]))) {
      const auto [lo, hi] = std::minmax(order[k - 1], order[k]);
      fail(ErrorKind::DuplicatePoints, "points " + std::to_string(lo) + " and " + std::to_string(hi) + " coincide");
    }
  }
}

PointCloud PointCloud::prefix(std::size_t k) const {
  require(k <= size(), ErrorKind::InvalidArgument,
          "prefix length " + std::to_string(k) + " exceeds cloud size " + std::to_string(size()));
  return PointCloud(Unchecked{}, dim_, std::vector<double>(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(k * dim_)));
}

double PointCloud::extent() const noexcept {
  if (empty()) return 0.0;
  double sq = 0.0;
  for (std::size_t axis = 0; axis < dim_; ++axis) {
    double lo = coords_[axis], hi = coords_[axis];
    for (std::size_t i = 1; i < size(); ++i) {
      lo = std::min(lo, coords_[i * dim_ + axis]);
      hi = std::max(hi, coords_[i * dim_ + axis]);
    }
    sq += (hi - lo) * (hi - lo);
  }
  return std::sqrt(sq);
}

PointCloud PointCloud::scaled(double factor) const {
  require(std::isfinite(factor) && factor != 0.0, ErrorKind::InvalidArgument, "scale factor must be finite and nonzero");
  std::vector<double> out(coords_);
  for (double& c : out) c *= factor;
  return PointCloud(dim_, std::move(out));
}

PointCloud PointCloud::translated(std::span<const double> offset) const {
  require(offset.size() == dim_, ErrorKind::DimensionMismatch, "translation has wrong dimension");
  std::vector<double> out(coords_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += offset[k % dim_];
  return PointCloud(dim_, std::move(out));
}

PointCloud PointCloud::transformed(std::span<const double> matrix) const {
  require(matrix.size() == dim_ * dim_, ErrorKind::DimensionMismatch, "transform matrix must be dim x dim");
  std::vector<double> out(coords_.size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t r = 0; r < dim_; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) acc += matrix[r * dim_ + c] * coords_[i * dim_ + c];
      out[i * dim_ + r] = acc;
    }
  }
  return PointCloud(dim_, std::move(out));
}

double distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

namespace {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": '" + std::string(field) + "' is not a number");
  }
  return value;
}

}  // namespace

PointCloud read_points_csv(std::istream& in) {
  std::size_t dim = 0;
  bool declared = false;
  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (line_no == 1) {
        const auto pos = view.find("dim=");
        if (pos != std::string_view::npos) {
          const double d = parse_number(view.substr(pos + 4), line_no);
          require(d >= 1 && d == std::floor(d), ErrorKind::ParseError, "invalid dim header");
          dim = static_cast<std::size_t>(d);
          declared = true;
        }
      }
      continue;
    }
    std::size_t columns = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      coords.push_back(parse_number(view.substr(start, comma == std::string_view::npos ? view.size() - start : comma - start), line_no));
      ++columns;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim == 0) dim = columns;
    if (columns != dim) {
      fail(ErrorKind::DimensionMismatch, "line " + std::to_string(line_no) + " has " + std::to_string(columns) +
                                             " columns, expected " + std::to_string(dim) + (declared ? " (from header)" : ""));
    }
  }
  require(dim > 0, ErrorKind::ParseError, "no points and no dim header");
  return PointCloud(dim, std::move(coords));
}

PointCloud read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open '" + path + "'");
  return read_points_csv(in);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_points_csv(std::ostream& out, const PointCloud& cloud) {
  out << "# dim=" << cloud.dim() << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t axis = 0; axis < cloud.dim(); ++axis) {
      if (axis) out << ',';
      out << format_double(cloud(i, axis));
    }
    out << '\n';
  }
}

void write_points_csv_file(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  write_points_csv(out, cloud);
}

}  // namespace riesz
