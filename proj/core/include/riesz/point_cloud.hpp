#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace riesz {

/// Upper limits applied by constructors before they allocate.
struct SizeCaps {
  std::size_t max_points = 100'000;
  double max_pairs = 1e10;
};

/// An ordered, finite set of distinct points in R^dim, stored row-major.
///
/// Construction validates that every coordinate is finite and that no two
/// points coincide exactly. Order is significant: prefix(k) is the set P_k
/// generated by the first k points of the sequence.
class PointCloud {
 public:
  PointCloud(std::size_t dim, std::vector<double> coords);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  double operator()(std::size_t i, std::size_t axis) const noexcept { return coords_[i * dim_ + axis]; }
  std::span<const double> coords() const noexcept { return coords_; }

  PointCloud prefix(std::size_t k) const;

  /// Diagonal of the axis-aligned bounding box; an upper bound on the diameter
  /// within a factor sqrt(dim).
  double extent() const noexcept;

  PointCloud scaled(double factor) const;
  PointCloud translated(std::span<const double> offset) const;
  /// Applies a dim x dim matrix (row-major) to every point.
  PointCloud transformed(std::span<const double> matrix) const;

 private:
  struct Unchecked {};
  PointCloud(Unchecked, std::size_t dim, std::vector<double> coords) noexcept
      : dim_(dim), coords_(std::move(coords)) {}

  void validate() const;

  std::size_t dim_;
  std::vector<double> coords_;
};

/// Euclidean distance by sqrt of the accumulated squared differences.
double distance(std::span<const double> a, std::span<const double> b) noexcept;

// CSV point format: one point per row, exactly dim numeric columns, optional
// first line "# dim=<d>". The writer emits 17 significant digits.
PointCloud read_points_csv(std::istream& in);
PointCloud read_points_csv_file(const std::string& path);
void write_points_csv(std::ostream& out, const PointCloud& cloud);
void write_points_csv_file(const std::string& path, const PointCloud& cloud);

/// Shortest decimal text that round-trips the double (%.17g).
std::string format_double(double value);

}  // namespace riesz
