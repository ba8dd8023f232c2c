#pragma once

// Discrete economic regions, transport cost tables, customer measures and
// price patterns. Everything here is immutable once constructed.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sprice {

/// Raised for malformed inputs (bad region, bad table, bad scenario field).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Price value meaning "no upper bound here". IEEE +inf keeps min-plus exact:
/// inf + c == inf and it never wins a strict comparison against a finite value.
inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

using Point = std::array<double, 2>;
using PointSet = std::vector<std::size_t>;

enum class Mask : std::uint8_t { None, Fixed, Free };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct Rect {
  Interval x;
  Interval y;
};

struct GridShape {
  std::size_t nx = 0;
  std::size_t ny = 0;
};

class Region {
 public:
  /// Unstructured point list. Boundary flags are taken as given (there is no
  /// adjacency to derive them from).
  static Region from_points(int dimension, std::vector<Point> points,
                            std::vector<Mask> masks = {},
                            std::vector<bool> boundary = {});

  int dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  double x(std::size_t i) const { return points_[i][0]; }
  Mask mask(std::size_t i) const { return masks_[i]; }
  bool is_boundary(std::size_t i) const { return boundary_[i]; }
  const std::vector<Point>& points() const { return points_; }

  bool partitioned() const { return partitioned_; }
  PointSet all_points() const;
  PointSet fixed_points() const;
  PointSet free_points() const;
  PointSet boundary_points() const;

  /// Set for regions built from a 1D fixed window.
  const std::optional<Interval>& window() const { return window_; }
  /// Set for axis-aligned 2D grids (row-major, x fastest).
  const std::optional<GridShape>& grid() const { return grid_; }

  double distance(std::size_t i, std::size_t j) const;

 private:
  friend Region build_interval_region(std::size_t, double, double,
                                      std::optional<Interval>);
  friend Region build_grid_region(std::size_t, std::size_t, const Rect&,
                                  std::optional<Rect>);

  void validate() const;

  int dimension_ = 1;
  std::vector<Point> points_;
  std::vector<Mask> masks_;
  std::vector<bool> boundary_;
  bool partitioned_ = false;
  std::optional<Interval> window_;
  std::optional<GridShape> grid_;
};

/// n equally spaced points on [a, b]. Points strictly inside the window are
/// FIXED and every other point is FREE. The boundary of the fixed part is the
/// set of FREE points adjacent to a FIXED one, i.e. the grid points snapped
/// to the window ends.
Region build_interval_region(std::size_t n, double a, double b,
                             std::optional<Interval> fixed_window = std::nullopt);

/// nx-by-ny grid over `bounds`; FIXED = strictly inside `fixed_rect`.
/// Boundary uses 4-neighbour adjacency, FREE side only.
Region build_grid_region(std::size_t nx, std::size_t ny, const Rect& bounds,
                         std::optional<Rect> fixed_rect = std::nullopt);

enum class CostKind { MetricPower, Quadratic, CustomTable };

struct CostKernel {
  CostKind kind = CostKind::MetricPower;
  double alpha = 1.0;
  /// Row-major |Q|x|Q| table, CustomTable only.
  std::vector<double> table;

  static CostKernel metric_power(double alpha) { return {CostKind::MetricPower, alpha, {}}; }
  static CostKernel quadratic() { return {CostKind::Quadratic, 1.0, {}}; }
  static CostKernel custom(std::vector<double> table) {
    return {CostKind::CustomTable, 1.0, std::move(table)};
  }
};

std::string to_string(CostKind kind);

/// Dense evaluated cost c(x, y), first index = customer location.
class CostTable {
 public:
  CostTable() = default;
  CostTable(std::size_t n, std::vector<double> values, CostKind kind, double alpha);

  std::size_t size() const { return n_; }
  double operator()(std::size_t x, std::size_t y) const { return values_[x * n_ + y]; }
  std::span<const double> row(std::size_t x) const {
    return {values_.data() + x * n_, n_};
  }
  const std::vector<double>& values() const { return values_; }
  CostKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double max_value() const { return max_; }
  /// |x - y|^alpha with alpha <= 1 is a metric; nothing else is assumed to be.
  bool is_metric() const { return kind_ == CostKind::MetricPower && alpha_ <= 1.0; }
  bool is_euclidean() const { return kind_ == CostKind::MetricPower && alpha_ == 1.0; }

  /// Table restricted/reindexed through `index` (entries may repeat).
  CostTable reindexed(std::span<const std::size_t> index) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  CostKind kind_ = CostKind::CustomTable;
  double alpha_ = 1.0;
  double max_ = 0.0;
};

CostTable eval_cost(const CostKernel& kernel, const Region& region);

/// Scale-aware equality tolerance shared by argmin sets and profit checks.
inline double tolerance_for(const CostTable& cost) {
  return 1e-9 * (1.0 + cost.max_value());
}

class CustomerMeasure {
 public:
  CustomerMeasure() = default;
  explicit CustomerMeasure(std::vector<double> weights);

  static CustomerMeasure uniform(std::size_t n, double total_mass = 1.0);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_; }
  /// Prefix sums in index order; for an interval region this is F(x_i) = f([a, x_i]).
  std::vector<double> cumulative() const;

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Extended-real prices, one per region point. +inf (kUnconstrained) is only
/// meaningful for upper-bound patterns; chosen prices are always finite.
/// Lower semicontinuity is automatic on a finite point set, so admissibility
/// reduces to the pointwise bound.
class PricePattern {
 public:
  PricePattern() = default;
  explicit PricePattern(std::vector<double> values);

  static PricePattern constant(std::size_t n, double value) {
    return PricePattern(std::vector<double>(n, value));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  bool is_finite(std::size_t i) const { return values_[i] != kUnconstrained; }
  bool all_finite() const;
  /// Throws unless every listed point carries a finite price.
  void require_finite_on(const PointSet& points, const char* what) const;

 private:
  std::vector<double> values_;
};

}  // namespace sprice
