#include "sprice/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sprice {

namespace {

bool strictly_inside(double v, const Interval& w) { return v > w.lo && v < w.hi; }

}  // namespace

Region Region::from_points(int dimension, std::vector<Point> points,
                           std::vector<Mask> masks, std::vector<bool> boundary) {
  Region r;
  r.dimension_ = dimension;
  r.points_ = std::move(points);
  r.masks_ = masks.empty() ? std::vector<Mask>(r.points_.size(), Mask::None) : std::move(masks);
  r.boundary_ = boundary.empty() ? std::vector<bool>(r.points_.size(), false) : std::move(boundary);
  r.partitioned_ = std::any_of(r.masks_.begin(), r.masks_.end(),
                               [](Mask m) { return m != Mask::None; });
  r.validate();
  return r;
}

void Region::validate() const {
  if (dimension_ != 1 && dimension_ != 2) {
    throw ValidationError("region dimension must be 1 or 2");
  }
  if (points_.empty()) throw ValidationError("region has no points");
  if (masks_.size() != points_.size() || boundary_.size() != points_.size()) {
    throw ValidationError("region mask/boundary length does not match point count");
  }
  for (const auto& p : points_) {
    for (int d = 0; d < dimension_; ++d) {
      if (!std::isfinite(p[d])) throw ValidationError("region coordinate is not finite");
    }
    if (dimension_ == 1 && p[1] != 0.0) {
      throw ValidationError("1D region point has a nonzero second coordinate");
    }
  }
  if (partitioned_) {
    bool any_fixed = false;
    bool any_free = false;
    for (Mask m : masks_) {
      if (m == Mask::None) throw ValidationError("partitioned region mixes NONE with FIXED/FREE");
      any_fixed |= m == Mask::Fixed;
      any_free |= m == Mask::Free;
    }
    if (any_fixed && !any_free) throw ValidationError("region has FIXED points but no FREE point");
  }
}

PointSet Region::all_points() const {
  PointSet s(points_.size());
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

PointSet Region::fixed_points() const {
  PointSet s;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if (masks_[i] == Mask::Fixed) s.push_back(i);
  }
  return s;
}

PointSet Region::free_points() const {
  PointSet s;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if (masks_[i] == Mask::Free) s.push_back(i);
  }
  return s;
}

PointSet Region::boundary_points() const {
  PointSet s;
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    if (boundary_[i]) s.push_back(i);
  }
  return s;
}

double Region::distance(std::size_t i, std::size_t j) const {
  const double dx = points_[i][0] - points_[j][0];
  const double dy = points_[i][1] - points_[j][1];
  return dimension_ == 1 ? std::abs(dx) : std::hypot(dx, dy);
}

Region build_interval_region(std::size_t n, double a, double b,
                             std::optional<Interval> fixed_window) {
  if (n < 2) throw ValidationError("interval region needs at least 2 points");
  if (!(a < b)) throw ValidationError("interval region needs a < b");
  if (fixed_window && !(a <= fixed_window->lo && fixed_window->lo < fixed_window->hi &&
                        fixed_window->hi <= b)) {
    throw ValidationError("fixed window must satisfy a <= lo < hi <= b");
  }

  Region r;
  r.dimension_ = 1;
  r.points_.resize(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    r.points_[i] = {i + 1 == n ? b : a + h * static_cast<double>(i), 0.0};
  }
  r.masks_.assign(n, Mask::None);
  r.boundary_.assign(n, false);

  if (fixed_window) {
    r.partitioned_ = true;
    r.window_ = fixed_window;
    bool any_fixed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const bool inside = strictly_inside(r.points_[i][0], *fixed_window);
      r.masks_[i] = inside ? Mask::Fixed : Mask::Free;
      any_fixed |= inside;
    }
    if (!any_fixed) throw ValidationError("fixed window contains no grid point");
    for (std::size_t i = 0; i < n; ++i) {
      if (r.masks_[i] != Mask::Free) continue;
      const bool left = i > 0 && r.masks_[i - 1] == Mask::Fixed;
      const bool right = i + 1 < n && r.masks_[i + 1] == Mask::Fixed;
      r.boundary_[i] = left || right;
    }
  }
  r.validate();
  return r;
}

Region build_grid_region(std::size_t nx, std::size_t ny, const Rect& bounds,
                         std::optional<Rect> fixed_rect) {
  if (nx < 2 || ny < 2) throw ValidationError("grid region needs at least 2x2 points");
  if (!(bounds.x.lo < bounds.x.hi) || !(bounds.y.lo < bounds.y.hi)) {
    throw ValidationError("grid bounds must be nondegenerate");
  }
  Region r;
  r.dimension_ = 2;
  r.grid_ = GridShape{nx, ny};
  const double hx = (bounds.x.hi - bounds.x.lo) / static_cast<double>(nx - 1);
  const double hy = (bounds.y.hi - bounds.y.lo) / static_cast<double>(ny - 1);
  r.points_.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      r.points_.push_back({i + 1 == nx ? bounds.x.hi : bounds.x.lo + hx * static_cast<double>(i),
                           j + 1 == ny ? bounds.y.hi : bounds.y.lo + hy * static_cast<double>(j)});
    }
  }
  const std::size_t n = nx * ny;
  r.masks_.assign(n, Mask::None);
  r.boundary_.assign(n, false);
  if (fixed_rect) {
    r.partitioned_ = true;
    bool any_fixed = false;
    for (std::size_t k = 0; k < n; ++k) {
      const bool inside = strictly_inside(r.points_[k][0], fixed_rect->x) &&
                          strictly_inside(r.points_[k][1], fixed_rect->y);
      r.masks_[k] = inside ? Mask::Fixed : Mask::Free;
      any_fixed |= inside;
    }
    if (!any_fixed) throw ValidationError("fixed rectangle contains no grid point");
    auto fixed_at = [&](std::size_t i, std::size_t j) {
      return r.masks_[j * nx + i] == Mask::Fixed;
    };
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        if (r.masks_[j * nx + i] != Mask::Free) continue;
        r.boundary_[j * nx + i] = (i > 0 && fixed_at(i - 1, j)) ||
                                  (i + 1 < nx && fixed_at(i + 1, j)) ||
                                  (j > 0 && fixed_at(i, j - 1)) ||
                                  (j + 1 < ny && fixed_at(i, j + 1));
      }
    }
  }
  r.validate();
  return r;
}

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::MetricPower: return "metric_power";
    case CostKind::Quadratic: return "quadratic";
    case CostKind::CustomTable: return "custom";
  }
  return "unknown";
}

CostTable::CostTable(std::size_t n, std::vector<double> values, CostKind kind, double alpha)
    : n_(n), values_(std::move(values)), kind_(kind), alpha_(alpha) {
  if (values_.size() != n_ * n_) throw ValidationError("cost table has wrong size");
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = 0; y < n_; ++y) {
      const double c = values_[x * n_ + y];
      if (!std::isfinite(c) || c < 0.0) {
        throw ValidationError("cost table entry is negative or not finite");
      }
      if (x == y && c != 0.0) throw ValidationError("cost table diagonal is not zero");
      max_ = std::max(max_, c);
    }
  }
}

CostTable CostTable::reindexed(std::span<const std::size_t> index) const {
  const std::size_t m = index.size();
  std::vector<double> v(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) v[a * m + b] = (*this)(index[a], index[b]);
  }
  return CostTable(m, std::move(v), kind_, alpha_);
}

CostTable eval_cost(const CostKernel& kernel, const Region& region) {
  const std::size_t n = region.size();
  if (kernel.kind == CostKind::CustomTable) {
    if (kernel.table.size() != n * n) {
      throw ValidationError("custom cost table size does not match the region");
    }
    return CostTable(n, kernel.table, kernel.kind, 1.0);
  }
  if (kernel.kind == CostKind::MetricPower && !(kernel.alpha > 0.0 && kernel.alpha <= 1.0)) {
    throw ValidationError("metric_power exponent must lie in (0, 1]");
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const double d = region.distance(x, y);
      v[x * n + y] = kernel.kind == CostKind::Quadratic ? 0.5 * d * d
                     : kernel.alpha == 1.0              ? d
                                                        : std::pow(d, kernel.alpha);
    }
  }
  return CostTable(n, std::move(v), kernel.kind, kernel.alpha);
}

CustomerMeasure::CustomerMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("customer weight must be finite and >= 0");
    total_ += w;
  }
}

CustomerMeasure CustomerMeasure::uniform(std::size_t n, double total_mass) {
  return CustomerMeasure(std::vector<double>(n, total_mass / static_cast<double>(n)));
}

std::vector<double> CustomerMeasure::cumulative() const {
  std::vector<double> out(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), out.begin());
  return out;
}

PricePattern::PricePattern(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v)) throw ValidationError("price is NaN");
    if (v == -kUnconstrained) throw ValidationError("price is -inf");
  }
}

bool PricePattern::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v != kUnconstrained; });
}

void PricePattern::require_finite_on(const PointSet& points, const char* what) const {
  for (std::size_t i : points) {
    if (i >= values_.size() || !is_finite(i)) {
      throw ValidationError(std::string(what) + ": price must be finite at every listed point");
    }
  }
}

}  // namespace sprice
