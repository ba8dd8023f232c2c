#pragma once

// Brute-force references. Everything here is a direct transcription of a
// definition with plain nested loops and no shared code with the library
// beyond the CostTable accessor, so a disagreement points at the solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "sprice/geometry.hpp"

namespace oracle {

using sprice::CostTable;
using sprice::PointSet;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::vector<double> value(const std::vector<double>& p, const CostTable& c,
                                 const PointSet& over) {
  std::vector<double> v(c.size(), kInf);
  for (std::size_t x = 0; x < c.size(); ++x) {
    for (std::size_t y : over) v[x] = std::min(v[x], c(x, y) + p[y]);
  }
  return v;
}

inline std::vector<double> transform(const std::vector<double>& v, const CostTable& c,
                                     const PointSet& target) {
  std::vector<double> out;
  for (std::size_t y : target) {
    double m = kInf;
    for (std::size_t x = 0; x < c.size(); ++x) m = std::min(m, c(x, y) - v[x]);
    out.push_back(m);
  }
  return out;
}

/// (v^c)^c with the inner transform over `within`.
inline std::vector<double> double_transform(const std::vector<double>& v, const CostTable& c,
                                            const PointSet& within) {
  const auto vc = transform(v, c, within);
  std::vector<double> out(c.size(), kInf);
  for (std::size_t x = 0; x < c.size(); ++x) {
    for (std::size_t k = 0; k < within.size(); ++k) {
      out[x] = std::min(out[x], c(x, within[k]) - vc[k]);
    }
  }
  return out;
}

/// Price actually paid by x: the highest price among cheapest points of
/// `over`, with `tol` slack. NaN when `over` is empty.
inline double paid(std::size_t x, const std::vector<double>& p, const CostTable& c,
                   const PointSet& over, double tol) {
  double best = kInf;
  for (std::size_t y : over) best = std::min(best, c(x, y) + p[y]);
  double price = -kInf;
  for (std::size_t y : over) {
    if (c(x, y) + p[y] <= best + tol) price = std::max(price, p[y]);
  }
  return price;
}

/// Whole-region profit.
inline double profit_F(const std::vector<double>& p, const CostTable& c,
                       const std::vector<double>& f, double tol) {
  PointSet all(c.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  double sum = 0.0;
  for (std::size_t x = 0; x < c.size(); ++x) sum += f[x] * paid(x, p, c, all, tol);
  return sum;
}

/// Subregion profit: x is captured when the cheapest free offer is no worse
/// than the cheapest fixed one.
inline double profit_Pi(const std::vector<double>& p, const CostTable& c,
                        const std::vector<double>& f, const PointSet& fixed,
                        const PointSet& free, double tol) {
  double sum = 0.0;
  for (std::size_t x = 0; x < c.size(); ++x) {
    double v0 = kInf;
    double v1 = kInf;
    for (std::size_t y : fixed) v0 = std::min(v0, c(x, y) + p[y]);
    for (std::size_t y : free) v1 = std::min(v1, c(x, y) + p[y]);
    if (v1 <= v0 + tol) sum += f[x] * paid(x, p, c, free, tol);
  }
  return sum;
}

/// Calls `visit` on every vector of `levels`^dims, coordinate 0 slowest.
inline void enumerate(std::size_t dims, const std::vector<double>& levels,
                      const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> g(dims, levels.front());
  while (true) {
    visit(g);
    std::size_t k = dims;
    while (k > 0) {
      --k;
      if (++idx[k] < levels.size()) {
        g[k] = levels[idx[k]];
        break;
      }
      idx[k] = 0;
      g[k] = levels.front();
      if (k == 0) return;
    }
    if (dims == 0) return;
  }
}

/// Best whole-region profit over price vectors on the L-level grid of
/// [0, hi] with p <= p0.
inline double best_quantized_profit(const std::vector<double>& p0, const CostTable& c,
                                    const std::vector<double>& f, std::size_t levels,
                                    double hi, double tol) {
  std::vector<double> grid;
  for (std::size_t i = 0; i < levels; ++i) {
    grid.push_back(hi * static_cast<double>(i) / static_cast<double>(levels - 1));
  }
  double best = -kInf;
  enumerate(c.size(), grid, [&](const std::vector<double>& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > p0[i]) return;
    }
    best = std::max(best, profit_F(p, c, f, tol));
  });
  return best;
}

/// Market profit of the interval instance [0, 1] with the agent selling at
/// 0 (price p1) and 1 (price p2), fixed price p0 strictly inside, uniform
/// customers sampled at `samples` midpoints.
inline double interval_profit(double p1, double p2, double p0, std::size_t samples) {
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    const double left = p1 + s;
    const double right = p2 + 1.0 - s;
    if (std::min(left, right) > p0) continue;
    sum += left < right ? p1 : right < left ? p2 : std::max(p1, p2);
  }
  return sum / static_cast<double>(samples);
}

}  // namespace oracle
