#include "sprice/ctransform.hpp"

#include <algorithm>
#include <cmath>

#include "sprice/kernels.hpp"

namespace sprice {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + ": value is not finite");
  }
}

}  // namespace

ValueFunction value_function(const PricePattern& p, const CostTable& cost,
                             const PointSet& restrict_to, ValueKind kind) {
  if (p.size() != cost.size()) throw ValidationError("price pattern size does not match region");
  std::vector<double> offset(restrict_to.size());
  bool proper = false;
  for (std::size_t k = 0; k < restrict_to.size(); ++k) {
    offset[k] = p[restrict_to[k]];
    proper |= p.is_finite(restrict_to[k]);
  }
  if (!proper) throw ValidationError("price pattern is +inf on the whole restriction set");
  return {envelope(cost, restrict_to, offset), kind};
}

ValueFunction value_function(const PricePattern& p, const CostTable& cost) {
  PointSet all(cost.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return value_function(p, cost, all, ValueKind::Full);
}

std::vector<double> c_transform(std::span<const double> v, const CostTable& cost,
                                const PointSet& target) {
  require_finite(v, "c_transform");
  return transform(cost, v, target);
}

std::vector<double> c_concave_from(std::span<const double> u, const CostTable& cost,
                                   const PointSet& support) {
  std::vector<double> neg(u.size());
  std::transform(u.begin(), u.end(), neg.begin(), [](double a) { return -a; });
  return envelope(cost, support, neg);
}

std::vector<double> double_transform(std::span<const double> v, const CostTable& cost,
                                     const PointSet& within) {
  const auto vc = c_transform(v, cost, within);
  return c_concave_from(vc, cost, within);
}

double c_concavity_defect(std::span<const double> v, const CostTable& cost,
                          const PointSet& within) {
  const auto vcc = double_transform(v, cost, within);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(vcc[i] - v[i]));
  return worst;
}

bool is_c_concave(std::span<const double> v, const CostTable& cost, const PointSet& within,
                  double tol) {
  return c_concavity_defect(v, cost, within) <= tol;
}

std::vector<PointSet> superdifferentials(std::span<const double> v,
                                         std::span<const double> vc_within,
                                         const CostTable& cost, const PointSet& within,
                                         double tol) {
  std::vector<PointSet> out(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    for (std::size_t k = 0; k < within.size(); ++k) {
      const std::size_t y = within[k];
      if (std::abs(v[x] + vc_within[k] - cost(x, y)) <= tol) out[x].push_back(y);
    }
  }
  return out;
}

PointSet superdifferential(std::span<const double> v, const CostTable& cost, std::size_t x,
                           const PointSet& within, double tol) {
  const auto vc = c_transform(v, cost, within);
  PointSet out;
  for (std::size_t k = 0; k < within.size(); ++k) {
    const std::size_t y = within[k];
    if (std::abs(v[x] + vc[k] - cost(x, y)) <= tol) out.push_back(y);
  }
  if (out.empty()) {
    throw NotCConcave("empty c-superdifferential: function is not c-concave on the subset");
  }
  return out;
}

AssignmentMap assign(const PricePattern& p, const CostTable& cost, const PointSet& over,
                     double tol) {
  const auto v = value_function(p, cost, over);
  const std::size_t n = cost.size();
  AssignmentMap a;
  a.expenditure = v.values;
  a.argmin.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y : over) {
      if (!p.is_finite(y)) continue;
      if (cost(x, y) + p[y] <= v[x] + tol) a.argmin[x].push_back(y);
    }
  }
  a.chosen = tie_break(a, p, over);
  return a;
}

std::vector<std::optional<std::size_t>> tie_break(const AssignmentMap& assignment,
                                                  const PricePattern& p,
                                                  const PointSet& within) {
  std::vector<bool> allowed(p.size(), false);
  for (std::size_t y : within) allowed[y] = true;
  std::vector<std::optional<std::size_t>> out(assignment.argmin.size());
  for (std::size_t x = 0; x < assignment.argmin.size(); ++x) {
    std::optional<std::size_t> best;
    for (std::size_t y : assignment.argmin[x]) {
      if (!allowed[y]) continue;
      if (!best || p[y] > p[*best] || (p[y] == p[*best] && y < *best)) best = y;
    }
    out[x] = best;
  }
  return out;
}

}  // namespace sprice
