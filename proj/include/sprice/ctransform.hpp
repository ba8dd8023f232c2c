#pragma once

// c-transforms, c-concavity, c-superdifferentials and the customer side of
// the market: value functions, argmin sets and the tie-breaking rule.
//
// Conventions: cost(x, y) is the cost for a customer at x to buy at y. A
// "within" / "target" PointSet restricts the y variable; the x variable
// always ranges over the whole region.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sprice/geometry.hpp"

namespace sprice {

/// The candidate function is not c-concave relative to the requested subset:
/// some superdifferential came out empty.
class NotCConcave : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueKind {
  Full,       ///< c-concave w.r.t. all of Q
  Subregion,  ///< (Q1, c)-concave: generators restricted to the free points
};

struct ValueFunction {
  std::vector<double> values;
  ValueKind kind = ValueKind::Full;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Customer choices for a price pattern. `argmin[x]` is T_p(x) (indices into
/// the region), `chosen[x]` the tie-broken purchase point.
struct AssignmentMap {
  std::vector<PointSet> argmin;
  std::vector<std::optional<std::size_t>> chosen;
  std::vector<double> expenditure;
};

/// v_p(x) = min_{y in restrict_to} c(x, y) + p(y). +inf prices are skipped.
/// Throws ValidationError when p is +inf on every point of restrict_to.
ValueFunction value_function(const PricePattern& p, const CostTable& cost,
                             const PointSet& restrict_to,
                             ValueKind kind = ValueKind::Full);
ValueFunction value_function(const PricePattern& p, const CostTable& cost);

/// v^c(y) = min_x c(x, y) - v(x) for y in target; result aligned with target.
std::vector<double> c_transform(std::span<const double> v, const CostTable& cost,
                                const PointSet& target);

/// x -> min_{k} c(x, support[k]) - u[k], the c-concave function generated by u.
std::vector<double> c_concave_from(std::span<const double> u, const CostTable& cost,
                                   const PointSet& support);

/// (v^c)^c with the inner transform taken on `within`. Always >= v, and equal
/// to v exactly when v is c-concave relative to `within`.
std::vector<double> double_transform(std::span<const double> v, const CostTable& cost,
                                     const PointSet& within);

/// max_x |(v^c)^c(x) - v(x)|.
double c_concavity_defect(std::span<const double> v, const CostTable& cost,
                          const PointSet& within);

bool is_c_concave(std::span<const double> v, const CostTable& cost, const PointSet& within,
                  double tol);

/// {y in within : |v(x) + v^c(y) - c(x, y)| <= tol}. Throws NotCConcave if empty.
PointSet superdifferential(std::span<const double> v, const CostTable& cost, std::size_t x,
                           const PointSet& within, double tol);

/// All superdifferentials at once given v^c on `within` (aligned). Rows may
/// be empty; callers decide whether that is an error.
std::vector<PointSet> superdifferentials(std::span<const double> v,
                                         std::span<const double> vc_within,
                                         const CostTable& cost, const PointSet& within,
                                         double tol);

/// T_p restricted to `over`: argmin sets within tol, minimal expenditure and
/// the tie-broken choice over the same set.
AssignmentMap assign(const PricePattern& p, const CostTable& cost, const PointSet& over,
                     double tol);

/// Per customer, the highest-priced point of T_p(x) within `within`; equal
/// prices resolve to the smallest index. nullopt when the intersection is empty.
std::vector<std::optional<std::size_t>> tie_break(const AssignmentMap& assignment,
                                                  const PricePattern& p,
                                                  const PointSet& within);

}  // namespace sprice
