#pragma once

// Local search over customer assignments. A candidate assignment sends each
// customer either to one of the seller points or to an outside option; it is
// priced at the greatest prices that make every customer weakly prefer its
// assigned choice, and scored by the caller's (honest) profit evaluator.

#include <functional>
#include <vector>

#include "sprice/geometry.hpp"

namespace sprice::detail {

struct PolishProblem {
  const CostTable* cost = nullptr;
  const CustomerMeasure* f = nullptr;
  PointSet sellers;
  /// Per customer: expenditure of the outside option, +inf when there is none.
  std::vector<double> outside;
  /// Per seller (aligned with `sellers`): upper bound on the price.
  std::vector<double> cap;
  double tol = 0.0;
  /// Prices aligned with `sellers` -> profit; -inf rejects the candidate.
  std::function<double(const std::vector<double>&)> score;
};

inline constexpr std::size_t kOutsideOption = static_cast<std::size_t>(-1);

/// Each customer's seller slot at `price` (highest price among the cheapest,
/// lowest slot on equal prices), or kOutsideOption when the outside option
/// is strictly cheaper.
std::vector<std::size_t> current_targets(const PolishProblem& problem,
                                         const std::vector<double>& price);

/// Greatest prices <= cap implementing `target` (seller slot per customer,
/// or kOutsideOption). Empty when no such prices exist.
std::vector<double> greatest_prices(const PolishProblem& problem,
                                    const std::vector<std::size_t>& target);

/// Hill-climbs from `start` by moving one customer at a time. Returns the
/// best prices found; never worse than `start` under `score`.
std::vector<double> polish(const PolishProblem& problem, std::vector<double> start);

}  // namespace sprice::detail
