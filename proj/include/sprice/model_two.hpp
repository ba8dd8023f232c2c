#pragma once

// Subregion pricing. Prices on the FIXED points Q0 are frozen at p0; the
// agent picks prices on the FREE points Q1 and earns what the customers
// captured by Q1 pay.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sprice/ctransform.hpp"
#include "sprice/geometry.hpp"
#include "sprice/search.hpp"

namespace sprice {

/// A solver's own consistency check failed. Signals a defect, not bad input.
class PostconditionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PartitionContext {
  PointSet fixed;     ///< Q0
  PointSet free;      ///< Q1
  PointSet boundary;  ///< discrete interface, a subset of Q1
  PricePattern p0;    ///< full-size; only the FIXED entries are meaningful
  std::vector<double> v0;  ///< min over Q0 of c(x, y) + p0(y)
  double tol = 0.0;

  /// Requires a partitioned region and p0 finite and >= 0 on every FIXED point.
  static PartitionContext make(const Region& region, const CostTable& cost,
                               const PricePattern& p0);

  /// Full pattern: p0 on Q0, `on_free` (aligned with `free`) on Q1.
  PricePattern compose(const std::vector<double>& on_free) const;
  /// The FREE entries of a full pattern, aligned with `free`.
  std::vector<double> free_part(const PricePattern& p) const;
};

struct ProfitBreakdown {
  double h_form = 0.0;   ///< sum over Omega1 of f * max price on T_p(x) n Q1
  double vg_form = 0.0;  ///< sum over Omega1 of f * (v_p - min cost on T_p(x) n Q1)
  std::vector<bool> captured;  ///< Omega1 membership per point
  AssignmentMap assignment;    ///< chosen[x] is empty for Omega0 customers
};

/// Pi(p). FIXED entries of p are replaced by p0. Both integrand forms are
/// computed; they agree up to rounding.
ProfitBreakdown profit_breakdown(const PricePattern& p, const PartitionContext& ctx,
                                 const CostTable& cost, const CustomerMeasure& f);
double profit_Pi(const PricePattern& p, const PartitionContext& ctx, const CostTable& cost,
                 const CustomerMeasure& f);

struct ClampResult {
  PricePattern clamped;
  double profit_before = 0.0;
  double profit_after = 0.0;
};

/// p+ = max(p, 0) on Q1. Throws PostconditionFailure if Pi(p+) < Pi(p) - tol.
ClampResult nonneg_clamp_improves(const PricePattern& p, const PartitionContext& ctx,
                                  const CostTable& cost, const CustomerMeasure& f);

struct Reformulation {
  ValueFunction w;           ///< w_p, Subregion kind
  PricePattern p_tilde;      ///< p0 on Q0, -w^c on Q1
  double profit_p = 0.0;     ///< Pi(p)
  double profit_tilde = 0.0; ///< Pi(p~)
  double profit_J = 0.0;     ///< J(w)
  std::vector<bool> captured_p;
  std::vector<bool> captured_tilde;
};

/// Replaces p >= 0 by p~ and checks, on this instance: v_p~ = v_p; p~ <= p on
/// Q1; p~ >= 0; T_p(x) n Q1 inside T_p~(x) n Q1 on Omega1(p); Omega1(p) inside
/// Omega1(p~) = {w <= v0}; T_p~(x) n Q1 = d^{1,c} w(x) on Omega1(p~);
/// Pi(p~) >= Pi(p); Pi(p~) = J(w). Any failure throws PostconditionFailure.
Reformulation reformulate(const PricePattern& p, const PartitionContext& ctx,
                          const CostTable& cost, const CustomerMeasure& f);

/// J(w) = sum over {w <= v0} of f * (w - min cost over d^{1,c} w(x)).
/// Throws NotCConcave unless w is (Q1, c)-concave.
double profit_J(const ValueFunction& w, const PartitionContext& ctx, const CostTable& cost,
                const CustomerMeasure& f);

enum class ModelTwoMethod { WSearch, OneDReduction, BoundaryControl };

std::string to_string(ModelTwoMethod method);

struct ModelTwoDiagnostics {
  std::uint64_t evaluations = 0;
  std::uint64_t search_space = 0;
  std::vector<double> start_scores;
  /// Objective the method actually maximised (split form, 1D objective, J).
  double objective = 0.0;
  /// 1D reduction only: the two interface prices.
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<std::string> warnings;
};

struct ModelTwoReport {
  PricePattern optimal_price;  ///< equals p0 on Q0
  ValueFunction w_opt;         ///< Subregion kind
  double profit = 0.0;         ///< Pi(optimal_price) = J(w_opt)
  PointSet omega0;
  PointSet omega1;
  AssignmentMap assignment;
  ModelTwoMethod method = ModelTwoMethod::WSearch;
  ModelTwoDiagnostics diagnostics;
};

/// Report for the price pattern whose FREE part is `on_free`, after the
/// reformulation step.
ModelTwoReport model_two_report(const std::vector<double>& on_free, const PartitionContext& ctx,
                                const CostTable& cost, const CustomerMeasure& f,
                                ModelTwoMethod method);

/// Maximises J over w generated by quantised prices on Q1.
ModelTwoReport solve_w_search(const PartitionContext& ctx, const CostTable& cost,
                              const CustomerMeasure& f, const SearchConfig& search);

/// w_phi(x) = min over the interface of c(x, y) + phi(y).
std::vector<double> state_equation(const std::vector<double>& phi, const PartitionContext& ctx,
                                   const CostTable& cost);

/// Split-form objective of the control problem:
/// sum_{Q1} f w_phi + sum_{Q0 n {w_phi <= v0}} f (w_phi - lambda).
double control_objective(const std::vector<double>& phi, const PartitionContext& ctx,
                         const CostTable& cost, const CustomerMeasure& f);

/// True when phi is 1-Lipschitz for the cost on the interface and phi <= v0.
bool admissible_control(const std::vector<double>& phi, const PartitionContext& ctx,
                        const CostTable& cost);

/// Searches controls phi on the interface. Needs the Euclidean cost. In
/// exhaustive mode inadmissible controls are skipped; ascent projects onto
/// the admissible set after each move.
ModelTwoReport boundary_control_solve(const PartitionContext& ctx, const CostTable& cost,
                                      const CustomerMeasure& f, const SearchConfig& search);

struct WShape {
  bool ok = false;
  std::size_t rises = 0;  ///< unit-slope upward steps inside the window
  std::size_t falls = 0;  ///< unit-slope downward steps inside the window
  double kink = 0.0;      ///< coordinate where the slope turns
};

/// Checks the 1D metric structure of w on the fixed window: slope +1 then -1
/// (one cell around the turn may have a smaller slope).
WShape w_shape(const std::vector<double>& w, const Region& region, double tol);

}  // namespace sprice
