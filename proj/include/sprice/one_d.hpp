#pragma once

// The interval case with distance cost and constant p0: Q = [a, b], fixed
// window (alpha, beta). The agent's problem collapses to two interface
// prices p1 (at alpha) and p2 (at beta).

#include <string>
#include <vector>

#include "sprice/geometry.hpp"
#include "sprice/model_two.hpp"

namespace sprice {

/// Cumulative distribution F(t) = f([a, t]) of the customers.
class Cumulative {
 public:
  /// Uniform density of the given total mass on [lo, hi].
  static Cumulative uniform(double lo = 0.0, double hi = 1.0, double mass = 1.0);
  /// Atoms at the points of a 1D region. F is right-continuous: an atom
  /// within 1e-9 of t counts as <= t.
  static Cumulative from_measure(const Region& region, const CustomerMeasure& f);

  double operator()(double t) const;
  /// Left limit: mass strictly before t (atoms within 1e-9 of t excluded).
  double before(double t) const;
  double atom_at(double t) const { return (*this)(t) - before(t); }
  double total() const { return total_; }
  bool atomic() const { return !atoms_x_.empty(); }

  /// int_{[lo, alpha]} (alpha - s) df(s)
  double left_moment(double alpha) const;
  /// int_{[beta, hi]} (s - beta) df(s)
  double right_moment(double beta) const;
  /// int over (from, to] of df, to <= from gives 0.
  double mass_between(double from, double to) const;
  const std::vector<double>& atoms() const { return atoms_x_; }
  const std::vector<double>& weights() const { return atoms_w_; }
  /// Atom coordinates within `radius` of t.
  std::vector<double> atoms_near(double t, double radius) const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  double total_ = 0.0;
  std::vector<double> atoms_x_;
  std::vector<double> atoms_w_;
};

struct OneDBreakpoints {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
};

OneDBreakpoints one_d_breakpoints(double p1, double p2, double alpha, double beta, double p0);

/// Profit earned inside the window plus p1 F(alpha) + p2 (M - F(beta)).
/// Customers tied with the fixed part go to the agent; a customer at s0 pays
/// max(p1, p2). For continuous F this is p1 F(s0 ^ s1) + p2 (M - F(s0 v s2)).
double one_d_objective(double p1, double p2, double alpha, double beta, double p0,
                       const Cumulative& F);

/// The four-piece profit: customers left of alpha pay p1 + alpha - s, those
/// up to s0 ^ s1 pay p1, those from s0 v s2 pay p2, those right of beta pay
/// p2 + s - beta. Equals the objective plus a constant.
double one_d_four_piece(double p1, double p2, double alpha, double beta, double p0,
                        const Cumulative& F);

/// p1 <= p0, p2 <= p0, |p2 - p1| <= beta - alpha.
bool one_d_feasible(double p1, double p2, double alpha, double beta, double p0);

struct OneDResult {
  double p1 = 0.0;
  double p2 = 0.0;
  double objective = 0.0;
  double four_piece = 0.0;
  /// left_moment(alpha) + right_moment(beta): four_piece - objective.
  double offset = 0.0;
  OneDBreakpoints breakpoints;
  std::size_t feasible_cells = 0;
  double step = 0.0;
  std::vector<std::string> warnings;
};

/// Grid maximisation over [0, p0]^2 with grid_n points per axis; ties go to
/// the smaller p1, then the smaller p2.
OneDResult one_d_optimize(double alpha, double beta, double p0, const Cumulative& F,
                          std::size_t grid_n);

/// Region form: the window ends are the interface points, F comes from f,
/// and the report carries the prices the two interface values generate.
/// Needs a 1D region with a fixed window, the distance cost and constant p0.
ModelTwoReport one_d_reduction(const Region& region, const PartitionContext& ctx,
                               const CostTable& cost, const CustomerMeasure& f,
                               std::size_t grid_n);

}  // namespace sprice
