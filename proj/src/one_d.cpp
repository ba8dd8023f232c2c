#include "sprice/one_d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sprice/kernels.hpp"

namespace sprice {

namespace {

constexpr double kSnap = 1e-9;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Cumulative Cumulative::uniform(double lo, double hi, double mass) {
  if (!(hi > lo) || !(mass > 0.0)) throw ValidationError("uniform cumulative needs lo < hi, mass > 0");
  Cumulative F;
  F.lo_ = lo;
  F.hi_ = hi;
  F.total_ = mass;
  return F;
}

Cumulative Cumulative::from_measure(const Region& region, const CustomerMeasure& f) {
  if (region.dimension() != 1) throw ValidationError("cumulative needs a 1D region");
  if (f.size() != region.size()) throw ValidationError("measure size does not match region");
  if (!(f.total_mass() > 0.0)) throw ValidationError("measure has zero mass");
  Cumulative F;
  F.lo_ = region.x(0);
  F.hi_ = region.x(region.size() - 1);
  F.total_ = f.total_mass();
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (f[i] == 0.0) continue;
    F.atoms_x_.push_back(region.x(i));
    F.atoms_w_.push_back(f[i]);
  }
  return F;
}

double Cumulative::operator()(double t) const {
  if (!atomic()) {
    const double s = std::clamp(t, lo_, hi_);
    return total_ * (s - lo_) / (hi_ - lo_);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms_x_.size() && atoms_x_[i] <= t + kSnap; ++i) sum += atoms_w_[i];
  return sum;
}

double Cumulative::before(double t) const {
  if (!atomic()) return (*this)(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms_x_.size() && atoms_x_[i] < t - kSnap; ++i) sum += atoms_w_[i];
  return sum;
}

double Cumulative::mass_between(double from, double to) const {
  return to <= from ? 0.0 : (*this)(to) - (*this)(from);
}

double Cumulative::left_moment(double alpha) const {
  if (!atomic()) {
    const double a = std::clamp(alpha, lo_, hi_);
    return total_ / (hi_ - lo_) * 0.5 * (a - lo_) * (a - lo_);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms_x_.size() && atoms_x_[i] <= alpha + kSnap; ++i) {
    sum += atoms_w_[i] * (alpha - atoms_x_[i]);
  }
  return sum;
}

double Cumulative::right_moment(double beta) const {
  if (!atomic()) {
    const double b = std::clamp(beta, lo_, hi_);
    return total_ / (hi_ - lo_) * 0.5 * (hi_ - b) * (hi_ - b);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms_x_.size(); ++i) {
    if (atoms_x_[i] > beta + kSnap) sum += atoms_w_[i] * (atoms_x_[i] - beta);
  }
  return sum;
}

std::vector<double> Cumulative::atoms_near(double t, double radius) const {
  std::vector<double> out;
  for (double x : atoms_x_) {
    if (std::abs(x - t) <= radius) out.push_back(x);
  }
  return out;
}

OneDBreakpoints one_d_breakpoints(double p1, double p2, double alpha, double beta, double p0) {
  return {0.5 * (p2 - p1 + beta + alpha), p0 - p1 + alpha, p2 - p0 + beta};
}

double one_d_objective(double p1, double p2, double alpha, double beta, double p0,
                       const Cumulative& F) {
  const auto s = one_d_breakpoints(p1, p2, alpha, beta, p0);
  // s0 <= s1 exactly when s0 >= s2: both sides reach the indifference point
  // snapped so coincident breakpoints cannot count one atom twice
  if (s.s0 <= s.s1 + kSnap) {
    return p1 * F.before(s.s0) + std::max(p1, p2) * F.atom_at(s.s0) + p2 * (F.total() - F(s.s0));
  }
  return p1 * F(s.s1) + p2 * (F.total() - F.before(s.s2));
}

double one_d_four_piece(double p1, double p2, double alpha, double beta, double p0,
                        const Cumulative& F) {
  if (!F.atomic()) {
    const auto s = one_d_breakpoints(p1, p2, alpha, beta, p0);
    const double left_end = std::min(s.s0, s.s1);
    const double right_start = std::max(s.s0, s.s2);
    // [lo, alpha], (alpha, left_end], (right_start, beta], (beta, hi]
    const double outer_left = p1 * F(alpha) + F.left_moment(alpha);
    const double inner_left = p1 * F.mass_between(alpha, left_end);
    const double inner_right = p2 * F.mass_between(right_start, beta);
    const double outer_right = p2 * (F.total() - F(beta)) + F.right_moment(beta);
    return outer_left + inner_left + inner_right + outer_right;
  }
  // customer by customer
  double sum = 0.0;
  for (std::size_t i = 0; i < F.atoms().size(); ++i) {
    const double x = F.atoms()[i];
    const double w = F.weights()[i];
    if (x <= alpha + kSnap) {
      sum += w * (p1 + std::max(alpha - x, 0.0));
    } else if (x >= beta - kSnap) {
      sum += w * (p2 + std::max(x - beta, 0.0));
    } else {
      const double left = p1 + x - alpha;
      const double right = p2 + beta - x;
      if (std::min(left, right) > p0 + kSnap) continue;
      if (std::abs(left - right) <= kSnap) sum += w * std::max(p1, p2);
      else sum += w * (left < right ? p1 : p2);
    }
  }
  return sum;
}

bool one_d_feasible(double p1, double p2, double alpha, double beta, double p0) {
  constexpr double eps = 1e-12;
  return p1 <= p0 + eps && p2 <= p0 + eps && std::abs(p2 - p1) <= beta - alpha + eps;
}

OneDResult one_d_optimize(double alpha, double beta, double p0, const Cumulative& F,
                          std::size_t grid_n) {
  if (!(alpha < beta)) throw ValidationError("1D reduction needs alpha < beta");
  if (!(p0 >= 0.0) || !std::isfinite(p0)) throw ValidationError("1D reduction needs finite p0 >= 0");
  if (grid_n < 2) throw ValidationError("1D reduction needs at least 2 grid points per axis");
  const double step = p0 / static_cast<double>(grid_n - 1);
  auto level = [&](std::size_t i) { return i + 1 == grid_n ? p0 : step * static_cast<double>(i); };

  const auto n = static_cast<std::int64_t>(grid_n);
  std::vector<double> row_best(grid_n, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> row_arg(grid_n, 0);
  std::vector<std::size_t> row_count(grid_n, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double p1 = level(a);
    for (std::size_t b = 0; b < grid_n; ++b) {
      const double p2 = level(b);
      if (!one_d_feasible(p1, p2, alpha, beta, p0)) continue;
      ++row_count[a];
      const double v = one_d_objective(p1, p2, alpha, beta, p0, F);
      if (v > row_best[a]) {
        row_best[a] = v;
        row_arg[a] = b;
      }
    }
  }
  OneDResult r;
  r.step = step;
  std::size_t best_row = grid_n;
  for (std::size_t a = 0; a < grid_n; ++a) {
    r.feasible_cells += row_count[a];
    if (row_count[a] == 0) continue;
    if (best_row == grid_n || row_best[a] > row_best[best_row]) best_row = a;
  }
  if (best_row == grid_n) throw ValidationError("no (p1, p2) cell satisfies the constraints");
  r.p1 = level(best_row);
  r.p2 = level(row_arg[best_row]);
  r.objective = row_best[best_row];
  r.four_piece = one_d_four_piece(r.p1, r.p2, alpha, beta, p0, F);
  r.offset = F.left_moment(alpha) + F.right_moment(beta);
  r.breakpoints = one_d_breakpoints(r.p1, r.p2, alpha, beta, p0);
  if (F.atomic()) {
    const double s[] = {r.breakpoints.s0, r.breakpoints.s1, r.breakpoints.s2};
    const char* names[] = {"s0", "s1", "s2"};
    for (int k = 0; k < 3; ++k) {
      if (!F.atoms_near(s[k], kSnap).empty()) {
        r.warnings.push_back("customer mass sits on breakpoint " + std::string(names[k]) + " = " +
                             fmt(s[k]) + "; tied customers are assigned by the tie rule");
      }
    }
  }
  return r;
}

ModelTwoReport one_d_reduction(const Region& region, const PartitionContext& ctx,
                               const CostTable& cost, const CustomerMeasure& f,
                               std::size_t grid_n) {
  if (region.dimension() != 1 || !region.window()) {
    throw ValidationError("1D reduction needs an interval region with a fixed window");
  }
  if (!cost.is_euclidean()) throw ValidationError("1D reduction needs the distance cost");
  const double p0 = ctx.p0[ctx.fixed.front()];
  for (std::size_t y : ctx.fixed) {
    if (ctx.p0[y] != p0) throw ValidationError("1D reduction needs p0 constant on the fixed part");
  }
  // Interface points: the free neighbours of the fixed run.
  const std::size_t left = ctx.fixed.front() - 1;
  const std::size_t right = ctx.fixed.back() + 1;
  if (ctx.fixed.front() == 0 || right >= region.size() ||
      ctx.fixed.back() - ctx.fixed.front() + 1 != ctx.fixed.size()) {
    throw ValidationError("1D reduction needs a single fixed run with free points on both sides");
  }
  const double alpha = region.x(left);
  const double beta = region.x(right);
  const auto F = Cumulative::from_measure(region, f);
  const auto best = one_d_optimize(alpha, beta, p0, F, grid_n);

  const std::vector<double> phi{best.p1, best.p2};
  const PointSet ends{left, right};
  const auto w = envelope(cost, ends, phi);
  auto wc = c_transform(w, cost, ctx.free);
  for (double& u : wc) u = -u;
  auto r = model_two_report(wc, ctx, cost, f, ModelTwoMethod::OneDReduction);
  r.diagnostics.objective = best.objective;
  r.diagnostics.p1 = best.p1;
  r.diagnostics.p2 = best.p2;
  r.diagnostics.search_space = best.feasible_cells;
  r.diagnostics.evaluations = best.feasible_cells;
  r.diagnostics.warnings = best.warnings;
  return r;
}

}  // namespace sprice
