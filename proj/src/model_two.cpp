#include "sprice/model_two.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polish.hpp"
#include "sprice/kernels.hpp"

namespace sprice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double profit_slack(const PartitionContext& ctx, const CustomerMeasure& f) {
  return ctx.tol * (1.0 + f.total_mass());
}

// J for a w known to be (Q1, c)-concave; wc is w^c on Q1 (aligned).
double J_given(std::span<const double> w, std::span<const double> wc,
               const PartitionContext& ctx, const CostTable& cost, const CustomerMeasure& f) {
  double total = 0.0;
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (f[x] == 0.0 || w[x] > ctx.v0[x] + ctx.tol) continue;
    double transport = kInf;
    for (std::size_t k = 0; k < ctx.free.size(); ++k) {
      const std::size_t y = ctx.free[k];
      if (std::abs(w[x] + wc[k] - cost(x, y)) <= ctx.tol) transport = std::min(transport, cost(x, y));
    }
    if (transport == kInf) throw NotCConcave("empty (Q1,c)-superdifferential while evaluating J");
    total += f[x] * (w[x] - transport);
  }
  return total;
}

std::vector<double> tight_free_prices(std::span<const double> w, const PartitionContext& ctx,
                                      const CostTable& cost) {
  auto wc = c_transform(w, cost, ctx.free);
  for (double& u : wc) u = -u;
  return wc;
}

detail::PolishProblem polish_problem(const PartitionContext& ctx, const CostTable& cost,
                                     const CustomerMeasure& f, double cap) {
  detail::PolishProblem pb;
  pb.cost = &cost;
  pb.f = &f;
  pb.sellers = ctx.free;
  pb.outside = ctx.v0;
  pb.cap.assign(ctx.free.size(), cap);
  pb.tol = ctx.tol;
  pb.score = [&ctx, &cost, &f](const std::vector<double>& q) {
    for (double v : q) {
      if (v < -ctx.tol) return -kInf;
    }
    return profit_Pi(ctx.compose(q), ctx, cost, f);
  };
  return pb;
}

// Tight prices, then every price raised as far as the current choices allow.
void raise_prices(std::span<double> g, const detail::PolishProblem& pb,
                  const PartitionContext& ctx, const CostTable& cost) {
  const auto w = envelope(cost, ctx.free, g);
  const auto p = tight_free_prices(w, ctx, cost);
  const auto q = detail::greatest_prices(pb, detail::current_targets(pb, p));
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = q.empty() ? p[k] : std::max(p[k], q[k]);
}

PointSet members(const std::vector<bool>& flags, bool value) {
  PointSet out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] == value) out.push_back(i);
  }
  return out;
}

}  // namespace

PartitionContext PartitionContext::make(const Region& region, const CostTable& cost,
                                        const PricePattern& p0) {
  if (!region.partitioned()) throw ValidationError("model two needs a region with a fixed part");
  if (cost.size() != region.size() || p0.size() != region.size()) {
    throw ValidationError("cost / p0 size does not match region");
  }
  PartitionContext ctx;
  ctx.fixed = region.fixed_points();
  ctx.free = region.free_points();
  ctx.boundary = region.boundary_points();
  if (ctx.fixed.empty() || ctx.free.empty()) {
    throw ValidationError("model two needs nonempty fixed and free parts");
  }
  for (std::size_t y : ctx.fixed) {
    if (!p0.is_finite(y) || p0[y] < 0.0) {
      throw ValidationError("p0 must be finite and nonnegative on the fixed part");
    }
  }
  ctx.p0 = p0;
  ctx.v0 = value_function(p0, cost, ctx.fixed).values;
  ctx.tol = tolerance_for(cost);
  return ctx;
}

PricePattern PartitionContext::compose(const std::vector<double>& on_free) const {
  if (on_free.size() != free.size()) throw ValidationError("free price vector has wrong size");
  std::vector<double> p(p0.values());
  for (std::size_t k = 0; k < free.size(); ++k) p[free[k]] = on_free[k];
  return PricePattern(std::move(p));
}

std::vector<double> PartitionContext::free_part(const PricePattern& p) const {
  std::vector<double> out(free.size());
  for (std::size_t k = 0; k < free.size(); ++k) out[k] = p[free[k]];
  return out;
}

ProfitBreakdown profit_breakdown(const PricePattern& p, const PartitionContext& ctx,
                                 const CostTable& cost, const CustomerMeasure& f) {
  if (p.size() != cost.size() || f.size() != cost.size()) {
    throw ValidationError("price / measure size does not match region");
  }
  p.require_finite_on(ctx.free, "profit_Pi");
  const auto full = ctx.compose(ctx.free_part(p));
  PointSet all(cost.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  ProfitBreakdown out;
  out.assignment = assign(full, cost, all, ctx.tol);
  out.assignment.chosen = tie_break(out.assignment, full, ctx.free);
  out.captured.assign(cost.size(), false);
  for (std::size_t x = 0; x < cost.size(); ++x) {
    if (!out.assignment.chosen[x]) continue;
    out.captured[x] = true;
    if (f[x] == 0.0) continue;
    double transport = kInf;
    for (std::size_t y : out.assignment.argmin[x]) {
      if (!std::binary_search(ctx.free.begin(), ctx.free.end(), y)) continue;
      transport = std::min(transport, cost(x, y));
    }
    out.h_form += f[x] * full[*out.assignment.chosen[x]];
    out.vg_form += f[x] * (out.assignment.expenditure[x] - transport);
  }
  return out;
}

double profit_Pi(const PricePattern& p, const PartitionContext& ctx, const CostTable& cost,
                 const CustomerMeasure& f) {
  return profit_breakdown(p, ctx, cost, f).h_form;
}

ClampResult nonneg_clamp_improves(const PricePattern& p, const PartitionContext& ctx,
                                  const CostTable& cost, const CustomerMeasure& f) {
  auto q = ctx.free_part(p);
  for (double& v : q) v = std::max(v, 0.0);
  ClampResult r;
  r.clamped = ctx.compose(q);
  r.profit_before = profit_Pi(p, ctx, cost, f);
  r.profit_after = profit_Pi(r.clamped, ctx, cost, f);
  if (r.profit_after < r.profit_before - profit_slack(ctx, f)) {
    throw PostconditionFailure("clamping prices at zero lowered the profit");
  }
  return r;
}

Reformulation reformulate(const PricePattern& p, const PartitionContext& ctx,
                          const CostTable& cost, const CustomerMeasure& f) {
  const auto on_free = ctx.free_part(p);
  for (double v : on_free) {
    if (!(v >= 0.0)) throw ValidationError("reformulate needs p >= 0 on the free part");
  }
  const auto full = ctx.compose(on_free);
  Reformulation r;
  r.w = value_function(full, cost, ctx.free, ValueKind::Subregion);
  const auto wc = c_transform(r.w.values, cost, ctx.free);
  std::vector<double> tilde(ctx.free.size());
  for (std::size_t k = 0; k < tilde.size(); ++k) tilde[k] = -wc[k];
  r.p_tilde = ctx.compose(tilde);

  const auto before = profit_breakdown(full, ctx, cost, f);
  const auto after = profit_breakdown(r.p_tilde, ctx, cost, f);
  r.profit_p = before.h_form;
  r.profit_tilde = after.h_form;
  r.profit_J = J_given(r.w.values, wc, ctx, cost, f);
  r.captured_p = before.captured;
  r.captured_tilde = after.captured;

  const double tol = ctx.tol;
  std::vector<std::string> failed;
  const auto v_p = value_function(full, cost);
  const auto v_t = value_function(r.p_tilde, cost);
  for (std::size_t x = 0; x < cost.size(); ++x) {
    if (std::abs(v_p[x] - v_t[x]) > tol) { failed.emplace_back("v_p~ = v_p"); break; }
  }
  for (std::size_t k = 0; k < tilde.size(); ++k) {
    if (tilde[k] > on_free[k] + tol) { failed.emplace_back("p~ <= p on Q1"); break; }
  }
  if (std::any_of(tilde.begin(), tilde.end(), [&](double v) { return v < -tol; })) {
    failed.emplace_back("p~ >= 0");
  }
  const auto sd = superdifferentials(r.w.values, wc, cost, ctx.free, tol);
  for (std::size_t x = 0; x < cost.size(); ++x) {
    const bool in_w = r.w[x] <= ctx.v0[x] + tol;
    if (before.captured[x] && !after.captured[x]) failed.emplace_back("Omega1(p) inside Omega1(p~)");
    if (after.captured[x] != in_w) failed.emplace_back("Omega1(p~) = {w <= v0}");
    auto in_free = [&](std::size_t y) {
      return std::binary_search(ctx.free.begin(), ctx.free.end(), y);
    };
    if (before.captured[x]) {
      for (std::size_t y : before.assignment.argmin[x]) {
        if (in_free(y) && std::find(after.assignment.argmin[x].begin(),
                                    after.assignment.argmin[x].end(), y) ==
                              after.assignment.argmin[x].end()) {
          failed.emplace_back("T_p n Q1 inside T_p~ n Q1");
        }
      }
    }
    if (after.captured[x]) {
      PointSet t1;
      for (std::size_t y : after.assignment.argmin[x]) {
        if (in_free(y)) t1.push_back(y);
      }
      if (t1 != sd[x]) failed.emplace_back("T_p~ n Q1 = d^{1,c} w");
    }
  }
  if (r.profit_tilde < r.profit_p - profit_slack(ctx, f)) failed.emplace_back("Pi(p~) >= Pi(p)");
  if (std::abs(r.profit_tilde - r.profit_J) > profit_slack(ctx, f)) failed.emplace_back("Pi(p~) = J(w)");
  if (!failed.empty()) {
    std::sort(failed.begin(), failed.end());
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
    std::string msg = "reformulation check failed:";
    for (const auto& s : failed) msg += " [" + s + "]";
    throw PostconditionFailure(msg);
  }
  return r;
}

double profit_J(const ValueFunction& w, const PartitionContext& ctx, const CostTable& cost,
                const CustomerMeasure& f) {
  if (w.size() != cost.size() || f.size() != cost.size()) {
    throw ValidationError("w / measure size does not match region");
  }
  if (!is_c_concave(w.values, cost, ctx.free, ctx.tol)) {
    throw NotCConcave("profit_J requires a (Q1,c)-concave function");
  }
  const auto wc = c_transform(w.values, cost, ctx.free);
  return J_given(w.values, wc, ctx, cost, f);
}

std::string to_string(ModelTwoMethod method) {
  switch (method) {
    case ModelTwoMethod::WSearch: return "w_search";
    case ModelTwoMethod::OneDReduction: return "one_d";
    case ModelTwoMethod::BoundaryControl: return "boundary_control";
  }
  return "unknown";
}

ModelTwoReport model_two_report(const std::vector<double>& on_free, const PartitionContext& ctx,
                                const CostTable& cost, const CustomerMeasure& f,
                                ModelTwoMethod method) {
  std::vector<double> clamped(on_free);
  for (double& v : clamped) v = std::max(v, 0.0);
  const auto ref = reformulate(ctx.compose(clamped), ctx, cost, f);
  auto breakdown = profit_breakdown(ref.p_tilde, ctx, cost, f);
  ModelTwoReport r;
  r.optimal_price = ref.p_tilde;
  r.w_opt = ref.w;
  r.profit = breakdown.h_form;
  r.omega1 = members(breakdown.captured, true);
  r.omega0 = members(breakdown.captured, false);
  r.assignment = std::move(breakdown.assignment);
  r.method = method;
  return r;
}

ModelTwoReport solve_w_search(const PartitionContext& ctx, const CostTable& cost,
                              const CustomerMeasure& f, const SearchConfig& search) {
  if (f.size() != cost.size()) throw ValidationError("measure size does not match region");
  const double hi = *std::max_element(ctx.v0.begin(), ctx.v0.end());
  const auto pb = polish_problem(ctx, cost, f, hi);

  auto objective = [&](std::span<const double> g) {
    const auto w = envelope(cost, ctx.free, g);
    const auto wc = c_transform(w, cost, ctx.free);
    return J_given(w, wc, ctx, cost, f);
  };
  auto projector = [&](std::span<double> g) { raise_prices(g, pb, ctx, cost); };

  std::vector<double> seed(ctx.free.size());
  for (std::size_t k = 0; k < seed.size(); ++k) seed[k] = ctx.v0[ctx.free[k]];
  const auto outcome = maximize(ctx.free.size(), 0.0, hi, search, objective, {seed},
                                search.mode == SearchMode::Ascent ? Projector(projector) : Projector());

  auto best = tight_free_prices(envelope(cost, ctx.free, outcome.best), ctx, cost);
  if (search.mode == SearchMode::Ascent && search.refinements > 0) {
    best = detail::polish(pb, std::move(best));
  }
  auto r = model_two_report(best, ctx, cost, f, ModelTwoMethod::WSearch);
  r.diagnostics.evaluations = outcome.evaluations;
  r.diagnostics.search_space = outcome.space_size;
  r.diagnostics.start_scores = outcome.start_scores;
  r.diagnostics.objective = r.profit;
  return r;
}

std::vector<double> state_equation(const std::vector<double>& phi, const PartitionContext& ctx,
                                   const CostTable& cost) {
  if (phi.size() != ctx.boundary.size()) throw ValidationError("control has wrong size");
  return envelope(cost, ctx.boundary, phi);
}

bool admissible_control(const std::vector<double>& phi, const PartitionContext& ctx,
                        const CostTable& cost) {
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const std::size_t yi = ctx.boundary[i];
    if (phi[i] > ctx.v0[yi] + ctx.tol) return false;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      if (phi[i] - phi[j] > cost(yi, ctx.boundary[j]) + ctx.tol) return false;
    }
  }
  return true;
}

double control_objective(const std::vector<double>& phi, const PartitionContext& ctx,
                         const CostTable& cost, const CustomerMeasure& f) {
  const auto w = state_equation(phi, ctx, cost);
  const auto wc = c_transform(w, cost, ctx.free);
  double total = 0.0;
  for (std::size_t x : ctx.free) total += f[x] * w[x];
  for (std::size_t x : ctx.fixed) {
    if (f[x] == 0.0 || w[x] > ctx.v0[x] + ctx.tol) continue;
    double lambda = kInf;
    for (std::size_t k = 0; k < ctx.free.size(); ++k) {
      const std::size_t y = ctx.free[k];
      if (std::abs(w[x] + wc[k] - cost(x, y)) <= ctx.tol) lambda = std::min(lambda, cost(x, y));
    }
    total += f[x] * (w[x] - lambda);
  }
  return total;
}

ModelTwoReport boundary_control_solve(const PartitionContext& ctx, const CostTable& cost,
                                      const CustomerMeasure& f, const SearchConfig& search) {
  if (!cost.is_euclidean()) throw ValidationError("boundary control needs the distance cost");
  if (ctx.boundary.empty()) throw ValidationError("boundary control needs a nonempty interface");
  const std::size_t m = ctx.boundary.size();
  double hi = 0.0;
  for (std::size_t y : ctx.boundary) hi = std::max(hi, ctx.v0[y]);

  // Largest admissible control below phi: cap at v0, then the 1-Lipschitz
  // lower envelope on the interface.
  auto project = [&](std::span<double> phi) {
    std::vector<double> capped(m);
    for (std::size_t i = 0; i < m; ++i) capped[i] = std::min(phi[i], ctx.v0[ctx.boundary[i]]);
    for (std::size_t i = 0; i < m; ++i) {
      double best = capped[i];
      for (std::size_t j = 0; j < m; ++j) {
        best = std::min(best, capped[j] + cost(ctx.boundary[i], ctx.boundary[j]));
      }
      phi[i] = best;
    }
  };
  Objective objective;
  if (search.mode == SearchMode::Exhaustive) {
    objective = [&](std::span<const double> g) {
      const std::vector<double> phi(g.begin(), g.end());
      return admissible_control(phi, ctx, cost) ? control_objective(phi, ctx, cost, f) : -kInf;
    };
  } else {
    objective = [&](std::span<const double> g) {
      std::vector<double> phi(g.begin(), g.end());
      project(phi);
      return control_objective(phi, ctx, cost, f);
    };
  }
  std::vector<double> seed(m);
  for (std::size_t i = 0; i < m; ++i) seed[i] = ctx.v0[ctx.boundary[i]];
  const auto outcome = maximize(m, 0.0, hi, search, objective, {seed},
                                search.mode == SearchMode::Ascent ? Projector(project) : Projector());

  std::vector<double> phi = outcome.best;
  if (search.mode == SearchMode::Ascent) project(phi);
  const auto w = state_equation(phi, ctx, cost);
  auto r = model_two_report(tight_free_prices(w, ctx, cost), ctx, cost, f,
                            ModelTwoMethod::BoundaryControl);
  r.diagnostics.evaluations = outcome.evaluations;
  r.diagnostics.search_space = outcome.space_size;
  r.diagnostics.start_scores = outcome.start_scores;
  r.diagnostics.objective = outcome.score;
  if (outcome.score == -kInf) r.diagnostics.warnings.emplace_back("no admissible control on the grid");
  return r;
}

WShape w_shape(const std::vector<double>& w, const Region& region, double tol) {
  WShape s;
  const auto fixed = region.fixed_points();
  if (region.dimension() != 1 || fixed.empty() || fixed.front() == 0 ||
      fixed.back() + 1 >= region.size()) {
    return s;
  }
  const std::size_t lo = fixed.front() - 1;
  const std::size_t hi = fixed.back() + 1;
  int phase = 0;  // 0 rising, 1 turned (one shallow cell allowed), 2 falling
  bool shallow_used = false;
  s.ok = true;
  s.kink = region.x(lo);
  for (std::size_t i = lo; i < hi; ++i) {
    const double h = region.x(i + 1) - region.x(i);
    const double slope = (w[i + 1] - w[i]) / h;
    const double eps = tol / h;
    if (std::abs(slope - 1.0) <= eps && phase == 0) {
      ++s.rises;
      s.kink = region.x(i + 1);
    } else if (std::abs(slope + 1.0) <= eps) {
      ++s.falls;
      phase = 2;
    } else if (std::abs(slope) < 1.0 + eps && phase == 0 && !shallow_used) {
      shallow_used = true;
      phase = 1;
      // the turn sits where the two unit-slope lines meet inside this cell
      s.kink = 0.5 * (region.x(i) + region.x(i + 1) + (w[i + 1] - w[i]));
    } else {
      s.ok = false;
    }
  }
  return s;
}

}  // namespace sprice
