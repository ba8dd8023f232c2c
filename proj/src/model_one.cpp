#include "sprice/model_one.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polish.hpp"
#include "sprice/kernels.hpp"

namespace sprice {

namespace {

PointSet all_of(const CostTable& cost) {
  PointSet s(cost.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

// I(v) for a v already known to be c-concave; vc is v^c on the whole region.
double profit_I_given(std::span<const double> v, std::span<const double> vc,
                      const CostTable& cost, const CustomerMeasure& f, double tol) {
  double total = 0.0;
  const std::size_t n = cost.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (f[x] == 0.0) continue;
    double transport = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < n; ++y) {
      if (std::abs(v[x] + vc[y] - cost(x, y)) <= tol) transport = std::min(transport, cost(x, y));
    }
    if (transport == std::numeric_limits<double>::infinity()) {
      throw NotCConcave("empty c-superdifferential while evaluating I");
    }
    total += f[x] * (v[x] - transport);
  }
  return total;
}

ModelOneReport finish(const std::vector<double>& v, const CostTable& cost,
                      const CustomerMeasure& f, ModelOneMethod method) {
  const auto all = all_of(cost);
  const auto vc = c_transform(v, cost, all);
  std::vector<double> price(vc.size());
  std::transform(vc.begin(), vc.end(), price.begin(), [](double a) { return -a; });
  ModelOneReport r;
  r.optimal_price = PricePattern(std::move(price));
  r.optimal_value = ValueFunction{v, ValueKind::Full};
  r.assignment = assign(r.optimal_price, cost, all, tolerance_for(cost));
  r.profit = profit_F(r.optimal_price, cost, f);
  r.method = method;
  return r;
}


}  // namespace

std::string to_string(ModelOneMethod method) {
  switch (method) {
    case ModelOneMethod::MetricClosedForm: return "metric_closed_form";
    case ModelOneMethod::GeneralSearch: return "general_search";
    case ModelOneMethod::Quadratic1DReference: return "quadratic_reference";
  }
  return "unknown";
}

double profit_F(const PricePattern& p, const CostTable& cost, const CustomerMeasure& f) {
  if (f.size() != cost.size()) throw ValidationError("measure size does not match region");
  const auto a = assign(p, cost, all_of(cost), tolerance_for(cost));
  double total = 0.0;
  for (std::size_t x = 0; x < cost.size(); ++x) {
    if (f[x] != 0.0) total += f[x] * p[*a.chosen[x]];
  }
  return total;
}

double profit_I(const ValueFunction& v, const CostTable& cost, const CustomerMeasure& f) {
  if (v.size() != cost.size() || f.size() != cost.size()) {
    throw ValidationError("value function / measure size does not match region");
  }
  const double tol = tolerance_for(cost);
  const auto all = all_of(cost);
  if (!is_c_concave(v.values, cost, all, tol)) {
    throw NotCConcave("profit_I requires a c-concave value function");
  }
  const auto vc = c_transform(v.values, cost, all);
  return profit_I_given(v.values, vc, cost, f, tol);
}

std::vector<double> upper_value(const PricePattern& p0, const CostTable& cost) {
  return value_function(p0, cost).values;
}

ModelOneReport solve_metric(const PricePattern& p0, const CostTable& cost,
                            const CustomerMeasure& f) {
  if (!cost.is_metric()) throw ValidationError("solve_metric needs a metric_power cost with alpha <= 1");
  if (p0.size() != cost.size()) throw ValidationError("p0 size does not match region");
  // p_opt is 1-Lipschitz, so v_{p_opt} = p_opt and p_opt = -(p_opt)^c.
  const auto p_opt = value_function(p0, cost).values;
  ModelOneReport r;
  r.optimal_price = PricePattern(p_opt);
  r.optimal_value = ValueFunction{p_opt, ValueKind::Full};
  r.assignment = assign(r.optimal_price, cost, all_of(cost), tolerance_for(cost));
  r.profit = profit_F(r.optimal_price, cost, f);
  r.method = ModelOneMethod::MetricClosedForm;
  r.diagnostics.search_space = 1;
  return r;
}

ModelOneReport solve_general(const PricePattern& p0, const CostTable& cost,
                             const CustomerMeasure& f, const SearchConfig& search) {
  if (p0.size() != cost.size() || f.size() != cost.size()) {
    throw ValidationError("p0 / measure size does not match region");
  }
  const auto v0 = upper_value(p0, cost);
  const auto all = all_of(cost);
  const double tol = tolerance_for(cost);
  const double range = *std::max_element(v0.begin(), v0.end());

  // Generator g (prices) -> feasible c-concave v with 0 <= v <= v0.
  auto project = [&](std::span<const double> g) {
    auto v = envelope(cost, all, g);
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::min(v[x], v0[x]);
    return double_transform(v, cost, all);
  };
  auto objective = [&](std::span<const double> g) {
    const auto v = project(g);
    const auto vc = c_transform(v, cost, all);
    return profit_I_given(v, vc, cost, f, tol);
  };
  detail::PolishProblem pb;
  pb.cost = &cost;
  pb.f = &f;
  pb.sellers = all;
  pb.outside.assign(cost.size(), std::numeric_limits<double>::infinity());
  pb.cap = p0.values();
  for (double& c : pb.cap) c = std::min(c, range);
  pb.tol = tol;
  pb.score = [&](const std::vector<double>& q) {
    for (double v : q) {
      if (v < -tol) return -std::numeric_limits<double>::infinity();
    }
    return profit_F(PricePattern(q), cost, f);
  };
  auto tight_prices = [&](std::span<const double> g) {
    const auto vc = c_transform(project(g), cost, all);
    std::vector<double> p(vc.size());
    for (std::size_t y = 0; y < p.size(); ++y) p[y] = -vc[y];
    return p;
  };
  // Replace g by the tight prices -v^c generating the same v, then raise
  // every price as far as the customers' current choices allow.
  auto canonical = [&](std::span<double> g) {
    const auto p = tight_prices(g);
    const auto a = assign(PricePattern(p), cost, all, tol);
    std::vector<std::size_t> target(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) target[x] = *a.chosen[x];
    const auto q = detail::greatest_prices(pb, target);
    for (std::size_t y = 0; y < g.size(); ++y) g[y] = q.empty() ? p[y] : std::max(p[y], q[y]);
  };

  std::vector<std::vector<double>> seeds{v0};
  const auto outcome = maximize(cost.size(), 0.0, range, search, objective, seeds, canonical);
  std::vector<double> g = outcome.best;
  if (search.refinements > 0) g = detail::polish(pb, tight_prices(g));
  auto r = finish(project(g), cost, f, ModelOneMethod::GeneralSearch);
  r.diagnostics.evaluations = outcome.evaluations;
  r.diagnostics.search_space = outcome.space_size;
  r.diagnostics.start_scores = outcome.start_scores;
  return r;
}

QuadraticReference quadratic_1d_reference(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("quadratic reference is defined on [0, 1]");
  QuadraticReference r;
  r.v_opt = x <= 0.5 ? 0.5 * x * x : -0.5 * x * x + x - 0.25;
  r.p_opt = 0.5 * x - 0.25 * x * x;
  r.q_opt = std::max(2.0 * x - 1.0, 0.0);
  return r;
}

ModelOneReport solve_quadratic_reference(const Region& region, const CostTable& cost,
                                         const CustomerMeasure& f) {
  if (cost.kind() != CostKind::Quadratic || region.dimension() != 1) {
    throw ValidationError("quadratic reference needs a 1D region with quadratic cost");
  }
  std::vector<double> p(region.size());
  std::vector<double> v(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    const auto ref = quadratic_1d_reference(region.x(i));
    p[i] = ref.p_opt;
    v[i] = ref.v_opt;
  }
  ModelOneReport r;
  r.optimal_price = PricePattern(std::move(p));
  r.optimal_value = ValueFunction{std::move(v), ValueKind::Full};
  r.assignment = assign(r.optimal_price, cost, all_of(cost), tolerance_for(cost));
  r.profit = profit_F(r.optimal_price, cost, f);
  r.method = ModelOneMethod::Quadratic1DReference;
  return r;
}

}  // namespace sprice
