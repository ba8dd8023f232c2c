#include "sprice/nash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sprice/ctransform.hpp"
#include "sprice/kernels.hpp"
#include "sprice/model_two.hpp"

namespace sprice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_distance(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

// The mover's market seen as a fixed-price problem: the mover's points are
// FREE (slots 0..m-1), the opponent's points are FIXED copies behind them.
struct Doubled {
  CostTable cost;
  CustomerMeasure f;
  PartitionContext ctx;
};

Doubled doubled_market(Player player, const std::vector<double>& opponent,
                       const GameContext& g, const CostTable& cost) {
  const auto& own = g.own(player);
  const auto& other = g.other(player);
  std::vector<std::size_t> index(own);
  index.insert(index.end(), other.begin(), other.end());
  Doubled d;
  d.cost = cost.reindexed(index);
  std::vector<double> weights(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) weights[k] = g.f[index[k]];
  d.f = CustomerMeasure(std::move(weights));
  std::vector<double> p0(index.size(), 0.0);
  for (std::size_t j = 0; j < other.size(); ++j) {
    p0[own.size() + j] = opponent[j];
    d.ctx.fixed.push_back(own.size() + j);
  }
  for (std::size_t k = 0; k < own.size(); ++k) d.ctx.free.push_back(k);
  d.ctx.p0 = PricePattern(std::move(p0));
  d.ctx.v0 = value_function(d.ctx.p0, d.cost, d.ctx.fixed).values;
  d.ctx.tol = tolerance_for(d.cost);
  return d;
}

double mover_payoff(Player player, const std::vector<double>& mine,
                    const std::vector<double>& opponent, const GameContext& g,
                    const CostTable& cost) {
  const auto pay = player == Player::A ? payoffs(mine, opponent, g, cost)
                                       : payoffs(opponent, mine, g, cost);
  return player == Player::A ? pay.a : pay.b;
}

}  // namespace

std::string to_string(Player player) { return player == Player::A ? "A" : "B"; }

GameContext GameContext::make(const CostTable& cost, std::vector<bool> in_a,
                              std::vector<bool> in_b, const CustomerMeasure& f, double cap) {
  const std::size_t n = cost.size();
  if (in_a.size() != n || in_b.size() != n || f.size() != n) {
    throw ValidationError("game masks / measure size does not match region");
  }
  if (!(cap > 0.0) || !std::isfinite(cap)) throw ValidationError("game price cap must be positive");
  GameContext g;
  std::vector<double> weights(f.weights());
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_a[i] && !in_b[i]) throw ValidationError("every point must belong to A or B");
    if (in_a[i]) g.a.push_back(i);
    if (in_b[i]) g.b.push_back(i);
    if (in_a[i] && in_b[i]) {
      g.zeroed_mass += weights[i];
      weights[i] = 0.0;
    }
  }
  if (g.a.empty() || g.b.empty()) throw ValidationError("both players need at least one point");
  g.in_a = std::move(in_a);
  g.in_b = std::move(in_b);
  g.f = CustomerMeasure(std::move(weights));
  g.cap = cap;
  g.tol = tolerance_for(cost);
  return g;
}

GameContext GameContext::split_interval(const Region& region, const CostTable& cost,
                                        double split, const CustomerMeasure& f, double cap) {
  if (region.dimension() != 1) throw ValidationError("interval split needs a 1D region");
  std::vector<bool> in_a(region.size());
  std::vector<bool> in_b(region.size());
  const double snap = 1e-12 * (1.0 + std::abs(split));
  for (std::size_t i = 0; i < region.size(); ++i) {
    in_a[i] = region.x(i) <= split + snap;
    in_b[i] = region.x(i) >= split - snap;
  }
  return make(cost, std::move(in_a), std::move(in_b), f, cap);
}

Payoffs payoffs(const std::vector<double>& p, const std::vector<double>& q,
                const GameContext& ctx, const CostTable& cost) {
  if (p.size() != ctx.a.size() || q.size() != ctx.b.size()) {
    throw ValidationError("strategy size does not match the player's region");
  }
  const std::size_t n = cost.size();
  Payoffs out;
  out.served_by.resize(n);
  out.chosen.resize(n);
  out.paid.resize(n);
  // cheapest offer and, among offers within tol of it, the highest price
  auto best_offer = [&](std::size_t x, const PointSet& pts, const std::vector<double>& price,
                        double& value, std::size_t& where, double& paid) {
    value = kInf;
    for (std::size_t k = 0; k < pts.size(); ++k) value = std::min(value, cost(x, pts[k]) + price[k]);
    paid = -kInf;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (cost(x, pts[k]) + price[k] <= value + ctx.tol && price[k] > paid) {
        paid = price[k];
        where = pts[k];
      }
    }
  };
  for (std::size_t x = 0; x < n; ++x) {
    double va, vb, pa, pb;
    std::size_t ya = 0, yb = 0;
    best_offer(x, ctx.a, p, va, ya, pa);
    best_offer(x, ctx.b, q, vb, yb, pb);
    bool to_a;
    if (va < vb - ctx.tol) {
      to_a = true;
    } else if (vb < va - ctx.tol) {
      to_a = false;
    } else {
      to_a = ctx.in_a[x];
    }
    out.served_by[x] = to_a ? Player::A : Player::B;
    out.chosen[x] = to_a ? ya : yb;
    out.paid[x] = to_a ? pa : pb;
    (to_a ? out.a : out.b) += ctx.f[x] * out.paid[x];
  }
  return out;
}

std::vector<double> strategy_levels(const GameContext& ctx, const SearchConfig& config) {
  const double step = config.price_step > 0.0 ? config.price_step : ctx.cap / 200.0;
  const auto count = static_cast<std::size_t>(std::llround(ctx.cap / step)) + 1;
  return quantized_levels(0.0, ctx.cap, std::max<std::size_t>(count, 2));
}

BestResponse best_response(Player player, const std::vector<double>& opponent,
                           const GameContext& ctx, const CostTable& cost,
                           const SearchConfig& search,
                           const std::optional<std::vector<double>>& current) {
  const auto& own = ctx.own(player);
  const auto& other = ctx.other(player);
  if (opponent.size() != other.size()) throw ValidationError("opponent price has wrong size");
  for (double v : opponent) {
    if (!std::isfinite(v)) throw ValidationError("opponent price must be finite");
  }
  const auto levels = strategy_levels(ctx, search);
  const double step = levels[1] - levels[0];
  const auto market = doubled_market(player, opponent, ctx, cost);

  auto floor_to_grid = [&](double v) {
    const double k = std::floor(v / step + 1e-9);
    return std::clamp(k * step, 0.0, ctx.cap);
  };
  auto score = [&](std::span<const double> g) {
    return mover_payoff(player, std::vector<double>(g.begin(), g.end()), opponent, ctx, cost);
  };
  auto tighten = [&](std::span<double> g) {
    const auto w = envelope(market.cost, market.ctx.free, g);
    const auto wc = c_transform(w, market.cost, market.ctx.free);
    std::vector<double> cand(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) cand[k] = floor_to_grid(-wc[k]);
    if (score(cand) >= score(g)) std::copy(cand.begin(), cand.end(), g.begin());
  };

  SearchConfig cfg = search;
  cfg.mode = SearchMode::Ascent;
  cfg.levels = levels.size();
  cfg.refinements = 0;
  std::vector<std::vector<double>> seeds;
  if (current) {
    if (current->size() != own.size()) throw ValidationError("current price has wrong size");
    seeds.push_back(*current);
  }
  // match the opponent's offer at every own point, and undercut it by a step
  std::vector<double> match(own.size());
  std::vector<double> under(own.size());
  for (std::size_t k = 0; k < own.size(); ++k) {
    const double offer = market.ctx.v0[k];
    match[k] = floor_to_grid(std::min(offer, ctx.cap));
    under[k] = std::max(0.0, match[k] - step);
  }
  seeds.push_back(match);
  seeds.push_back(under);

  const auto outcome = maximize(own.size(), 0.0, ctx.cap, cfg, score, seeds, tighten);
  BestResponse r;
  r.price = outcome.best;
  r.payoff = outcome.score;
  r.fixed_region_profit =
      profit_Pi(market.ctx.compose(r.price), market.ctx, market.cost, market.f);
  r.evaluations = outcome.evaluations;
  return r;
}

DynamicsTrace best_response_dynamics(const std::vector<double>& p_init,
                                     const std::vector<double>& q_init, const GameContext& ctx,
                                     const CostTable& cost, const SearchConfig& search,
                                     std::size_t rounds, double eps) {
  if (rounds == 0) throw ValidationError("dynamics needs at least one round");
  if (p_init.size() != ctx.a.size() || q_init.size() != ctx.b.size()) {
    throw ValidationError("initial strategy size does not match the player's region");
  }
  constexpr std::size_t kWindow = 4;
  DynamicsTrace t;
  t.p = p_init;
  t.q = q_init;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> history{{t.p, t.q}};
  for (std::size_t round = 1; round <= rounds; ++round) {
    double round_delta = 0.0;
    for (Player mover : {Player::A, Player::B}) {
      auto& mine = mover == Player::A ? t.p : t.q;
      const auto& theirs = mover == Player::A ? t.q : t.p;
      const auto br = best_response(mover, theirs, ctx, cost, search, mine);
      DynamicsStep s;
      s.round = round;
      s.player = mover;
      s.delta = sup_distance(br.price, mine);
      mine = br.price;
      const auto pay = payoffs(t.p, t.q, ctx, cost);
      s.p = t.p;
      s.q = t.q;
      s.payoff_a = pay.a;
      s.payoff_b = pay.b;
      s.fixed_region_profit = br.fixed_region_profit;
      round_delta = std::max(round_delta, s.delta);
      t.steps.push_back(std::move(s));
    }
    t.round_delta.push_back(round_delta);
    if (round_delta <= eps) {
      t.converged = true;
      break;
    }
    const std::size_t look = std::min(kWindow, history.size());
    for (std::size_t k = 1; k <= look; ++k) {
      const auto& past = history[history.size() - k];
      if (past.first == t.p && past.second == t.q) {
        t.period = k;
        break;
      }
    }
    if (t.period) break;
    history.emplace_back(t.p, t.q);
  }
  return t;
}

EquilibriumReport verify_equilibrium(const std::vector<double>& p, const std::vector<double>& q,
                                     const GameContext& ctx, const CostTable& cost,
                                     const SearchConfig& search, double tol) {
  EquilibriumReport r;
  const auto pay = payoffs(p, q, ctx, cost);
  r.payoff_a = pay.a;
  r.payoff_b = pay.b;
  const auto dev_a = best_response(Player::A, q, ctx, cost, search, p);
  const auto dev_b = best_response(Player::B, p, ctx, cost, search, q);
  r.gain_a = dev_a.payoff - pay.a;
  r.gain_b = dev_b.payoff - pay.b;
  r.deviation_a = dev_a.price;
  r.deviation_b = dev_b.price;
  r.is_equilibrium = r.gain_a <= tol && r.gain_b <= tol;
  r.scope = "deviations searched on the price grid used by best responses";
  return r;
}

}  // namespace sprice
