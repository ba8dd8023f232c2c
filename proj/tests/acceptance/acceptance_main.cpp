// Acceptance suite. One verdict line per criterion; `--criterion N` runs a
// single one (ctest registers each separately). Exit status is nonzero when
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "sprice/ctransform.hpp"
#include "sprice/model_one.hpp"
#include "sprice/model_two.hpp"
#include "sprice/nash.hpp"
#include "sprice/one_d.hpp"
#include "sprice/runner.hpp"
#include "sprice/scenario.hpp"

namespace {

using namespace sprice;

// Pinned tolerances and sizes.
constexpr double kQuadPriceTol = 0.02;
constexpr double kQuadProfitRelTol = 0.01;
constexpr double kQuadProfitTarget = 1.0 / 6.0;
constexpr double kQuadSeconds = 60.0;
constexpr std::size_t kMetricInstances = 50;
constexpr std::size_t kMetricLevels = 8;
constexpr double kMetricSeconds = 120.0;
constexpr std::size_t kMeasuresPerInstance = 5;
constexpr std::size_t kOneDGrid = 201;
constexpr std::size_t kOneDSamples = 4000;
constexpr double kOneDSeconds = 10.0;
constexpr std::size_t kReformInstances = 200;
constexpr double kReformSeconds = 60.0;
constexpr std::size_t kAlgebraCases = 500;
constexpr std::size_t kNashPoints = 21;
constexpr double kNashStep = 0.05;
constexpr std::size_t kNashRounds = 20;
constexpr double kNashSeconds = 120.0;
constexpr double kRoundoff = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Report {
 public:
  void check(bool pass, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    std::printf("    [%s] %s\n", pass ? "pass" : "FAIL", buf);
    ok_ = ok_ && pass;
  }
  void info(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    std::printf("    [info] %s\n", buf);
  }
  bool ok() const { return ok_; }

 private:
  bool ok_ = true;
};

PointSet all_of(std::size_t n) {
  PointSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

// 1. Quadratic cost on [0, 1]: the searched price follows x/2 - x^2/4.
void quadratic_closed_form(Report& r) {
  const std::size_t n = 41;
  const auto region = build_interval_region(n, 0, 1);
  const auto cost = eval_cost(CostKernel::quadratic(), region);
  std::vector<double> p0(n);
  for (std::size_t i = 0; i < n; ++i) p0[i] = region.x(i) - region.x(i) * region.x(i) / 2;
  SearchConfig cfg;
  cfg.levels = 8;
  cfg.multistarts = 16;
  const auto t0 = Clock::now();
  const auto rep = solve_general(PricePattern(p0), cost, CustomerMeasure::uniform(n), cfg);
  const double secs = seconds_since(t0);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(rep.optimal_price[i] - quadratic_1d_reference(region.x(i)).p_opt));
  }
  r.check(err <= kQuadPriceTol, "max |p - p_opt| = %.4g <= %.4g", err, kQuadPriceTol);
  const double rel = std::abs(rep.profit - kQuadProfitTarget) / kQuadProfitTarget;
  r.check(rel <= kQuadProfitRelTol, "profit %.6g within %.0f%% of 1/6 (off by %.1f%%)", rep.profit,
          kQuadProfitRelTol * 100, rel * 100);
  const auto exact = solve_quadratic_reference(region, cost, CustomerMeasure::uniform(n));
  r.info("closed-form pattern on this grid earns %.6g; continuum profit is 1/12 = %.6g", exact.profit,
         1.0 / 12.0);
  r.check(secs <= kQuadSeconds, "runtime %.2f s <= %.0f s", secs, kQuadSeconds);
}

sprice::Region small_cloud(gen::Rng& rng) { return gen::cloud(rng, gen::between(rng, 2, 6)); }

std::vector<double> random_ceiling(gen::Rng& rng, std::size_t n) {
  auto p0 = gen::reals(rng, n, 0.0, 1.0);
  for (double& x : p0) {
    if (rng() % 5 == 0) x = kUnconstrained;
  }
  if (std::all_of(p0.begin(), p0.end(), [](double x) { return x == kUnconstrained; })) p0[0] = 0.5;
  return p0;
}

// 2. Distance cost: exhaustive quantised search never beats the closed form
//    by more than 2 * range / L.
void metric_closed_form(Report& r) {
  gen::Rng rng(2024);
  const auto t0 = Clock::now();
  double worst = -oracle::kInf;
  std::size_t violations = 0;
  for (std::size_t k = 0; k < kMetricInstances; ++k) {
    const auto region = small_cloud(rng);
    const auto n = region.size();
    const auto cost = eval_cost(CostKernel::metric_power(1.0), region);
    const auto f = gen::measure(rng, n);
    const auto p0 = random_ceiling(rng, n);
    const auto rep = solve_metric(PricePattern(p0), cost, f);
    // no admissible price usefully exceeds the closed form
    const double range = *std::max_element(rep.optimal_price.values().begin(),
                                           rep.optimal_price.values().end());
    const double brute =
        oracle::best_quantized_profit(p0, cost, f.weights(), kMetricLevels, range, tolerance_for(cost));
    const double excess = brute - rep.profit;
    const double bound = 2.0 * range / kMetricLevels;
    worst = std::max(worst, excess / bound);
    if (excess > bound) ++violations;
  }
  const double secs = seconds_since(t0);
  r.check(violations == 0, "%zu/%zu instances where enumeration beats the closed form by > 2*range/L",
          violations, kMetricInstances);
  r.info("largest (enumeration - closed form) / bound = %.4g", worst);
  r.check(secs <= kMetricSeconds, "runtime %.2f s <= %.0f s", secs, kMetricSeconds);
}

// 3. The closed-form prices do not depend on the customer measure.
void metric_measure_independence(Report& r) {
  gen::Rng rng(3033);
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < kMetricInstances; ++k) {
    const auto region = small_cloud(rng);
    const auto n = region.size();
    const auto cost = eval_cost(CostKernel::metric_power(gen::uniform(rng, 0.3, 1.0)), region);
    const PricePattern p0(random_ceiling(rng, n));
    const auto base = solve_metric(p0, cost, gen::measure(rng, n)).optimal_price.values();
    for (std::size_t m = 0; m < kMeasuresPerInstance; ++m) {
      const auto other = solve_metric(p0, cost, gen::measure(rng, n, gen::uniform(rng, 0.1, 5.0)));
      if (other.optimal_price.values() != base) ++mismatches;
    }
  }
  r.check(mismatches == 0, "%zu price patterns differ (exact comparison) over %zu instances x %zu measures",
          mismatches, kMetricInstances, kMeasuresPerInstance);
}

// 4. Interval subregion, uniform customers: p1 = p2 = max(p0/2, p0 - 1/2).
void interval_reduction(Report& r) {
  const auto t0 = Clock::now();
  for (double p0 : {0.2, 0.4, 1.0, 2.0}) {
    const double want = std::max(p0 / 2.0, p0 - 0.5);
    const auto res = one_d_optimize(0.0, 1.0, p0, Cumulative::uniform(), kOneDGrid);
    const double dev = std::max(std::abs(res.p1 - want), std::abs(res.p2 - want));
    r.check(dev <= res.step + kRoundoff, "p0 = %g: p1 = %.4g, p2 = %.4g, formula %.4g, step %.4g", p0,
            res.p1, res.p2, want, res.step);
    // brute force over the same grid against the sampled market
    double best = -1.0;
    for (std::size_t i = 0; i < kOneDGrid; ++i) {
      for (std::size_t j = 0; j < kOneDGrid; ++j) {
        const double p1 = i + 1 == kOneDGrid ? p0 : res.step * static_cast<double>(i);
        const double p2 = j + 1 == kOneDGrid ? p0 : res.step * static_cast<double>(j);
        best = std::max(best, oracle::interval_profit(p1, p2, p0, kOneDSamples));
      }
    }
    const double got = oracle::interval_profit(res.p1, res.p2, p0, kOneDSamples);
    r.check(got >= best - kRoundoff, "p0 = %g: grid winner earns %.6g, brute-force grid maximum %.6g", p0,
            got, best);
  }
  const double secs = seconds_since(t0);
  r.check(secs <= kOneDSeconds, "runtime %.2f s <= %.0f s", secs, kOneDSeconds);
}

// 5. Clamp and reformulation inequalities on random small instances.
void reformulation_suite(Report& r) {
  gen::Rng rng(5055);
  const auto t0 = Clock::now();
  std::size_t chain = 0;
  std::size_t identity = 0;
  std::size_t omega = 0;
  std::size_t thrown = 0;
  for (std::size_t k = 0; k < kReformInstances; ++k) {
    const auto n = gen::between(rng, 3, 7);
    const auto region = gen::split_cloud(rng, n, gen::between(rng, 1, n - 1));
    const auto cost = eval_cost(gen::kernel(rng), region);
    const auto f = gen::measure(rng, n);
    const auto ctx = PartitionContext::make(region, cost, PricePattern(gen::reals(rng, n, 0.0, 1.0)));
    const auto p = ctx.compose(gen::reals(rng, ctx.free.size(), -0.5, 1.5));
    const double slack = ctx.tol * (1.0 + f.total_mass());
    try {
      const auto clamp = nonneg_clamp_improves(p, ctx, cost, f);
      const auto ref = reformulate(clamp.clamped, ctx, cost, f);
      if (!(clamp.profit_before <= clamp.profit_after + slack &&
            clamp.profit_after <= ref.profit_tilde + slack)) {
        ++chain;
      }
      if (std::abs(ref.profit_tilde - ref.profit_J) > slack) ++identity;
      for (std::size_t x = 0; x < n; ++x) {
        if (ref.captured_tilde[x] != (ref.w[x] <= ctx.v0[x] + ctx.tol)) {
          ++omega;
          break;
        }
      }
    } catch (const std::exception&) {
      ++thrown;
    }
  }
  const double secs = seconds_since(t0);
  r.check(chain == 0, "%zu/%zu violate Pi(p) <= Pi(p+) <= Pi(p~)", chain, kReformInstances);
  r.check(identity == 0, "%zu/%zu violate Pi(p~) = J(w_p)", identity, kReformInstances);
  r.check(omega == 0, "%zu/%zu violate Omega1(p~) = {w <= v0}", omega, kReformInstances);
  r.check(thrown == 0, "%zu/%zu raised a postcondition failure", thrown, kReformInstances);
  r.check(secs <= kReformSeconds, "runtime %.2f s <= %.0f s", secs, kReformSeconds);
}

// 6. c-transform algebra.
void transform_algebra(Report& r) {
  gen::Rng rng(6066);
  std::size_t reversal = 0;
  std::size_t dominance = 0;
  std::size_t triple = 0;
  std::size_t equic = 0;
  std::size_t lipschitz = 0;
  std::size_t lipschitz_true = 0;
  for (std::size_t k = 0; k < kAlgebraCases; ++k) {
    const auto n = gen::between(rng, 2, 12);
    const auto region = gen::cloud(rng, n);
    const auto cost = eval_cost(gen::kernel(rng), region);
    const double tol = tolerance_for(cost);
    const auto all = all_of(n);

    auto v1 = gen::reals(rng, n, -1, 1);
    auto v2 = v1;
    for (double& x : v2) x += gen::uniform(rng, 0, 0.5);
    const auto c1 = c_transform(v1, cost, all);
    const auto c2 = c_transform(v2, cost, all);
    for (std::size_t i = 0; i < n; ++i) {
      if (c1[i] < c2[i] - tol) {
        ++reversal;
        break;
      }
    }

    const auto dt = double_transform(v1, cost, all);
    for (std::size_t i = 0; i < n; ++i) {
      if (dt[i] < v1[i] - tol) {
        ++dominance;
        break;
      }
    }
    const auto ct = c_transform(dt, cost, all);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(ct[i] - c1[i]) > tol) {
        ++triple;
        break;
      }
    }

    // |v(x) - v(x')| <= max_y |c(x, y) - c(x', y)| for c-concave v
    const auto cc = c_concave_from(gen::reals(rng, n, -1, 1), cost, all);
    for (std::size_t x = 0; x < n; ++x) {
      bool bad = false;
      for (std::size_t x2 = 0; x2 < n; ++x2) {
        double modulus = 0.0;
        for (std::size_t y = 0; y < n; ++y) modulus = std::max(modulus, std::abs(cost(x, y) - cost(x2, y)));
        if (std::abs(cc[x] - cc[x2]) > modulus + tol) bad = true;
      }
      if (bad) {
        ++equic;
        break;
      }
    }

    // distance cost: 1-Lipschitz iff c-concave
    const auto dist = eval_cost(CostKernel::metric_power(1.0), region);
    std::vector<double> v = gen::reals(rng, n, 0, 0.5);
    if (rng() % 2 == 0) v = c_concave_from(v, dist, all);  // a Lipschitz half
    bool lip = true;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) lip = lip && v[x] - v[y] <= dist(x, y) + tolerance_for(dist);
    }
    lipschitz_true += lip;
    if (lip != is_c_concave(v, dist, all, tolerance_for(dist))) ++lipschitz;
  }
  r.check(reversal == 0, "order reversal: %zu violations in %zu cases", reversal, kAlgebraCases);
  r.check(dominance == 0, "(v^c)^c >= v: %zu violations in %zu cases", dominance, kAlgebraCases);
  r.check(triple == 0, "((v^c)^c)^c = v^c: %zu violations in %zu cases", triple, kAlgebraCases);
  r.check(equic == 0, "equicontinuity bound: %zu violations in %zu cases", equic, kAlgebraCases);
  r.check(lipschitz == 0, "1-Lipschitz <=> c-concave (distance cost): %zu violations in %zu cases (%zu Lipschitz)",
          lipschitz, kAlgebraCases, lipschitz_true);
}

// 7. Two sellers on [0, 1]: dynamics reach p = 1/2 - x, q = x - 1/2.
void nash_example(Report& r) {
  const auto region = build_interval_region(kNashPoints, 0, 1);
  const auto cost = eval_cost(CostKernel::metric_power(1.0), region);
  const double h = 1.0 / static_cast<double>(kNashPoints - 1);
  SearchConfig cfg;
  cfg.price_step = kNashStep;

  std::vector<double> tri(kNashPoints);
  for (std::size_t i = 0; i < kNashPoints; ++i) tri[i] = 1.0 - std::abs(2.0 * region.x(i) - 1.0) + 0.05;
  gen::Rng rng(7077);
  const std::vector<std::pair<const char*, CustomerMeasure>> measures{
      {"uniform", CustomerMeasure::uniform(kNashPoints)},
      {"triangular", CustomerMeasure(tri)},
      {"random", gen::measure(rng, kNashPoints)},
  };

  const auto t0 = Clock::now();
  for (const auto& [name, f] : measures) {
    const auto ctx = GameContext::split_interval(region, cost, 0.5, f, 1.0);
    std::vector<double> ps;
    std::vector<double> qs;
    for (std::size_t i : ctx.a) ps.push_back(0.5 - region.x(i));
    for (std::size_t i : ctx.b) qs.push_back(region.x(i) - 0.5);

    const double gain_tol = kNashStep * ctx.f.total_mass();
    const auto eq = verify_equilibrium(ps, qs, ctx, cost, cfg, gain_tol);
    r.check(eq.is_equilibrium, "%s f: closed form verified, gains A %.3g, B %.3g <= step*mass %.3g", name,
            eq.gain_a, eq.gain_b, gain_tol);

    if (std::string(name) == "uniform") {
      const std::vector<double> one_a(ctx.a.size(), 1.0);
      const std::vector<double> one_b(ctx.b.size(), 1.0);
      const auto tr = best_response_dynamics(one_a, one_b, ctx, cost, cfg, kNashRounds, 0.0);
      double dist = 0.0;
      for (std::size_t k = 0; k < ps.size(); ++k) dist = std::max(dist, std::abs(tr.p[k] - ps[k]));
      for (std::size_t k = 0; k < qs.size(); ++k) dist = std::max(dist, std::abs(tr.q[k] - qs[k]));
      r.check(tr.converged, "dynamics from 1, 1 converged after %zu rounds (limit %zu)", tr.round_delta.size(),
              kNashRounds);
      r.check(dist <= 2.0 * h + kRoundoff, "sup distance to the closed form %.4g <= 2 grid steps %.4g", dist,
              2.0 * h);
    } else {
      const auto tr = best_response_dynamics(ps, qs, ctx, cost, cfg, kNashRounds, 0.0);
      double moved = 0.0;
      for (std::size_t k = 0; k < ps.size(); ++k) moved = std::max(moved, std::abs(tr.p[k] - ps[k]));
      for (std::size_t k = 0; k < qs.size(); ++k) moved = std::max(moved, std::abs(tr.q[k] - qs[k]));
      r.check(moved <= kRoundoff, "%s f: dynamics started at the closed form stay put (moved %.3g)", name,
              moved);
    }
  }
  const double secs = seconds_since(t0);
  r.check(secs <= kNashSeconds, "runtime %.2f s <= %.0f s", secs, kNashSeconds);
}

// 8. The three subregion methods agree on interval instances.
void cross_method(Report& r) {
  for (std::size_t n : {21u, 41u}) {
    for (double p0 : {0.2, 0.4, 1.0, 2.0}) {
      char text[512];
      std::snprintf(text, sizeof text,
                    R"({"model": "two",
                        "region": {"dimension": 1, "n": %zu, "bounds": [0, 1], "fixed_window": [0, 1]},
                        "cost": {"kind": "metric_power", "alpha": 1},
                        "prices": {"p0": %.17g},
                        "search": {"grid_n": %zu}})",
                    n, p0, kOneDGrid);
      const auto s = parse_scenario(text);
      std::vector<double> profit;
      for (const char* m : {"one_d", "w_search", "boundary_control"}) profit.push_back(execute(s, m).profit);
      // one_d grid step in mass terms plus one atom at either interface price
      const double step = p0 / static_cast<double>(kOneDGrid - 1);
      const double atom = 1.0 / static_cast<double>(n);
      const double tol = 2.0 * step * s.measure.total_mass() + 2.0 * atom * p0;
      double spread = 0.0;
      for (double a : profit) {
        for (double b : profit) spread = std::max(spread, std::abs(a - b));
      }
      r.check(spread <= tol, "n = %zu, p0 = %g: one_d %.6g, w_search %.6g, boundary_control %.6g, spread %.3g <= %.3g",
              n, p0, profit[0], profit[1], profit[2], spread, tol);
    }
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Report&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "quadratic closed form", quadratic_closed_form},
      {2, "metric closed form vs enumeration", metric_closed_form},
      {3, "metric prices independent of f", metric_measure_independence},
      {4, "interval subregion formula", interval_reduction},
      {5, "reformulation inequalities", reformulation_suite},
      {6, "c-transform algebra", transform_algebra},
      {7, "two-seller equilibrium", nash_example},
      {8, "subregion cross-method agreement", cross_method},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  bool ok = true;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    std::printf("criterion %d: %s\n", c.id, c.title);
    Report report;
    try {
      c.run(report);
    } catch (const std::exception& e) {
      report.check(false, "unexpected exception: %s", e.what());
    }
    std::printf("%s criterion %d: %s\n", report.ok() ? "PASS" : "FAIL", c.id, c.title);
    std::fflush(stdout);
    ok = ok && report.ok();
  }
  return ok ? 0 : 1;
}
