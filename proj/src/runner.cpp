#include "sprice/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sprice/ctransform.hpp"
#include "sprice/kernels.hpp"
#include "sprice/model_one.hpp"
#include "sprice/model_two.hpp"
#include "sprice/nash.hpp"
#include "sprice/one_d.hpp"

namespace sprice {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

std::string mask_name(Mask m) {
  switch (m) {
    case Mask::Fixed: return "fixed";
    case Mask::Free: return "free";
    case Mask::None: return "none";
  }
  return "none";
}

// Column-oriented table rendered as CSV with a header row.
class Table {
 public:
  void column(std::string name, std::vector<std::string> cells) {
    names_.push_back(std::move(name));
    cols_.push_back(std::move(cells));
  }
  void real(std::string name, const std::vector<double>& v) {
    std::vector<std::string> cells;
    for (double x : v) cells.push_back(format_real(x));
    column(std::move(name), std::move(cells));
  }
  template <class T>
  void integer(std::string name, const std::vector<T>& v) {
    std::vector<std::string> cells;
    for (auto x : v) cells.push_back(std::to_string(x));
    column(std::move(name), std::move(cells));
  }
  std::string csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < names_.size(); ++c) os << (c ? "," : "") << names_[c];
    os << '\n';
    const std::size_t rows = cols_.empty() ? 0 : cols_.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols_.size(); ++c) os << (c ? "," : "") << cols_[c][r];
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> cols_;
};

void coordinates(Table& t, const Region& region) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < region.size(); ++i) {
    x.push_back(region.point(i)[0]);
    y.push_back(region.point(i)[1]);
  }
  std::vector<std::size_t> idx(region.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  t.integer("index", idx);
  t.real("x", x);
  if (region.dimension() == 2) t.real("y", y);
}

std::vector<long long> targets(const std::vector<std::optional<std::size_t>>& chosen) {
  std::vector<long long> out;
  for (const auto& c : chosen) out.push_back(c ? static_cast<long long>(*c) : -1);
  return out;
}

std::string summary_csv(const ordered_json& summary) {
  std::ostringstream os;
  os << "key,value\n";
  for (auto it = summary.begin(); it != summary.end(); ++it) {
    os << it.key() << ',';
    if (it->is_number_float()) os << format_real(it->get<double>());
    else if (it->is_string()) os << it->get<std::string>();
    else os << it->dump();
    os << '\n';
  }
  return os.str();
}

ordered_json header(const Scenario& s, const std::string& method) {
  ordered_json j;
  j["tool"] = "sprice";
  j["version"] = kVersion;
  j["scenario_hash"] = s.hash;
  j["model"] = to_string(s.model);
  j["method"] = method;
  j["seed"] = s.search.seed;
  return j;
}

Outcome run_one(const Scenario& s, const std::string& method, const CostTable& cost) {
  ModelOneReport r;
  if (method == "metric_closed_form") r = solve_metric(s.p0, cost, s.measure);
  else if (method == "general_search") r = solve_general(s.p0, cost, s.measure, s.search);
  else r = solve_quadratic_reference(s.region, cost, s.measure);

  Outcome o;
  o.method = method;
  o.profit = r.profit;
  o.price = r.optimal_price.values();
  for (double& x : o.price) x = x == 0.0 ? 0.0 : x;  // no -0 in bundles
  ordered_json j = header(s, method);
  ordered_json summary;
  summary["profit"] = r.profit;
  summary["method"] = to_string(r.method);
  summary["evaluations"] = r.diagnostics.evaluations;
  summary["search_space"] = r.diagnostics.search_space;
  j["summary"] = summary;
  j["start_scores"] = r.diagnostics.start_scores;
  j["series"] = {{"price", o.price},
                 {"value", r.optimal_value.values},
                 {"target", targets(r.assignment.chosen)}};
  o.result_json = j.dump(2) + "\n";
  o.summary_csv = summary_csv(summary);

  Table t;
  coordinates(t, s.region);
  t.real("p_opt", o.price);
  t.real("v_opt", r.optimal_value.values);
  t.integer("target", targets(r.assignment.chosen));
  t.integer("captured", std::vector<int>(s.region.size(), 1));
  o.series_csv = t.csv();
  return o;
}

Outcome run_two(const Scenario& s, const std::string& method, const CostTable& cost) {
  const auto ctx = PartitionContext::make(s.region, cost, s.p0);
  ModelTwoReport r;
  if (method == "w_search") r = solve_w_search(ctx, cost, s.measure, s.search);
  else if (method == "one_d") r = one_d_reduction(s.region, ctx, cost, s.measure, s.search.grid_n);
  else r = boundary_control_solve(ctx, cost, s.measure, s.search);

  Outcome o;
  o.method = method;
  o.profit = r.profit;
  o.price = r.optimal_price.values();
  for (double& x : o.price) x = x == 0.0 ? 0.0 : x;  // no -0 in bundles
  std::vector<int> captured(s.region.size(), 0);
  for (std::size_t x : r.omega1) captured[x] = 1;

  ordered_json j = header(s, method);
  ordered_json summary;
  summary["profit"] = r.profit;
  summary["method"] = to_string(r.method);
  summary["objective"] = r.diagnostics.objective;
  summary["evaluations"] = r.diagnostics.evaluations;
  summary["search_space"] = r.diagnostics.search_space;
  summary["captured_mass"] = [&] {
    double m = 0.0;
    for (std::size_t x : r.omega1) m += s.measure[x];
    return m;
  }();
  if (r.method == ModelTwoMethod::OneDReduction) {
    summary["p1"] = r.diagnostics.p1;
    summary["p2"] = r.diagnostics.p2;
  }
  j["summary"] = summary;
  j["warnings"] = r.diagnostics.warnings;
  j["start_scores"] = r.diagnostics.start_scores;
  j["omega0"] = r.omega0;
  j["omega1"] = r.omega1;
  j["series"] = {{"price", o.price},
                 {"value", r.w_opt.values},
                 {"v0", ctx.v0},
                 {"target", targets(r.assignment.chosen)},
                 {"captured", captured}};
  o.result_json = j.dump(2) + "\n";
  o.summary_csv = summary_csv(summary);

  Table t;
  coordinates(t, s.region);
  std::vector<std::string> masks;
  for (std::size_t i = 0; i < s.region.size(); ++i) masks.push_back(mask_name(s.region.mask(i)));
  t.column("mask", masks);
  t.real("p_opt", o.price);
  t.real("w_opt", r.w_opt.values);
  t.real("v0", ctx.v0);
  t.integer("target", targets(r.assignment.chosen));
  t.integer("omega1", captured);
  o.series_csv = t.csv();
  return o;
}

std::vector<double> own_part(const std::vector<double>& full, const PointSet& pts) {
  std::vector<double> out;
  for (std::size_t i : pts) out.push_back(full[i]);
  return out;
}

Outcome run_nash(const Scenario& s, const std::string& method, const CostTable& cost) {
  const auto& spec = *s.game;
  const auto g = GameContext::make(cost, spec.in_a, spec.in_b, s.measure, spec.cap);
  Outcome o;
  o.method = method;
  ordered_json j = header(s, method);
  ordered_json summary;
  std::vector<double> p;
  std::vector<double> q;
  if (method == "dynamics") {
    const auto tr = best_response_dynamics(own_part(spec.init_p, g.a), own_part(spec.init_q, g.b),
                                           g, cost, s.search, spec.rounds, spec.eps);
    p = tr.p;
    q = tr.q;
    summary["rounds_run"] = tr.round_delta.size();
    summary["converged"] = tr.converged;
    summary["period"] = tr.period ? static_cast<long long>(*tr.period) : 0LL;
    summary["last_delta"] = tr.round_delta.empty() ? 0.0 : tr.round_delta.back();
    Table t;
    std::vector<std::size_t> rounds;
    std::vector<std::string> players;
    std::vector<double> delta, pa, pb, fixed;
    for (const auto& st : tr.steps) {
      rounds.push_back(st.round);
      players.push_back(to_string(st.player));
      delta.push_back(st.delta);
      pa.push_back(st.payoff_a);
      pb.push_back(st.payoff_b);
      fixed.push_back(st.fixed_region_profit);
    }
    t.integer("round", rounds);
    t.column("player", players);
    t.real("sup_delta", delta);
    t.real("payoff_a", pa);
    t.real("payoff_b", pb);
    t.real("fixed_region_profit", fixed);
    o.trace_csv = t.csv();
  } else {
    p = own_part(*spec.candidate_p, g.a);
    q = own_part(*spec.candidate_q, g.b);
    const auto levels = strategy_levels(g, s.search);
    const double tol = spec.gain_tolerance.value_or((levels[1] - levels[0]) * g.f.total_mass());
    const auto eq = verify_equilibrium(p, q, g, cost, s.search, tol);
    summary["is_equilibrium"] = eq.is_equilibrium;
    summary["gain_a"] = eq.gain_a;
    summary["gain_b"] = eq.gain_b;
    summary["gain_tolerance"] = tol;
    summary["scope"] = eq.scope;
  }
  const auto pay = payoffs(p, q, g, cost);
  summary["payoff_a"] = pay.a;
  summary["payoff_b"] = pay.b;
  summary["zeroed_mass"] = g.zeroed_mass;
  o.profit = pay.a + pay.b;

  const std::size_t n = s.region.size();
  std::vector<std::string> owner(n), price_a(n), price_b(n), served(n);
  o.price.assign(n, 0.0);
  for (std::size_t k = 0; k < g.b.size(); ++k) {
    price_b[g.b[k]] = format_real(q[k]);
    o.price[g.b[k]] = q[k];
  }
  for (std::size_t k = 0; k < g.a.size(); ++k) {
    price_a[g.a[k]] = format_real(p[k]);
    o.price[g.a[k]] = p[k];
  }
  for (std::size_t i = 0; i < n; ++i) {
    owner[i] = g.in_a[i] ? (g.in_b[i] ? "AB" : "A") : "B";
    served[i] = to_string(pay.served_by[i]);
  }
  j["summary"] = summary;
  j["series"] = {{"price_a", p}, {"price_b", q}, {"target", pay.chosen}, {"paid", pay.paid}};
  o.result_json = j.dump(2) + "\n";
  o.summary_csv = summary_csv(summary);

  Table t;
  coordinates(t, s.region);
  t.column("owner", owner);
  t.column("price_a", price_a);
  t.column("price_b", price_b);
  t.column("served_by", served);
  t.integer("target", pay.chosen);
  t.real("paid", pay.paid);
  o.series_csv = t.csv();
  return o;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const BudgetExceeded& e) {
    err << "error: search budget refused: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

void apply_options(Scenario& scenario, const RunOptions& options) {
  if (options.seed) scenario.search.seed = *options.seed;
  if (options.threads) scenario.threads = *options.threads;
  if (options.method) {
    check_method(scenario, *options.method);
    scenario.method = *options.method;
  }
  if (scenario.threads) {
    if (*scenario.threads < 1) throw ValidationError("threads must be >= 1");
    omp_set_num_threads(*scenario.threads);
    set_kernel_threads(*scenario.threads);
  }
}

Outcome execute(const Scenario& scenario, const std::string& method) {
  check_method(scenario, method);
  const auto cost = eval_cost(scenario.kernel, scenario.region);
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  switch (scenario.model) {
    case Model::One: o = run_one(scenario, method, cost); break;
    case Model::Two: o = run_two(scenario, method, cost); break;
    case Model::Nash: o = run_nash(scenario, method, cost); break;
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

namespace {

std::vector<std::string> check_bundle(const Scenario& s, const std::string& result_json) {
  std::vector<std::string> problems;
  json j;
  try {
    j = json::parse(result_json);
  } catch (const json::parse_error& e) {
    return {std::string("result is not valid JSON: ") + e.what()};
  }
  const std::size_t n = s.region.size();
  if (j.value("scenario_hash", "") != s.hash) problems.emplace_back("scenario hash does not match");
  const auto& series = j["series"];
  for (auto it = series.begin(); it != series.end(); ++it) {
    if (s.model == Model::Nash && (it.key() == "price_a" || it.key() == "price_b")) continue;
    if (it->size() != n) problems.push_back("series '" + it.key() + "' has the wrong length");
  }
  if (!problems.empty()) return problems;
  const auto cost = eval_cost(s.kernel, s.region);
  const double tol = tolerance_for(cost);
  const double reported = j["summary"]["profit"].is_number() ? j["summary"]["profit"].get<double>() : 0.0;
  const double slack = tol * (1.0 + s.measure.total_mass());
  if (s.model == Model::One) {
    const auto price = series["price"].get<std::vector<double>>();
    for (std::size_t i = 0; i < n; ++i) {
      if (price[i] > s.p0[i] + tol) {
        problems.push_back("price exceeds p0 at point " + std::to_string(i));
        break;
      }
    }
    const double profit = profit_F(PricePattern(price), cost, s.measure);
    if (std::abs(profit - reported) > slack) problems.emplace_back("reported profit does not match F(price)");
    const auto value = series["value"].get<std::vector<double>>();
    PointSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    if (!is_c_concave(value, cost, all, tol)) problems.emplace_back("value function is not c-concave");
  } else if (s.model == Model::Two) {
    const auto price = series["price"].get<std::vector<double>>();
    for (std::size_t y : s.region.fixed_points()) {
      if (price[y] != s.p0[y]) {
        problems.push_back("price differs from p0 on fixed point " + std::to_string(y));
        break;
      }
    }
    const auto ctx = PartitionContext::make(s.region, cost, s.p0);
    const double profit = profit_Pi(PricePattern(price), ctx, cost, s.measure);
    if (std::abs(profit - reported) > slack) problems.emplace_back("reported profit does not match Pi(price)");
    const auto w = series["value"].get<std::vector<double>>();
    if (std::abs(profit_J(ValueFunction{w, ValueKind::Subregion}, ctx, cost, s.measure) - reported) > slack) {
      problems.emplace_back("reported profit does not match J(w)");
    }
  } else {
    const auto& spec = *s.game;
    const auto g = GameContext::make(cost, spec.in_a, spec.in_b, s.measure, spec.cap);
    const auto p = series["price_a"].get<std::vector<double>>();
    const auto q = series["price_b"].get<std::vector<double>>();
    if (p.size() != g.a.size() || q.size() != g.b.size()) {
      problems.emplace_back("strategy length does not match the player's region");
      return problems;
    }
    const auto pay = payoffs(p, q, g, cost);
    if (std::abs(pay.a - j["summary"]["payoff_a"].get<double>()) > slack ||
        std::abs(pay.b - j["summary"]["payoff_b"].get<double>()) > slack) {
      problems.emplace_back("reported payoffs do not match the strategies");
    }
  }
  return problems;
}

}  // namespace

std::vector<std::string> revalidate(const Scenario& s, const std::string& result_json) {
  try {
    return check_bundle(s, result_json);
  } catch (const std::exception& e) {
    // missing fields, wrong types, a value function that is not concave
    return {std::string("result cannot be re-evaluated: ") + e.what()};
  }
}

int run_command(const std::string& scenario_path, const std::string& out_dir,
                const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto s = load_scenario(scenario_path);
    apply_options(s, options);
    const auto o = execute(s, s.method);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + out_dir + "': " + ec.message());
    const fs::path dir(out_dir);
    if (options.format == OutputFormat::Structured) {
      write_file(dir / "result.json", o.result_json);
    } else {
      write_file(dir / "summary.csv", o.summary_csv);
    }
    write_file(dir / "series.csv", o.series_csv);
    if (o.trace_csv) write_file(dir / "trace.csv", *o.trace_csv);
    out << to_string(s.model) << ' ' << o.method << " profit " << format_real(o.profit) << '\n';
    err << "runtime " << o.seconds << " s\n";
    return kExitOk;
  });
}

int compare_command(const std::string& scenario_path, const std::vector<std::string>& methods,
                    const RunOptions& options, const std::optional<std::string>& out_dir,
                    std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto s = load_scenario(scenario_path);
    RunOptions opts = options;
    opts.method.reset();
    apply_options(s, opts);
    const auto list = methods.empty() ? methods_for(s.model) : methods;
    for (const auto& m : list) check_method(s, m);
    std::vector<Outcome> results;
    for (const auto& m : list) results.push_back(execute(s, m));
    std::ostringstream table;
    table << "method,profit,profit_delta,max_price_deviation,runtime_s\n";
    for (const auto& o : results) {
      double dev = 0.0;
      for (std::size_t i = 0; i < o.price.size(); ++i) {
        dev = std::max(dev, std::abs(o.price[i] - results.front().price[i]));
      }
      table << o.method << ',' << format_real(o.profit) << ','
            << format_real(o.profit - results.front().profit) << ',' << format_real(dev) << ','
            << format_real(o.seconds) << '\n';
    }
    out << table.str();
    if (out_dir) {
      std::filesystem::create_directories(*out_dir);
      write_file(std::filesystem::path(*out_dir) / "compare.csv", table.str());
    }
    return kExitOk;
  });
}

int check_command(const std::string& scenario_path, const std::string& result_path,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto s = load_scenario(scenario_path);
    std::ifstream in(result_path, std::ios::binary);
    if (!in) throw ValidationError("cannot read result file '" + result_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto problems = revalidate(s, buf.str());
    for (const auto& p : problems) out << "problem: " << p << '\n';
    if (!problems.empty()) return kExitValidation;
    out << "ok\n";
    return kExitOk;
  });
}

}  // namespace sprice
