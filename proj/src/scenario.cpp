#include "sprice/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sprice {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& need(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path, std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "+inf" || s == "inf") return kUnconstrained;
    fail(path, "expected a number or \"+inf\", got \"" + s + "\"");
  }
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "number is not finite");
  return d;
}

double finite_number(const json& v, const std::string& path) {
  const double d = number(v, path);
  if (!std::isfinite(d)) fail(path, "+inf is not allowed here");
  return d;
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Interval interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
  return {finite_number(v[0], path + "[0]"), finite_number(v[1], path + "[1]")};
}

Region parse_region(const json& r) {
  const int dim = static_cast<int>(count(need(r, "dimension", "region"), "region.dimension"));
  if (dim == 1) {
    const auto n = count(need(r, "n", "region"), "region.n");
    const Interval b = r.contains("bounds") ? interval(r["bounds"], "region.bounds") : Interval{0, 1};
    std::optional<Interval> window;
    if (r.contains("fixed_window") && !r["fixed_window"].is_null()) {
      window = interval(r["fixed_window"], "region.fixed_window");
    }
    return build_interval_region(n, b.lo, b.hi, window);
  }
  if (dim == 2) {
    const auto nx = count(need(r, "nx", "region"), "region.nx");
    const auto ny = count(need(r, "ny", "region"), "region.ny");
    Rect bounds{{0, 1}, {0, 1}};
    if (r.contains("bounds")) {
      const auto& b = r["bounds"];
      if (!b.is_array() || b.size() != 2) fail("region.bounds", "expected [[x0, x1], [y0, y1]]");
      bounds = {interval(b[0], "region.bounds[0]"), interval(b[1], "region.bounds[1]")};
    }
    std::optional<Rect> fixed;
    if (r.contains("fixed_rect") && !r["fixed_rect"].is_null()) {
      const auto& b = r["fixed_rect"];
      if (!b.is_array() || b.size() != 2) fail("region.fixed_rect", "expected [[x0, x1], [y0, y1]]");
      fixed = Rect{interval(b[0], "region.fixed_rect[0]"), interval(b[1], "region.fixed_rect[1]")};
    }
    return build_grid_region(nx, ny, bounds, fixed);
  }
  fail("region.dimension", "must be 1 or 2");
}

CostKernel parse_cost(const json& c, std::size_t n) {
  const auto kind = need(c, "kind", "cost").get<std::string>();
  if (kind == "metric_power") {
    return CostKernel::metric_power(c.contains("alpha") ? finite_number(c["alpha"], "cost.alpha") : 1.0);
  }
  if (kind == "quadratic") return CostKernel::quadratic();
  if (kind == "custom") {
    const auto& t = need(c, "table", "cost");
    if (!t.is_array() || t.size() != n) fail("cost.table", "expected " + std::to_string(n) + " rows");
    std::vector<double> flat;
    for (std::size_t i = 0; i < n; ++i) {
      if (!t[i].is_array() || t[i].size() != n) {
        fail("cost.table[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
      }
      for (std::size_t j = 0; j < n; ++j) {
        flat.push_back(finite_number(t[i][j], "cost.table"));
      }
    }
    return CostKernel::custom(std::move(flat));
  }
  fail("cost.kind", "unknown kind '" + kind + "'");
}

CustomerMeasure parse_measure(const json& m, std::size_t n) {
  if (m.is_string()) {
    if (m.get<std::string>() != "uniform") fail("measure", "expected \"uniform\" or an object");
    return CustomerMeasure::uniform(n);
  }
  const auto kind = need(m, "kind", "measure").get<std::string>();
  if (kind == "uniform") {
    return CustomerMeasure::uniform(n, m.contains("mass") ? finite_number(m["mass"], "measure.mass") : 1.0);
  }
  if (kind == "weights") {
    const auto& w = need(m, "weights", "measure");
    if (!w.is_array() || w.size() != n) fail("measure.weights", "expected " + std::to_string(n) + " entries");
    std::vector<double> out;
    for (const auto& v : w) out.push_back(finite_number(v, "measure.weights"));
    return CustomerMeasure(std::move(out));
  }
  fail("measure.kind", "unknown kind '" + kind + "'");
}

// number | "+inf" | list | {"polynomial": [c0, c1, ...]} in the first coordinate
std::vector<double> parse_field(const json& v, const Region& region, const std::string& path) {
  const std::size_t n = region.size();
  if (v.is_number() || v.is_string()) return std::vector<double>(n, number(v, path));
  if (v.is_array()) {
    if (v.size() != n) fail(path, "expected " + std::to_string(n) + " entries");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (v.is_object() && v.contains("polynomial")) {
    const auto& c = v["polynomial"];
    if (!c.is_array() || c.empty()) fail(path + ".polynomial", "expected coefficient list");
    std::vector<double> coef;
    for (const auto& a : c) coef.push_back(finite_number(a, path + ".polynomial"));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = coef.size(); k-- > 0;) acc = acc * region.x(i) + coef[k];
      out[i] = acc;
    }
    return out;
  }
  fail(path, "expected a number, \"+inf\", a list or {\"polynomial\": [...]}");
}

SearchConfig parse_search(const json& s, SearchConfig cfg) {
  if (s.contains("mode")) {
    const auto mode = s["mode"].get<std::string>();
    if (mode == "ascent") cfg.mode = SearchMode::Ascent;
    else if (mode == "exhaustive") cfg.mode = SearchMode::Exhaustive;
    else fail("search.mode", "expected \"ascent\" or \"exhaustive\"");
  }
  if (s.contains("levels")) cfg.levels = count(s["levels"], "search.levels");
  if (s.contains("multistarts")) cfg.multistarts = count(s["multistarts"], "search.multistarts");
  if (s.contains("seed")) cfg.seed = count(s["seed"], "search.seed");
  if (s.contains("budget")) cfg.budget = count(s["budget"], "search.budget");
  if (s.contains("refinements")) cfg.refinements = count(s["refinements"], "search.refinements");
  if (s.contains("grid_n")) cfg.grid_n = count(s["grid_n"], "search.grid_n");
  if (s.contains("price_step")) cfg.price_step = finite_number(s["price_step"], "search.price_step");
  if (cfg.levels < 2) fail("search.levels", "needs at least 2 levels");
  if (cfg.grid_n < 2) fail("search.grid_n", "needs at least 2 grid points");
  if (cfg.price_step < 0.0) fail("search.price_step", "must be >= 0");
  return cfg;
}

GameSpec parse_game(const json& g, const Region& region) {
  const std::size_t n = region.size();
  GameSpec spec;
  spec.in_a.assign(n, false);
  spec.in_b.assign(n, false);
  if (g.contains("split")) {
    if (region.dimension() != 1) fail("game.split", "only for 1D regions");
    const double split = finite_number(g["split"], "game.split");
    const double snap = 1e-12 * (1.0 + std::abs(split));
    for (std::size_t i = 0; i < n; ++i) {
      spec.in_a[i] = region.x(i) <= split + snap;
      spec.in_b[i] = region.x(i) >= split - snap;
    }
  } else if (g.contains("owner")) {
    const auto& o = g["owner"];
    if (!o.is_array() || o.size() != n) fail("game.owner", "expected " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = o[i].get<std::string>();
      if (s != "A" && s != "B" && s != "AB") fail("game.owner", "entries are \"A\", \"B\" or \"AB\"");
      spec.in_a[i] = s != "B";
      spec.in_b[i] = s != "A";
    }
  } else {
    fail("game", "needs 'split' or 'owner'");
  }
  if (g.contains("cap")) spec.cap = finite_number(g["cap"], "game.cap");
  if (!(spec.cap > 0.0)) fail("game.cap", "must be positive");
  // only the owner's points are read, so only those are checked
  auto strategy = [&](const char* key, double fallback, const std::vector<bool>& own) {
    if (!g.contains(key)) return std::vector<double>(n, fallback);
    auto v = parse_field(g[key], region, std::string("game.") + key);
    for (std::size_t i = 0; i < n; ++i) {
      if (own[i] && !(std::isfinite(v[i]) && v[i] >= 0.0)) {
        fail(std::string("game.") + key, "prices must be finite and >= 0 on the owner's points");
      }
    }
    return v;
  };
  spec.init_p = strategy("init_p", spec.cap, spec.in_a);
  spec.init_q = strategy("init_q", spec.cap, spec.in_b);
  if (g.contains("rounds")) spec.rounds = count(g["rounds"], "game.rounds");
  if (spec.rounds == 0) fail("game.rounds", "must be >= 1");
  if (g.contains("eps")) spec.eps = finite_number(g["eps"], "game.eps");
  if (g.contains("candidate_p")) spec.candidate_p = strategy("candidate_p", 0.0, spec.in_a);
  if (g.contains("candidate_q")) spec.candidate_q = strategy("candidate_q", 0.0, spec.in_b);
  if (g.contains("gain_tolerance")) spec.gain_tolerance = finite_number(g["gain_tolerance"], "game.gain_tolerance");
  return spec;
}

}  // namespace

std::string to_string(Model model) {
  switch (model) {
    case Model::One: return "one";
    case Model::Two: return "two";
    case Model::Nash: return "nash";
  }
  return "unknown";
}

std::vector<std::string> methods_for(Model model) {
  switch (model) {
    case Model::One: return {"metric_closed_form", "general_search", "quadratic_reference"};
    case Model::Two: return {"w_search", "one_d", "boundary_control"};
    case Model::Nash: return {"dynamics", "verify"};
  }
  return {};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void check_method(const Scenario& s, const std::string& method) {
  const auto allowed = methods_for(s.model);
  if (std::find(allowed.begin(), allowed.end(), method) == allowed.end()) {
    fail("method", "'" + method + "' does not apply to model " + to_string(s.model));
  }
  const bool euclid = s.kernel.kind == CostKind::MetricPower && s.kernel.alpha == 1.0;
  if (method == "metric_closed_form" && !(s.kernel.kind == CostKind::MetricPower && s.kernel.alpha <= 1.0)) {
    fail("method", "metric_closed_form needs cost metric_power with alpha <= 1");
  }
  if (method == "quadratic_reference" &&
      (s.kernel.kind != CostKind::Quadratic || s.region.dimension() != 1 ||
       s.region.x(0) < 0.0 || s.region.x(s.region.size() - 1) > 1.0)) {
    fail("method", "quadratic_reference needs a quadratic cost on a 1D region inside [0, 1]");
  }
  if ((method == "boundary_control" || method == "one_d") && !euclid) {
    fail("method", method + " needs cost metric_power with alpha = 1");
  }
  if (method == "one_d" && (s.region.dimension() != 1 || !s.region.window())) {
    fail("method", "one_d needs a 1D region with a fixed window");
  }
  if (method == "verify" && (!s.game || !s.game->candidate_p || !s.game->candidate_q)) {
    fail("method", "verify needs game.candidate_p and game.candidate_q");
  }
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
  try {
    Scenario s;
    s.hash = fnv1a_hex(text);
    const auto model = need(doc, "model", "scenario").get<std::string>();
    if (model == "one") s.model = Model::One;
    else if (model == "two") s.model = Model::Two;
    else if (model == "nash") s.model = Model::Nash;
    else fail("model", "expected \"one\", \"two\" or \"nash\"");

    s.region = parse_region(need(doc, "region", "scenario"));
    const std::size_t n = s.region.size();
    s.kernel = parse_cost(need(doc, "cost", "scenario"), n);
    eval_cost(s.kernel, s.region);  // validates the kernel against the region
    s.measure = doc.contains("measure") ? parse_measure(doc["measure"], n) : CustomerMeasure::uniform(n);

    if (s.model != Model::Nash) {
      const auto& prices = need(doc, "prices", "scenario");
      s.p0 = PricePattern(parse_field(need(prices, "p0", "prices"), s.region, "prices.p0"));
    }
    if (s.model == Model::Two) {
      if (!s.region.partitioned()) fail("region", "model two needs fixed_window or fixed_rect");
      for (std::size_t y : s.region.fixed_points()) {
        if (!s.p0.is_finite(y) || s.p0[y] < 0.0) fail("prices.p0", "must be finite and >= 0 on fixed points");
      }
      if (!(s.measure.total_mass() > 0.0)) fail("measure", "model two needs positive mass");
    } else if (s.region.partitioned()) {
      fail("region", "a fixed part is only meaningful for model two");
    }
    if (s.model == Model::Nash) s.game = parse_game(need(doc, "game", "scenario"), s.region);

    SearchConfig cfg;
    if (doc.contains("search")) cfg = parse_search(doc["search"], cfg);
    s.search = cfg;
    if (doc.contains("threads")) s.threads = static_cast<int>(count(doc["threads"], "threads"));

    if (doc.contains("method")) {
      s.method = doc["method"].get<std::string>();
    } else if (s.model == Model::One) {
      s.method = s.kernel.kind == CostKind::MetricPower && s.kernel.alpha <= 1.0 ? "metric_closed_form"
                                                                               : "general_search";
    } else {
      s.method = methods_for(s.model).front();
    }
    check_method(s, s.method);
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario field has the wrong type: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace sprice
