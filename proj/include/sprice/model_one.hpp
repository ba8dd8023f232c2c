#pragma once

// Whole-region pricing: the agent sets p <= p0 everywhere and earns the
// price paid by every customer.

#include <cstdint>
#include <optional>
#include <vector>

#include "sprice/ctransform.hpp"
#include "sprice/geometry.hpp"
#include "sprice/search.hpp"

namespace sprice {

enum class ModelOneMethod { MetricClosedForm, GeneralSearch, Quadratic1DReference };

std::string to_string(ModelOneMethod method);

struct ModelOneDiagnostics {
  std::uint64_t evaluations = 0;
  std::uint64_t search_space = 0;
  std::vector<double> start_scores;
};

struct ModelOneReport {
  PricePattern optimal_price;
  ValueFunction optimal_value;
  double profit = 0.0;
  AssignmentMap assignment;
  ModelOneMethod method = ModelOneMethod::MetricClosedForm;
  ModelOneDiagnostics diagnostics;
};

/// F(p) = sum_x f(x) max{p(y) : y in T_p(x)}.
double profit_F(const PricePattern& p, const CostTable& cost, const CustomerMeasure& f);

/// I(v) = sum_x f(x) (v(x) - min{c(x, y) : y in d^c v(x)}). Throws NotCConcave
/// when v is not c-concave on the whole region.
double profit_I(const ValueFunction& v, const CostTable& cost, const CustomerMeasure& f);

/// v0(x) = min_y c(x, y) + p0(y).
std::vector<double> upper_value(const PricePattern& p0, const CostTable& cost);

/// Closed form for metric costs: p_opt(x) = min_y p0(y) + d(x, y). The prices
/// do not depend on f; f only enters the reported profit.
ModelOneReport solve_metric(const PricePattern& p0, const CostTable& cost,
                            const CustomerMeasure& f);

/// Discrete maximisation of I over c-concave v with 0 <= v <= v0. Candidates
/// come from quantised prices g on Q: v = dt(min(v_g, v0)), scored by I(v).
ModelOneReport solve_general(const PricePattern& p0, const CostTable& cost,
                             const CustomerMeasure& f, const SearchConfig& search);

struct QuadraticReference {
  double v_opt = 0.0;
  double p_opt = 0.0;
  double q_opt = 0.0;
};

/// Closed-form optimum for c = |x-y|^2/2 on [0,1], uniform f, p0 = x - x^2/2.
QuadraticReference quadratic_1d_reference(double x);

/// Report built from the quadratic closed form sampled on an interval region.
ModelOneReport solve_quadratic_reference(const Region& region, const CostTable& cost,
                                         const CustomerMeasure& f);

}  // namespace sprice
