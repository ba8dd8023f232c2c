#pragma once

// Scenario files: one JSON document describing region, cost, measure, the
// fixed prices and which solver to run. The grammar is in README.md.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sprice/geometry.hpp"
#include "sprice/search.hpp"

namespace sprice {

enum class Model { One, Two, Nash };

std::string to_string(Model model);

struct GameSpec {
  std::vector<bool> in_a;
  std::vector<bool> in_b;
  double cap = 1.0;
  /// Initial strategies over the full region (only the player's own points
  /// are read).
  std::vector<double> init_p;
  std::vector<double> init_q;
  std::size_t rounds = 20;
  double eps = 0.0;
  /// Candidate pair for the verify method.
  std::optional<std::vector<double>> candidate_p;
  std::optional<std::vector<double>> candidate_q;
  /// Max deviation gain accepted by verify; default step * mass.
  std::optional<double> gain_tolerance;
};

struct Scenario {
  Model model = Model::One;
  std::string method;
  Region region;
  CostKernel kernel;
  CustomerMeasure measure;
  PricePattern p0;
  SearchConfig search;
  std::optional<GameSpec> game;
  std::optional<int> threads;
  /// FNV-1a of the scenario text, hex.
  std::string hash;
};

/// Methods each model accepts, default first.
std::vector<std::string> methods_for(Model model);

/// Parses and validates. Throws ValidationError with a field path on any
/// problem. The method is checked against the model.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Checks that `method` can run on `scenario` (model match, cost kind,
/// region shape). Throws ValidationError otherwise.
void check_method(const Scenario& scenario, const std::string& method);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace sprice
