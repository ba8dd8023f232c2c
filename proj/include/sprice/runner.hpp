#pragma once

// Scenario execution and result bundles. Bundles are deterministic: the same
// scenario, method and seed give byte-identical files whatever the thread
// count. Wall-clock time is reported on the console only.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sprice/scenario.hpp"

namespace sprice {

enum class OutputFormat { Structured, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

struct RunOptions {
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  OutputFormat format = OutputFormat::Structured;
};

struct Outcome {
  std::string method;
  double profit = 0.0;          ///< nash: payoff of A plus payoff of B
  std::vector<double> price;    ///< full region
  std::string result_json;
  std::string series_csv;
  std::string summary_csv;
  std::optional<std::string> trace_csv;
  double seconds = 0.0;
};

/// Applies seed/thread overrides to a parsed scenario.
void apply_options(Scenario& scenario, const RunOptions& options);

/// Runs one method. Throws ValidationError or BudgetExceeded.
Outcome execute(const Scenario& scenario, const std::string& method);

/// Re-checks a result bundle against its scenario: series lengths, price
/// feasibility and the reported profit. Returns the problems found.
std::vector<std::string> revalidate(const Scenario& scenario, const std::string& result_json);

/// Formats a real with 17 significant digits.
std::string format_real(double v);

int run_command(const std::string& scenario_path, const std::string& out_dir,
                const RunOptions& options, std::ostream& out, std::ostream& err);

/// One row per method: profit, max price deviation from the first method,
/// runtime. Writes compare.csv into out_dir when given.
int compare_command(const std::string& scenario_path, const std::vector<std::string>& methods,
                    const RunOptions& options, const std::optional<std::string>& out_dir,
                    std::ostream& out, std::ostream& err);

int check_command(const std::string& scenario_path, const std::string& result_path,
                  std::ostream& out, std::ostream& err);

}  // namespace sprice
