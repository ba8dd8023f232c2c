#pragma once

// Maximisation over quantised generator vectors. Solvers parameterise their
// candidates by generator values (prices on the points they control) and pass
// an objective that maps a generator to a score; infeasible candidates score
// -inf. Both modes are deterministic for a given seed, whatever the thread
// count.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sprice {

/// Exhaustive enumeration refused because L^d exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SearchMode { Exhaustive, Ascent };

struct SearchConfig {
  SearchMode mode = SearchMode::Ascent;
  std::size_t levels = 8;       ///< L, quantisation levels per coordinate
  std::size_t multistarts = 16; ///< R random initialisations (ascent)
  std::uint64_t seed = 0;
  std::uint64_t budget = 50'000'000;  ///< max exhaustive candidates
  /// Ascent halves its step this many times after converging on the level
  /// grid. 0 keeps the search on the L-level grid.
  std::size_t refinements = 10;
  std::size_t grid_n = 201;     ///< (p1, p2) grid of the 1D reduction
  double price_step = 0.0;      ///< game strategy grid step; 0 means cap/200
};

struct SearchOutcome {
  std::vector<double> best;
  double score = 0.0;
  std::uint64_t evaluations = 0;
  /// L^d for exhaustive runs, number of starts for ascent.
  std::uint64_t space_size = 0;
  /// Final score reached from each start (ascent only).
  std::vector<double> start_scores;
};

using Objective = std::function<double(std::span<const double>)>;
/// Optional canonicalisation applied to a generator after an accepted move.
using Projector = std::function<void(std::span<double>)>;

std::vector<double> quantized_levels(double lo, double hi, std::size_t levels);

/// Number of candidates an exhaustive run would visit, saturating at UINT64_MAX.
std::uint64_t exhaustive_size(std::size_t levels, std::size_t dims);

/// Maximises `objective` over generators in [lo, hi]^dims.
/// Exhaustive: every point of the L-level grid, ties to the lexicographically
/// first candidate (coordinate 0 most significant).
/// Ascent: coordinate line searches over the level grid, then step-halving
/// refinement, from `seeded_starts` (snapped to the grid) followed by
/// `multistarts` random starts; ties between starts go to the earlier start.
SearchOutcome maximize(std::size_t dims, double lo, double hi, const SearchConfig& config,
                       const Objective& objective,
                       const std::vector<std::vector<double>>& seeded_starts = {},
                       const Projector& projector = {});

}  // namespace sprice
