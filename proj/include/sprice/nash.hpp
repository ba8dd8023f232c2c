#pragma once

// Two sellers, A and B, each pricing its own part of the region. Customers
// compare the cheapest A offer with the cheapest B offer; exact ties (within
// tolerance) stay in their home region.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sprice/geometry.hpp"
#include "sprice/search.hpp"

namespace sprice {

enum class Player { A, B };

std::string to_string(Player player);

struct GameContext {
  PointSet a;  ///< A's points, ascending
  PointSet b;  ///< B's points, ascending
  std::vector<bool> in_a;
  std::vector<bool> in_b;
  CustomerMeasure f;  ///< weights with every shared point set to zero
  double zeroed_mass = 0.0;  ///< mass removed from shared points
  double cap = 1.0;   ///< strategies live in [0, cap]
  double tol = 0.0;

  /// Every point must belong to A or B (or both).
  static GameContext make(const CostTable& cost, std::vector<bool> in_a, std::vector<bool> in_b,
                          const CustomerMeasure& f, double cap);
  /// 1D split: A = {x <= split}, B = {x >= split}.
  static GameContext split_interval(const Region& region, const CostTable& cost, double split,
                                    const CustomerMeasure& f, double cap);

  const PointSet& own(Player p) const { return p == Player::A ? a : b; }
  const PointSet& other(Player p) const { return p == Player::A ? b : a; }
};

struct Payoffs {
  double a = 0.0;
  double b = 0.0;
  /// Per customer: which seller serves it and at which point.
  std::vector<Player> served_by;
  std::vector<std::size_t> chosen;
  std::vector<double> paid;
};

/// p aligned with ctx.a, q aligned with ctx.b.
Payoffs payoffs(const std::vector<double>& p, const std::vector<double>& q,
                const GameContext& ctx, const CostTable& cost);

/// Strategy grid used by best responses: step = config.price_step, or
/// cap / 200 when that is 0, adjusted so that cap is a whole number of steps.
std::vector<double> strategy_levels(const GameContext& ctx, const SearchConfig& config);

struct BestResponse {
  std::vector<double> price;  ///< aligned with ctx.own(player)
  double payoff = 0.0;        ///< game payoff against the opponent price
  /// Profit of the same price under the single-seller rules, where the
  /// opponent is a fixed-price region and ties go to the mover.
  double fixed_region_profit = 0.0;
  std::uint64_t evaluations = 0;
};

/// Searches the player's strategy grid, opponent price held fixed. Candidates
/// are scored by the game payoff; accepted moves are replaced by their tight
/// reformulation when that does not lower the payoff. `current` (aligned with
/// the player's points) is used as a starting point when given.
BestResponse best_response(Player player, const std::vector<double>& opponent,
                           const GameContext& ctx, const CostTable& cost,
                           const SearchConfig& search,
                           const std::optional<std::vector<double>>& current = std::nullopt);

struct DynamicsStep {
  std::size_t round = 0;
  Player player = Player::A;
  std::vector<double> p;
  std::vector<double> q;
  double payoff_a = 0.0;
  double payoff_b = 0.0;
  double delta = 0.0;  ///< sup-norm change of the mover's price
  double fixed_region_profit = 0.0;
};

struct DynamicsTrace {
  std::vector<DynamicsStep> steps;  ///< two per round, A first
  std::vector<double> round_delta;  ///< max of both movers' deltas
  bool converged = false;
  /// Rounds after which the joint state repeats, when a cycle of length
  /// <= 4 rounds is detected.
  std::optional<std::size_t> period;
  std::vector<double> p;
  std::vector<double> q;
};

/// Alternating best responses, A then B each round. Stops when a round moves
/// neither price by more than eps (sup norm), when the state revisits one of
/// the previous 4 rounds, or after `rounds` rounds.
DynamicsTrace best_response_dynamics(const std::vector<double>& p_init,
                                     const std::vector<double>& q_init, const GameContext& ctx,
                                     const CostTable& cost, const SearchConfig& search,
                                     std::size_t rounds, double eps);

struct EquilibriumReport {
  bool is_equilibrium = false;
  double payoff_a = 0.0;
  double payoff_b = 0.0;
  double gain_a = 0.0;  ///< best deviation payoff minus current payoff
  double gain_b = 0.0;
  std::vector<double> deviation_a;
  std::vector<double> deviation_b;
  /// Deviations are searched on the best-response strategy grid only.
  std::string scope;
};

EquilibriumReport verify_equilibrium(const std::vector<double>& p, const std::vector<double>& q,
                                     const GameContext& ctx, const CostTable& cost,
                                     const SearchConfig& search, double tol);

}  // namespace sprice
