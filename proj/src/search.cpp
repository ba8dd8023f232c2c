#include "sprice/search.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace sprice {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

bool improves(double candidate, double current) {
  if (current == kMinusInf) return candidate > kMinusInf;
  return candidate > current + 1e-12 * (1.0 + std::abs(current));
}

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Candidate {
  double score = kMinusInf;
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.index < b.index;
}

SearchOutcome run_exhaustive(std::size_t dims, const std::vector<double>& levels,
                             const SearchConfig& config, const Objective& objective) {
  const std::size_t L = levels.size();
  const std::uint64_t total = exhaustive_size(L, dims);
  if (total > config.budget) {
    throw BudgetExceeded("exhaustive search needs " + std::to_string(L) + "^" +
                         std::to_string(dims) + " candidates, budget is " +
                         std::to_string(config.budget));
  }
  Candidate best;
  const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel
  {
    Candidate local;
    std::vector<double> g(dims);
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < count; ++idx) {
      auto rest = static_cast<std::uint64_t>(idx);
      for (std::size_t j = dims; j-- > 0;) {
        g[j] = levels[rest % L];
        rest /= L;
      }
      const Candidate c{objective(g), static_cast<std::uint64_t>(idx)};
      if (better(c, local)) local = c;
    }
#pragma omp critical
    {
      if (better(local, best)) best = local;
    }
  }
  SearchOutcome out;
  out.best.resize(dims);
  auto rest = best.index == std::numeric_limits<std::uint64_t>::max() ? 0 : best.index;
  for (std::size_t j = dims; j-- > 0;) {
    out.best[j] = levels[rest % L];
    rest /= L;
  }
  out.score = best.score;
  out.evaluations = total;
  out.space_size = total;
  return out;
}

struct AscentRun {
  std::vector<double> g;
  double score = kMinusInf;
  std::uint64_t evaluations = 0;
};

AscentRun ascend(std::vector<double> g, double lo, double hi, const std::vector<double>& levels,
                 const SearchConfig& config, const Objective& objective,
                 const Projector& projector) {
  AscentRun run;
  // false when the projection lands back on the current generator
  auto accept = [&](std::vector<double>& cand, double score) {
    if (projector) {
      projector(cand);
      for (double& v : cand) v = std::clamp(v, lo, hi);
      if (cand == run.g) return false;
      score = objective(cand);
      ++run.evaluations;
    }
    run.g = cand;
    run.score = score;
    return true;
  };

  run.g = std::move(g);
  run.score = objective(run.g);
  ++run.evaluations;

  constexpr int kMaxSweeps = 10000;
  std::vector<double> cand;
  // Level-grid line searches.
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool moved = false;
    for (std::size_t j = 0; j < run.g.size(); ++j) {
      double best_score = run.score;
      double best_value = run.g[j];
      cand = run.g;
      for (double level : levels) {
        if (level == run.g[j]) continue;
        cand[j] = level;
        const double s = objective(cand);
        ++run.evaluations;
        if (improves(s, best_score)) {
          best_score = s;
          best_value = level;
        }
      }
      if (best_value != run.g[j]) {
        cand[j] = best_value;
        moved = accept(cand, best_score) || moved;
      }
    }
    if (!moved) break;
  }

  // Step-halving pattern moves off the grid.
  const double base = levels.size() > 1 ? (hi - lo) / static_cast<double>(levels.size() - 1) : 0.0;
  for (std::size_t r = 1; r <= config.refinements && base > 0.0; ++r) {
    const double step = base / std::ldexp(1.0, static_cast<int>(r));
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      bool moved = false;
      for (std::size_t j = 0; j < run.g.size(); ++j) {
        for (double dir : {1.0, -1.0}) {
          cand = run.g;
          cand[j] = std::clamp(run.g[j] + dir * step, lo, hi);
          if (cand[j] == run.g[j]) continue;
          const double s = objective(cand);
          ++run.evaluations;
          if (improves(s, run.score) && accept(cand, s)) {
            moved = true;
            break;
          }
        }
      }
      if (!moved) break;
    }
  }
  return run;
}

double snap(double v, const std::vector<double>& levels) {
  auto it = std::lower_bound(levels.begin(), levels.end(), v);
  if (it == levels.end()) return levels.back();
  if (it == levels.begin()) return levels.front();
  const double above = *it;
  const double below = *(it - 1);
  return (above - v) < (v - below) ? above : below;
}

}  // namespace

std::vector<double> quantized_levels(double lo, double hi, std::size_t levels) {
  if (levels == 0) throw std::invalid_argument("search needs at least one level");
  if (!(hi >= lo)) throw std::invalid_argument("search range is empty");
  std::vector<double> out(levels);
  if (levels == 1 || hi == lo) {
    std::fill(out.begin(), out.end(), lo);
    out.resize(1);
    return out;
  }
  for (std::size_t k = 0; k < levels; ++k) {
    out[k] = k + 1 == levels ? hi
                             : lo + (hi - lo) * static_cast<double>(k) /
                                        static_cast<double>(levels - 1);
  }
  return out;
}

std::uint64_t exhaustive_size(std::size_t levels, std::size_t dims) {
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < dims; ++j) {
    if (total > std::numeric_limits<std::uint64_t>::max() / std::max<std::size_t>(levels, 1)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= levels;
  }
  return total;
}

SearchOutcome maximize(std::size_t dims, double lo, double hi, const SearchConfig& config,
                       const Objective& objective,
                       const std::vector<std::vector<double>>& seeded_starts,
                       const Projector& projector) {
  const auto levels = quantized_levels(lo, hi, config.levels);
  if (config.mode == SearchMode::Exhaustive) {
    return run_exhaustive(dims, levels, config, objective);
  }

  std::vector<std::vector<double>> starts;
  for (const auto& s : seeded_starts) {
    if (s.size() != dims) throw std::invalid_argument("seeded start has wrong dimension");
    std::vector<double> g(dims);
    for (std::size_t j = 0; j < dims; ++j) g[j] = snap(s[j], levels);
    starts.push_back(std::move(g));
  }
  for (std::size_t r = 0; r < config.multistarts; ++r) {
    std::mt19937_64 rng(mix(config.seed ^ mix(r + 1)));
    std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
    std::vector<double> g(dims);
    for (double& v : g) v = levels[pick(rng)];
    starts.push_back(std::move(g));
  }
  if (starts.empty()) starts.emplace_back(dims, levels.front());

  std::vector<AscentRun> runs(starts.size());
  const auto count = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < count; ++s) {
    const auto i = static_cast<std::size_t>(s);
    runs[i] = ascend(starts[i], lo, hi, levels, config, objective, projector);
  }

  SearchOutcome out;
  out.space_size = starts.size();
  std::size_t best = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    out.evaluations += runs[i].evaluations;
    out.start_scores.push_back(runs[i].score);
    if (runs[i].score > runs[best].score) best = i;
  }
  out.best = runs[best].g;
  out.score = runs[best].score;
  return out;
}

}  // namespace sprice
