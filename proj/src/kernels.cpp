#include "sprice/kernels.hpp"

#include <omp.h>

#include <cstddef>

namespace sprice {

namespace {

// Below this many (x, y) pairs the fork/join costs more than the loop.
constexpr std::size_t kParallelWork = 1u << 14;

inline double envelope_at(const CostTable& cost, std::size_t x, const PointSet& support,
                          std::span<const double> offset) {
  double best = kUnconstrained;
  const auto row = cost.row(x);
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (offset[k] == kUnconstrained) continue;
    const double cand = row[support[k]] + offset[k];
    if (cand < best) best = cand;
  }
  return best;
}

inline double transform_at(const CostTable& cost, std::span<const double> v, std::size_t y) {
  double best = kUnconstrained;
  const std::size_t n = cost.size();
  for (std::size_t x = 0; x < n; ++x) {
    const double cand = cost(x, y) - v[x];
    if (cand < best) best = cand;
  }
  return best;
}

void check_sizes(const CostTable& cost, std::size_t a, std::size_t b) {
  if (a != b) throw ValidationError("kernel argument length mismatch");
  (void)cost;
}

}  // namespace

std::vector<double> envelope(const CostTable& cost, const PointSet& support,
                             std::span<const double> offset) {
  check_sizes(cost, support.size(), offset.size());
  const std::size_t n = cost.size();
  std::vector<double> out(n);
  const bool wide = n * support.size() >= kParallelWork;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t x = 0; x < count; ++x) {
    out[static_cast<std::size_t>(x)] =
        envelope_at(cost, static_cast<std::size_t>(x), support, offset);
  }
  return out;
}

std::vector<double> transform(const CostTable& cost, std::span<const double> v,
                              const PointSet& target) {
  check_sizes(cost, cost.size(), v.size());
  std::vector<double> out(target.size());
  const bool wide = cost.size() * target.size() >= kParallelWork;
  const auto count = static_cast<std::ptrdiff_t>(target.size());
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    out[idx] = transform_at(cost, v, target[idx]);
  }
  return out;
}

int kernel_threads() { return omp_get_max_threads(); }

void set_kernel_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

namespace reference {

std::vector<double> envelope(const CostTable& cost, const PointSet& support,
                             std::span<const double> offset) {
  check_sizes(cost, support.size(), offset.size());
  std::vector<double> out(cost.size());
  for (std::size_t x = 0; x < cost.size(); ++x) out[x] = envelope_at(cost, x, support, offset);
  return out;
}

std::vector<double> transform(const CostTable& cost, std::span<const double> v,
                              const PointSet& target) {
  check_sizes(cost, cost.size(), v.size());
  std::vector<double> out(target.size());
  for (std::size_t k = 0; k < target.size(); ++k) out[k] = transform_at(cost, v, target[k]);
  return out;
}

}  // namespace reference

}  // namespace sprice
