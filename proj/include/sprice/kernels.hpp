#pragma once

// Min-plus kernels that every solver is built on. The default versions run
// the outer loop under OpenMP; `reference::` holds the plain serial loops the
// tests compare against. Each output entry is computed by the same inner loop
// in the same order in both versions, so results are bit-identical.

#include <span>
#include <vector>

#include "sprice/geometry.hpp"

namespace sprice {

/// out[x] = min_k { c(x, support[k]) + offset[k] } over every region point x.
/// Infinite offsets are skipped; an all-infinite row yields +inf.
std::vector<double> envelope(const CostTable& cost, const PointSet& support,
                             std::span<const double> offset);

/// out[k] = min_x { c(x, target[k]) - v[x] } over every region point x.
std::vector<double> transform(const CostTable& cost, std::span<const double> v,
                              const PointSet& target);

/// Number of OpenMP threads the kernels will use (1 without OpenMP).
int kernel_threads();
void set_kernel_threads(int threads);

namespace reference {

std::vector<double> envelope(const CostTable& cost, const PointSet& support,
                             std::span<const double> offset);
std::vector<double> transform(const CostTable& cost, std::span<const double> v,
                              const PointSet& target);

}  // namespace reference

}  // namespace sprice
