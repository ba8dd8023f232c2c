#include "polish.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace sprice::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kOutside = kOutsideOption;

bool improves(double candidate, double current) {
  return candidate > current + 1e-12 * (1.0 + std::abs(current));
}

}  // namespace

std::vector<std::size_t> current_targets(const PolishProblem& pb,
                                         const std::vector<double>& price) {
  const auto& c = *pb.cost;
  std::vector<std::size_t> target(c.size(), kOutside);
  for (std::size_t x = 0; x < c.size(); ++x) {
    double best = kInf;
    for (std::size_t k = 0; k < pb.sellers.size(); ++k) {
      best = std::min(best, c(x, pb.sellers[k]) + price[k]);
    }
    if (best > pb.outside[x] + pb.tol) continue;
    for (std::size_t k = 0; k < pb.sellers.size(); ++k) {
      if (c(x, pb.sellers[k]) + price[k] > best + pb.tol) continue;
      if (target[x] == kOutside || price[k] > price[target[x]]) target[x] = k;
    }
  }
  return target;
}

std::vector<double> greatest_prices(const PolishProblem& pb,
                                    const std::vector<std::size_t>& target) {
  const auto& c = *pb.cost;
  const std::size_t m = pb.sellers.size();
  std::vector<double> q(pb.cap);
  // w[t*m + j]: the tightest c(x, j) - c(x, t) over customers sent to t
  std::vector<double> w(m * m, kInf);
  for (std::size_t x = 0; x < c.size(); ++x) {
    if ((*pb.f)[x] == 0.0 || target[x] == kOutside) continue;
    const std::size_t t = target[x];
    const double own = c(x, pb.sellers[t]);
    q[t] = std::min(q[t], pb.outside[x] - own);
    for (std::size_t j = 0; j < m; ++j) {
      if (j != t) w[t * m + j] = std::min(w[t * m + j], c(x, pb.sellers[j]) - own);
    }
  }
  for (std::size_t it = 0; it <= m; ++it) {
    bool changed = false;
    for (std::size_t t = 0; t < m; ++t) {
      const double* row = w.data() + t * m;
      for (std::size_t j = 0; j < m; ++j) {
        const double bound = q[j] + row[j];
        if (bound < q[t] - pb.tol) {
          q[t] = bound;
          changed = true;
        }
      }
    }
    if (!changed) return q;
  }
  return {};  // negative cycle
}

std::vector<double> polish(const PolishProblem& pb, std::vector<double> start) {
  const std::size_t n = pb.cost->size();
  const std::size_t m = pb.sellers.size();
  double best = pb.score(start);
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t x = 0; x < n; ++x) {
      if ((*pb.f)[x] == 0.0) continue;
      const auto base = current_targets(pb, start);
      const bool has_outside = std::isfinite(pb.outside[x]);
      const auto options = static_cast<std::int64_t>(m + (has_outside ? 1 : 0));
      std::vector<double> scores(static_cast<std::size_t>(options), -kInf);
      std::vector<std::vector<double>> prices(static_cast<std::size_t>(options));
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t o = 0; o < options; ++o) {
        const auto slot = static_cast<std::size_t>(o);
        const std::size_t k = slot < m ? slot : kOutside;
        if (k == base[x]) continue;
        auto target = base;
        target[x] = k;
        auto q = greatest_prices(pb, target);
        if (q.empty()) continue;
        scores[slot] = pb.score(q);
        prices[slot] = std::move(q);
      }
      std::size_t pick = 0;
      for (std::size_t o = 1; o < scores.size(); ++o) {
        if (scores[o] > scores[pick]) pick = o;
      }
      if (!scores.empty() && improves(scores[pick], best)) {
        best = scores[pick];
        start = std::move(prices[pick]);
        moved = true;
      }
    }
  }
  return start;
}

}  // namespace sprice::detail
