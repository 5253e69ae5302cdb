#pragma once

// Candidate-set reduction: keep the instances with the smallest gradient
// magnitudes (well-trained points) plus a random handful of the rest.

#include "labelflip/dataset.hpp"
#include "labelflip/error.hpp"
#include "labelflip/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace labelflip {

struct GradientProfile {
  Vector g;
  /// Indices sorted by |g| descending; ties by ascending index.
  std::vector<std::size_t> order;

  std::size_t size() const noexcept { return order.size(); }
};

struct CandidateSet {
  /// Small-gradient block first (smallest |g| first), then the sampled block.
  std::vector<std::size_t> indices;
  std::size_t count_small = 0;
  std::size_t count_large = 0;

  std::size_t k() const noexcept { return indices.size(); }

  /// True when candidate slot `i` came from the small-gradient pool.
  bool is_small(std::size_t slot) const noexcept { return slot < count_small; }
};

inline GradientProfile rank_by_gradient(const Vector &g) {
  if (g.size() < 1) throw attack_error("rank_by_gradient needs at least one gradient");
  if (!g.allFinite()) throw attack_error("gradients must be finite");
  GradientProfile p{g, std::vector<std::size_t>(static_cast<std::size_t>(g.size()))};
  std::iota(p.order.begin(), p.order.end(), std::size_t{0});
  std::stable_sort(p.order.begin(), p.order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(g(static_cast<Eigen::Index>(a))) > std::abs(g(static_cast<Eigen::Index>(b)));
  });
  return p;
}

/**
 * floor(b*n) indices from the tail of the descending order, followed by
 * floor(a*n) indices drawn without replacement from the remaining prefix.
 * The sampled block is kept in order of descending |g|.
 */
inline CandidateSet build_candidate_set(const GradientProfile &profile, double a, double b, std::uint64_t seed) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw attack_error("sampling ratios must be >= 0");
  if (a + b > 1.0 + 1e-12) throw attack_error("sampling ratios must satisfy a + b <= 1");
  const std::size_t n = profile.size();
  const std::size_t n_small = detail::fraction_count(b, n);
  const std::size_t n_large = std::min(detail::fraction_count(a, n), n - n_small);

  CandidateSet c;
  c.indices.reserve(n_small + n_large);
  for (std::size_t j = 0; j < n_small; ++j) c.indices.push_back(profile.order[n - 1 - j]);

  std::vector<std::size_t> positions(n - n_small);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "candidates"));
  auto picked = rng.sample(std::move(positions), n_large);
  std::sort(picked.begin(), picked.end());
  for (auto pos : picked) c.indices.push_back(profile.order[pos]);

  c.count_small = n_small;
  c.count_large = picked.size();
  return c;
}

}  // namespace labelflip
