#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "emotikon/common.hpp"

namespace emotikon {

inline constexpr int kNoise = -1;

struct Clustering {
  // Cluster id in [0, cluster_count) or kNoise.
  std::vector<int> assignment;
  std::size_t cluster_count = 0;

  // Parameter echo.
  std::optional<std::size_t> k;
  std::optional<double> eps;
  std::optional<std::size_t> min_samples;
  std::optional<std::uint64_t> seed;

  // K-Means only: within-cluster sum of squared distances after each
  // assignment step; the last value is the final inertia.
  std::vector<double> inertia_history;
  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }

  std::size_t noise_count() const;
};

inline constexpr std::size_t kMaxKMeansIterations = 300;

// Lloyd's algorithm started from k distinct random data points. Stops at an
// assignment fixpoint or after max_iterations. A cluster that empties out is
// re-seeded with the point farthest from its own centroid.
// Throws std::invalid_argument unless 1 <= k <= N.
Clustering kmeans_single(const Matrix& vectors, std::size_t k, std::uint64_t seed,
                         std::size_t max_iterations = kMaxKMeansIterations);

// Runs kmeans_single for n_inits derived seeds and calls visit(run_index,
// clustering) for each, in order.
template <typename Visitor>
void kmeans_restarts(const Matrix& vectors, std::size_t k, std::size_t n_inits, std::uint64_t seed,
                     Visitor&& visit);

std::uint64_t kmeans_init_seed(std::uint64_t seed, std::size_t run_index);

// Density-based clustering with Euclidean distance; a point's neighbourhood
// includes itself and every point within distance <= eps. Clusters are
// discovered by scanning points in index order, so the result is
// deterministic for a given input order.
// Throws std::invalid_argument for eps <= 0 or min_samples == 0.
Clustering dbscan(const Matrix& vectors, double eps, std::size_t min_samples);

// (1/N) * sum over clusters of the majority-label count, with all noise
// points pooled into one extra cluster. Throws std::invalid_argument on a
// length mismatch or empty input.
double purity(std::span<const int> assignment, std::span<const Label> labels);
inline double purity(const Clustering& c, std::span<const Label> labels) { return purity(c.assignment, labels); }

// Distance from each point to its k-th nearest other point.
std::vector<double> k_distances(const Matrix& vectors, std::size_t k);

struct Quantiles {
  double min, q10, q25, median, q75, q90, max;
};
// Linear-interpolation quantiles; values must be non-empty.
Quantiles quantiles(std::vector<double> values);

template <typename Visitor>
void kmeans_restarts(const Matrix& vectors, std::size_t k, std::size_t n_inits, std::uint64_t seed,
                     Visitor&& visit) {
  for (std::size_t r = 0; r < n_inits; ++r) visit(r, kmeans_single(vectors, k, kmeans_init_seed(seed, r)));
}

}  // namespace emotikon
