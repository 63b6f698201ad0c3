#include "emotikon/cluster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "emotikon/rng.hpp"

namespace emotikon {

std::size_t Clustering::noise_count() const {
  return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), kNoise));
}

std::uint64_t kmeans_init_seed(std::uint64_t seed, std::size_t run_index) {
  return derive_seed(seed, "kmeans-init", std::to_string(run_index));
}

namespace {

// Renumbers ids to 0..C-1 in increasing order of the original id.
std::size_t densify(std::vector<int>& assignment) {
  std::map<int, int> remap;
  for (int a : assignment)
    if (a != kNoise) remap.emplace(a, 0);
  int next = 0;
  for (auto& [from, to] : remap) to = next++;
  for (int& a : assignment)
    if (a != kNoise) a = remap[a];
  return remap.size();
}

}  // namespace

Clustering kmeans_single(const Matrix& vectors, std::size_t k, std::uint64_t seed, std::size_t max_iterations) {
  const std::size_t n = vectors.rows();
  if (k < 1 || k > n) throw std::invalid_argument("k-means needs 1 <= k <= N");
  const std::size_t d = vectors.cols();

  Clustering result;
  result.k = k;
  result.seed = seed;

  Rng rng(seed);
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(pick[i], pick[i + rng.below(n - i)]);
  Matrix centroids(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = vectors.row(pick[c]);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  }

  std::vector<int> assignment(n, -1);
  std::vector<std::size_t> sizes(k);
  for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iterations, 1); ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = vectors.row(i);
      int best = 0;
      double best_d = squared_distance(x, centroids.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double dist = squared_distance(x, centroids.row(c));
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      if (assignment[i] != best) changed = true;
      assignment[i] = best;
      inertia += best_d;
    }
    result.inertia_history.push_back(inertia);
    if (!changed || iter + 1 == max_iterations) break;

    std::fill(centroids.data().begin(), centroids.data().end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assignment[i]);
      ++sizes[c];
      auto row = centroids.row(c);
      const auto x = vectors.row(i);
      for (std::size_t j = 0; j < d; ++j) row[j] += x[j];
    }
    std::vector<double> to_centroid(n, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (auto& v : centroids.row(c)) v /= static_cast<double>(sizes[c]);
    }
    for (std::size_t i = 0; i < n; ++i)
      to_centroid[i] = squared_distance(vectors.row(i), centroids.row(static_cast<std::size_t>(assignment[i])));
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      const auto far = static_cast<std::size_t>(
          std::max_element(to_centroid.begin(), to_centroid.end()) - to_centroid.begin());
      const auto src = vectors.row(far);
      std::copy(src.begin(), src.end(), centroids.row(c).begin());
      --sizes[static_cast<std::size_t>(assignment[far])];
      assignment[far] = static_cast<int>(c);
      sizes[c] = 1;
      to_centroid[far] = 0.0;
    }
  }

  result.cluster_count = densify(assignment);
  result.assignment = std::move(assignment);
  return result;
}

Clustering dbscan(const Matrix& vectors, double eps, std::size_t min_samples) {
  if (!(eps > 0.0)) throw std::invalid_argument("DBSCAN eps must be > 0");
  if (min_samples < 1) throw std::invalid_argument("DBSCAN min_samples must be >= 1");
  const std::size_t n = vectors.rows();
  const double eps2 = eps * eps;

  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbours[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (squared_distance(vectors.row(i), vectors.row(j)) <= eps2) {
        neighbours[i].push_back(j);
        neighbours[j].push_back(i);
      }
    }
  }
  for (auto& nb : neighbours) std::sort(nb.begin(), nb.end());
  std::vector<char> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = neighbours[i].size() >= min_samples;

  Clustering result;
  result.eps = eps;
  result.min_samples = min_samples;
  result.assignment.assign(n, kNoise);
  int next_id = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || result.assignment[i] != kNoise) continue;
    const int id = next_id++;
    result.assignment[i] = id;
    frontier.push_back(i);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (const std::size_t q : neighbours[p]) {
        if (result.assignment[q] != kNoise) continue;
        result.assignment[q] = id;
        if (core[q]) frontier.push_back(q);
      }
    }
  }
  result.cluster_count = static_cast<std::size_t>(next_id);
  return result;
}

double purity(std::span<const int> assignment, std::span<const Label> labels) {
  if (assignment.size() != labels.size()) throw std::invalid_argument("assignment and labels differ in length");
  if (assignment.empty()) throw std::invalid_argument("purity of an empty clustering is undefined");
  // Noise (-1) becomes its own pooled cluster.
  std::map<int, std::array<std::size_t, kNumLabels>> counts;
  for (std::size_t i = 0; i < assignment.size(); ++i) ++counts[assignment[i]][label_index(labels[i])];
  std::size_t majority_total = 0;
  for (const auto& [id, c] : counts) majority_total += std::max(c[0], c[1]);
  return static_cast<double>(majority_total) / static_cast<double>(assignment.size());
}

std::vector<double> k_distances(const Matrix& vectors, std::size_t k) {
  const std::size_t n = vectors.rows();
  if (k < 1 || k >= n) throw std::invalid_argument("k-distance needs 1 <= k < N");
  std::vector<double> out(n);
  std::vector<double> dist;
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dist.push_back(squared_distance(vectors.row(i), vectors.row(j)));
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    out[i] = std::sqrt(dist[k - 1]);
  }
  return out;
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), at(0.10), at(0.25), at(0.5), at(0.75), at(0.90), values.back()};
}

}  // namespace emotikon
