#include "cfia/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfia/error.hpp"

namespace cfia {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::vector<Embedding> items) : items_(std::move(items)) {
  for (const auto& e : items_) {
    if (e.vector.empty())
      throw ValidationError("embedding '" + e.subject_id + "' is empty");
    if (e.vector.size() != items_.front().vector.size())
      throw ValidationError("embedding '" + e.subject_id + "' has dimension " +
                            std::to_string(e.vector.size()) + ", expected " +
                            std::to_string(items_.front().vector.size()));
    for (double x : e.vector)
      if (!std::isfinite(x))
        throw ValidationError("embedding '" + e.subject_id + "' is not finite");
    if (norm(e.vector) == 0.0)
      throw ValidationError("embedding '" + e.subject_id + "' is the zero vector");
  }
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw ValidationError("cosine_distance: dimension mismatch " +
                          std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine_distance: zero vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  return 1.0 - std::clamp(dot / (nu * nv), -1.0, 1.0);
}

PairList find_optimal_pairs(const EmbeddingSet& embeddings) {
  const std::size_t n = embeddings.size();
  if (n < 2)
    throw ValidationError("pairing needs at least 2 embeddings, got " +
                          std::to_string(n));

  // Symmetric distance matrix; n^2 evaluations at most.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] =
          cosine_distance(embeddings[i].vector, embeddings[j].vector);

  // chose[j] lists the partners j picked; used for the swapped-pair check.
  std::vector<std::vector<std::size_t>> chose(n);
  PairList pairs;
  pairs.reserve(n);
  std::vector<bool> tried(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(tried.begin(), tried.end(), false);
    tried[i] = true;
    // Walk neighbours in increasing (distance, index) order until one is
    // not already paired back to i.
    for (std::size_t step = 1; step < n; ++step) {
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (tried[j]) continue;
        const double d = dist[i * n + j];
        if (best == n || d < best_d) {
          best = j;
          best_d = d;
        }
      }
      tried[best] = true;
      const auto& back = chose[best];
      if (std::find(back.begin(), back.end(), i) == back.end()) {
        pairs.emplace_back(i, best);
        chose[i].push_back(best);
        break;
      }
    }
  }
  return pairs;
}

}  // namespace cfia
