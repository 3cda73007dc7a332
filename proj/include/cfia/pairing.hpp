#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfia {

struct Embedding {
  std::string subject_id;
  std::vector<double> vector;
};

// All vectors share one dimension and are non-zero.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  explicit EmbeddingSet(std::vector<Embedding> items);

  std::size_t size() const { return items_.size(); }
  std::size_t dimension() const { return items_.empty() ? 0 : items_[0].vector.size(); }
  const Embedding& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Embedding>& items() const { return items_; }

 private:
  std::vector<Embedding> items_;
};

// 1 - cos(u, v), in [0, 2].
double cosine_distance(std::span<const double> u, std::span<const double> v);

// Zero-based (first, second) index pairs into an EmbeddingSet.
using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

// Greedy look-alike pairing. For each subject in input order, pick its
// nearest neighbour; if that neighbour already chose this subject, fall back
// to the next-nearest neighbour that does not form a swapped duplicate.
// Distance ties go to the lower index. A subject whose every neighbour
// already chose it contributes no pair.
PairList find_optimal_pairs(const EmbeddingSet& embeddings);

}  // namespace cfia
