#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bipsim/indexed_heap.hpp"
#include "bipsim/types.hpp"

namespace bipsim {

// How edge sampling weights evolve.
//   Adaptive: weight = current degree sum in the sampled graph, grows as
//             adjacent edges are admitted.
//   Fixed:    weight = degree sum at arrival, frozen thereafter.
//   Unit:     weight = 1 for every edge (uniform-style priorities).
enum class SamplerMode : std::uint8_t { Adaptive, Fixed, Unit };

const char* sampler_mode_name(SamplerMode m) noexcept;

// A resident edge of the sample.
//   weight: positive, non-decreasing while resident (Adaptive).
//   beta:   permanent random number in (0,1], hashed from (seed, key).
//   p:      running conditional inclusion probability in (0,1]; refreshed
//           lazily against the global threshold.
struct SampledEdge {
  EdgeKey key;
  std::uint64_t weight = 1;
  double beta = 1.0;
  double p = 1.0;
};

// Priority of a resident edge, computed on demand.
inline double priority(const SampledEdge& e) noexcept {
  return static_cast<double>(e.weight) / e.beta;
}

// Lowers p to min(p, weight/z). A zero threshold means no eviction has
// happened yet, so p stays as is.
inline void update_probability(SampledEdge& e, double z) noexcept {
  if (z > 0.0) {
    const double bound = static_cast<double>(e.weight) / z;
    if (bound < e.p) e.p = bound;
  }
}

// Fixed-capacity weighted reservoir over a bipartite edge stream. Each
// arriving edge first emits one similarity update per resident edge sharing
// an endpoint (value = inverse inclusion probability of the resident edge),
// then competes for residence by priority weight/beta against the current
// minimum. Evicted priorities accumulate into the threshold z*, which in
// turn caps every resident's inclusion probability.
//
// Single-writer: one instance is driven by one logical thread; instances are
// independent and fully determined by (stream order, seed, capacity, mode).
class EdgeReservoir {
 public:
  EdgeReservoir(std::size_t capacity, SamplerMode mode, std::uint64_t seed);

  // Processes one arriving edge: emits updates for its sampled adjacency to
  // `sink` (U-side pairs first, then V-side, neighbors in insertion order),
  // then applies the reservoir admission/eviction step.
  // Throws DuplicateEdge if `e` is currently resident.
  void process_edge(const EdgeKey& e, UpdateSink& sink);

  // Convenience overload collecting the emitted updates.
  std::vector<SimilarityUpdate> process_edge(const EdgeKey& e);

  // Admits `e` unconditionally. Requires free capacity and `e` not resident.
  // In Adaptive mode every resident edge adjacent to an endpoint of `e` has
  // its probability refreshed and weight incremented first.
  void insert_edge(EdgeKey e);

  // Removes a resident edge from the heap, the adjacency and the probability
  // store. Weights of other edges are left untouched. Takes the key by value
  // because callers may pass a reference into the heap itself.
  void delete_edge(EdgeKey e);

  // 1/p for a resident edge (p refreshed against the current threshold),
  // 0 for a non-resident one.
  double edge_estimator(const EdgeKey& e) const;

  // Estimated variance of the edge estimator: (1/p)(1/p - 1) if resident,
  // 0 otherwise.
  double variance_estimate(const EdgeKey& e) const;

  bool contains(const EdgeKey& e) const { return heap_.contains(e); }
  std::size_t size() const noexcept { return heap_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  SamplerMode mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double threshold() const noexcept { return z_star_; }
  std::uint64_t arrivals() const noexcept { return arrivals_; }

  // Resident entry lookup (throws if absent) and heap-ordered view.
  const SampledEdge& entry(const EdgeKey& e) const { return heap_.at(e); }
  std::span<const SampledEdge> entries() const noexcept { return heap_.entries(); }

  // Sampled neighbor list of a node, in insertion order. Empty if unknown.
  std::span<const std::uint64_t> neighbors(Side side, std::uint64_t id) const;

 private:
  struct KeyOf {
    const EdgeKey& operator()(const SampledEdge& e) const noexcept { return e.key; }
  };
  struct PriorityLess {
    bool operator()(const SampledEdge& a, const SampledEdge& b) const noexcept;
  };
  using Heap = IndexedMinHeap<SampledEdge, EdgeKey, KeyOf, PriorityLess, EdgeKeyHash>;
  using Adjacency = std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>;

  std::uint64_t arrival_weight(const EdgeKey& e) const;
  double effective_p(const SampledEdge& e) const noexcept;
  void bump_adjacent_weights(const EdgeKey& e);

  std::size_t capacity_;
  SamplerMode mode_;
  std::uint64_t seed_;
  double z_star_ = 0.0;
  std::uint64_t arrivals_ = 0;
  Heap heap_;
  Adjacency adj_u_;  // U id -> V neighbors
  Adjacency adj_v_;  // V id -> U neighbors
};

}  // namespace bipsim
