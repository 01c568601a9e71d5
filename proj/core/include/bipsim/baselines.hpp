#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "bipsim/aggregator.hpp"
#include "bipsim/types.hpp"

namespace bipsim {

// Plain uniform edge reservoir over the bipartite stream. After t arrivals
// each edge is resident with probability min(1, m/t); common-neighbor counts
// in the sampled graph scale by 1/p^2 to unbiased estimates.
class UniformSample {
 public:
  UniformSample(std::size_t capacity, std::uint64_t seed);

  void process(const EdgeKey& e);

  // Sampling rate at the current stream position: min(1, m/t).
  double rate() const noexcept;

  // |sampled_neighbors(a) ∩ sampled_neighbors(b)| / rate^2 for same-side a, b.
  double estimate(Side side, std::uint64_t a, std::uint64_t b) const;

  // Estimates for every same-side pair with at least one shared sampled
  // neighbor; update_count carries the raw sampled wedge count.
  SimilarityTable build_table() const;

  std::size_t size() const noexcept { return entries_.size(); }
  std::uint64_t arrivals() const noexcept { return arrivals_; }
  std::span<const EdgeKey> entries() const noexcept { return entries_; }
  std::span<const std::uint64_t> neighbors(Side side, std::uint64_t id) const;

 private:
  using Adjacency = std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>;

  void adjacency_insert(const EdgeKey& e);
  void adjacency_remove(const EdgeKey& e);

  std::size_t capacity_;
  std::uint64_t arrivals_ = 0;
  std::mt19937_64 rng_;
  std::vector<EdgeKey> entries_;
  Adjacency adj_u_;
  Adjacency adj_v_;
};

// Bottom-L min-hash neighborhood sketch for one node: the L neighbors with
// the smallest shared-hash values, plus the exact degree.
struct NodeSketch {
  std::uint64_t degree = 0;
  // (hash, neighbor id), sorted ascending by hash; at most L entries.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> neighbors;

  bool saturated(std::uint32_t sketch_size) const noexcept {
    return degree > sketch_size;
  }
};

// Per-node coordinated min-hash sketches over the bipartite stream. One
// shared hash ranks candidate neighbors, so two nodes with overlapping
// neighborhoods retain overlapping sketches.
class CnHashSketches {
 public:
  CnHashSketches(std::uint32_t sketch_size, std::uint64_t seed);

  // Updates the sketches of both endpoints.
  void process(const EdgeKey& e);

  // Coordinated bottom-k common-neighbor estimate for same-side nodes;
  // exact when neither neighborhood is truncated. nullopt when either node
  // has no sketch.
  std::optional<double> estimate(Side side, std::uint64_t a, std::uint64_t b) const;

  const NodeSketch* sketch(Side side, std::uint64_t id) const;
  std::uint32_t sketch_size() const noexcept { return sketch_size_; }
  std::size_t node_count() const noexcept { return sketch_u_.size() + sketch_v_.size(); }

  // Estimates for every same-side pair sharing at least one sketched
  // neighbor, found through an inverted index rather than all-pairs.
  SimilarityTable build_table(Side side) const;

 private:
  using SketchMap = std::unordered_map<std::uint64_t, NodeSketch>;

  void insert(SketchMap& sketches, std::uint64_t owner, Side counterpart_side,
              std::uint64_t counterpart);

  std::uint32_t sketch_size_;
  std::uint64_t seed_;
  SketchMap sketch_u_;
  SketchMap sketch_v_;
};

// Equivalent edge-sampling rate for a per-node sketching method, from space
// accounting: (nodes * per_sketch_cost) / (stream_len * per_edge_cost),
// capped at 1. The sketch size is folded into per_sketch_cost by the caller.
double sketch_space_equivalent_rate(std::uint64_t nodes, double per_sketch_cost,
                                    double per_edge_cost, std::uint64_t stream_len);

}  // namespace bipsim
