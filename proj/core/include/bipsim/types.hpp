#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "bipsim/hash.hpp"

namespace bipsim {

// Which partition of the bipartite graph a node belongs to.
enum class Side : std::uint8_t { U = 0, V = 1 };

inline const char* side_name(Side s) noexcept { return s == Side::U ? "U" : "V"; }

// A node identified by its partition and a partition-local id.
struct NodeId {
  Side side = Side::U;
  std::uint64_t id = 0;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// A bipartite edge. `u` is always the U-side node, `v` the V-side node;
// the two id spaces are independent, so bipartiteness holds by construction.
struct EdgeKey {
  std::uint64_t u = 0;
  std::uint64_t v = 0;

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// An unordered pair of nodes from the same partition, stored canonically
// with lo < hi so a pair accumulates under exactly one key.
struct PairKey {
  Side side = Side::U;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static PairKey of(Side s, std::uint64_t a, std::uint64_t b) {
    if (a == b) throw std::invalid_argument("PairKey: endpoints must be distinct");
    if (a > b) std::swap(a, b);
    return PairKey{s, a, b};
  }

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& e) const noexcept {
    return static_cast<std::size_t>(hash_combine(hash_combine(0x5bd1e995u, e.u), e.v));
  }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& p) const noexcept {
    std::uint64_t h = hash_combine(0xc2b2ae3d27d4eb4fULL, static_cast<std::uint64_t>(p.side));
    h = hash_combine(h, p.lo);
    return static_cast<std::size_t>(hash_combine(h, p.hi));
  }
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& n) const noexcept {
    return static_cast<std::size_t>(
        hash_combine(hash_combine(0x9ddfea08eb382d69ULL, static_cast<std::uint64_t>(n.side)), n.id));
  }
};

// One similarity increment: an unordered same-side node pair and a
// positive inverse-probability value (>= 1).
struct SimilarityUpdate {
  PairKey key;
  double value = 0.0;

  friend bool operator==(const SimilarityUpdate&, const SimilarityUpdate&) = default;
};

// Consumer of the similarity-update stream. add() is called synchronously
// while an arriving edge is being processed, before any sampler mutation.
class UpdateSink {
 public:
  virtual ~UpdateSink() = default;
  virtual void add(const PairKey& key, double value) = 0;
};

// Violation of an operation precondition (caller bug).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// An arriving edge was already seen; the stream contract assumes unique edges.
struct DuplicateEdge : ContractViolation {
  using ContractViolation::ContractViolation;
};

// A configured memory budget would be exceeded.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Permanent random number for an edge, uniform on (0,1], derived by hashing
// (seed, key). Deterministic: the same (key, seed) always yields the same value.
inline double beta_of(const EdgeKey& key, std::uint64_t seed) noexcept {
  std::uint64_t h = hash_combine(mix64(seed), 0xedb88320ULL);
  h = hash_combine(h, key.u);
  h = hash_combine(h, key.v);
  return unit_interval(h);
}

// Permanent random number for a same-side pair key, independent of the edge
// stream above (distinct domain tag).
inline double beta_of(const PairKey& key, std::uint64_t seed) noexcept {
  std::uint64_t h = hash_combine(mix64(seed), 0x04c11db7ULL);
  h = hash_combine(h, static_cast<std::uint64_t>(key.side));
  h = hash_combine(h, key.lo);
  h = hash_combine(h, key.hi);
  return unit_interval(h);
}

// Shared node hash used by the min-hash baseline; coordinated across sketches.
inline std::uint64_t node_hash(Side side, std::uint64_t id, std::uint64_t seed) noexcept {
  std::uint64_t h = hash_combine(mix64(seed), 0xa5a5a5a5ULL);
  h = hash_combine(h, static_cast<std::uint64_t>(side));
  return hash_combine(h, id);
}

}  // namespace bipsim
