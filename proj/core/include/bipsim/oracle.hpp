#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bipsim/types.hpp"

namespace bipsim {

// Exact streaming similarity counts for both one-mode projections of a
// bipartite edge stream: count(u,u') = |neighbors(u) ∩ neighbors(u')|, kept
// incrementally as a sparse map over pairs with at least one shared
// neighbor. Projected pair counts can vastly exceed the edge count, so the
// structure refuses to grow past a configurable pair budget instead of
// thrashing.
//
// Node ids must fit in 32 bits (ingestion remaps to dense ids).
class ExactProjection {
 public:
  static constexpr std::uint64_t kDefaultPairBudget = 80'000'000;

  explicit ExactProjection(std::uint64_t pair_budget = kDefaultPairBudget);

  // Counts the new wedges the edge closes on both sides, then records it.
  // Throws DuplicateEdge on a repeated edge and BudgetExceeded once the
  // total resident pair count would pass the budget; after a budget failure
  // the instance is in a partial state and must be discarded.
  void process_edge(const EdgeKey& e);

  std::uint32_t count(const PairKey& key) const;

  // Sum of similarities of `node` against all same-side nodes, computed from
  // the degree identity sum_{w in Γ(node)} (|Γ(w)| - 1).
  std::uint64_t node_total_similarity(NodeId node) const;

  // Cross-checks the incremental counts against a dense biadjacency product
  // on both sides. Guarded: throws ContractViolation above `max_side` nodes
  // per side.
  bool matrix_check(std::size_t max_side = 2000) const;

  std::uint64_t pair_count(Side s) const noexcept { return s == Side::U ? counts_u_.size() : counts_v_.size(); }
  std::uint64_t total_pair_count() const noexcept { return counts_u_.size() + counts_v_.size(); }
  std::uint64_t edge_count() const noexcept { return edges_.size(); }
  std::uint64_t node_count(Side s) const noexcept { return s == Side::U ? adj_u_.size() : adj_v_.size(); }
  std::uint64_t degree(NodeId node) const;

  // Number of distinct similarity values on one side (the dense rank count).
  std::uint64_t distinct_value_count(Side s) const;

  void for_each_pair(Side s, const std::function<void(const PairKey&, std::uint32_t)>& fn) const;

  // Test hook: overwrite a stored pair count.
  void set_count(const PairKey& key, std::uint32_t value);

 private:
  using Counts = std::unordered_map<std::uint64_t, std::uint32_t>;
  using Adjacency = std::unordered_map<std::uint32_t, std::vector<std::uint32_t>>;

  static std::uint64_t pack_pair(std::uint64_t a, std::uint64_t b) noexcept;
  void bump(Counts& counts, std::uint64_t a, std::uint64_t b);

  std::uint64_t pair_budget_;
  Adjacency adj_u_;
  Adjacency adj_v_;
  Counts counts_u_;
  Counts counts_v_;
  std::unordered_set<std::uint64_t> edges_;
};

}  // namespace bipsim
