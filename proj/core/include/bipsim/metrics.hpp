#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bipsim/aggregator.hpp"
#include "bipsim/oracle.hpp"
#include "bipsim/types.hpp"

namespace bipsim {

// Dense ranks of `values` in descending order: equal values share a rank and
// ranks are consecutive starting at 1. Empty input yields empty output.
std::vector<std::uint32_t> dense_rank(std::span<const std::int64_t> values);

// One scored pair: exact similarity, estimate, and both dense ranks.
struct RankedPair {
  PairKey key;
  std::uint32_t actual = 0;
  double estimate = 0.0;
  std::uint32_t actual_rank = 0;
  std::uint32_t estimated_rank = 0;
  std::uint32_t update_count = 0;
};

struct RankedSimilarity {
  std::vector<RankedPair> pairs;  // sorted by (actual_rank, key)
  std::uint32_t max_actual_rank = 0;
  std::uint32_t max_estimated_rank = 0;
};

// Joins one side of the exact projection with an estimate table. Actual
// ranks are dense ranks over all exact pairs of that side; estimated ranks
// are dense ranks of the floored estimates over the table's pairs. Exact
// pairs missing from the table score estimate 0 and rank one worse than the
// worst estimated rank.
RankedSimilarity rank_against_oracle(const ExactProjection& oracle, Side side,
                                     const SimilarityTable& table);

// Spearman rank correlation of two equal-length vectors: Pearson correlation
// of their fractional (average-on-ties) ranks. Undefined when fewer than two
// points or when exactly one vector is constant; two constant vectors
// correlate perfectly by convention.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Spearman correlation of (actual rank, estimated rank) restricted to pairs
// with actual dense rank <= k. Undefined with fewer than two such pairs.
std::optional<double> top_k_correlation(const RankedSimilarity& ranked, std::uint32_t k);

// Sum of |estimate - actual| over pairs with actual dense rank <= k, divided
// by the summed actual similarity of those pairs. Undefined on an empty
// selection.
std::optional<double> weighted_relative_error(const RankedSimilarity& ranked, std::uint32_t k);

// Drops table entries backed by fewer than `threshold` updates.
// A threshold of 0 is the identity.
SimilarityTable filter_by_count(const SimilarityTable& table, std::uint32_t threshold);

}  // namespace bipsim
