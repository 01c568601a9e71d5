#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bipsim/indexed_heap.hpp"
#include "bipsim/types.hpp"

namespace bipsim {

struct TableEntry {
  double estimate = 0.0;
  std::uint32_t update_count = 0;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

// Finalized similarity estimates keyed by unordered same-side node pairs.
struct SimilarityTable {
  std::unordered_map<PairKey, TableEntry, PairKeyHash> entries;

  double estimate_or_zero(const PairKey& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0.0 : it->second.estimate;
  }
  const TableEntry* find(const PairKey& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return entries.size(); }
  std::size_t side_count(Side s) const;
};

// Aggregates the similarity-update stream into per-key estimates. add() is
// invoked synchronously from the sampler's emission path; query() only
// between arrivals. Implementations must be swappable behind this interface.
class SimilarityAggregator : public UpdateSink {
 public:
  virtual SimilarityTable query() const = 0;
  virtual std::size_t size() const = 0;
};

// Keyed reservoir over the update stream. Unbounded capacity sums exactly;
// bounded capacity keeps at most n keys by priority value/beta with a
// permanent random number per key, evicting the minimum and folding evicted
// priorities into a threshold that caps every resident's inclusion
// probability. Queried estimates are inverse-probability weighted, so they
// are unbiased for the per-key sums.
class AggregateReservoir final : public SimilarityAggregator {
 public:
  // capacity: nullopt for exact (unbounded) aggregation, otherwise n >= 1.
  AggregateReservoir(std::optional<std::uint64_t> capacity, std::uint64_t seed);

  // Folds one positive, finite update into the sample.
  void add(const PairKey& key, double value) override;

  // Read-only snapshot; callable at any stream position.
  SimilarityTable query() const override;

  std::size_t size() const override;
  bool unbounded() const noexcept { return !capacity_.has_value(); }
  std::optional<std::uint64_t> capacity() const noexcept { return capacity_; }
  double threshold() const noexcept { return z_agg_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  struct Entry {
    PairKey key;
    double value_sum = 0.0;  // raw sum of added values during residency
    double beta = 1.0;
    double p = 1.0;  // running conditional inclusion probability
    std::uint32_t update_count = 0;
  };
  struct KeyOf {
    const PairKey& operator()(const Entry& e) const noexcept { return e.key; }
  };
  struct PriorityLess {
    bool operator()(const Entry& a, const Entry& b) const noexcept;
  };
  using Heap = IndexedMinHeap<Entry, PairKey, KeyOf, PriorityLess, PairKeyHash>;

  static double entry_priority(const Entry& e) noexcept { return e.value_sum / e.beta; }
  double effective_p(const Entry& e) const noexcept;

  std::optional<std::uint64_t> capacity_;
  std::uint64_t seed_;
  double z_agg_ = 0.0;
  Heap heap_;
  std::unordered_map<PairKey, TableEntry, PairKeyHash> exact_;
};

}  // namespace bipsim
