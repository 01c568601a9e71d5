#include "bipsim/aggregator.hpp"

#include <algorithm>
#include <cmath>

namespace bipsim {

std::size_t SimilarityTable::side_count(Side s) const {
  std::size_t n = 0;
  for (const auto& [key, entry] : entries) {
    (void)entry;
    if (key.side == s) ++n;
  }
  return n;
}

bool AggregateReservoir::PriorityLess::operator()(const Entry& a, const Entry& b) const noexcept {
  const double ra = entry_priority(a);
  const double rb = entry_priority(b);
  if (ra != rb) return ra < rb;
  if (a.beta != b.beta) return a.beta < b.beta;
  return a.key < b.key;
}

AggregateReservoir::AggregateReservoir(std::optional<std::uint64_t> capacity, std::uint64_t seed)
    : capacity_(capacity), seed_(seed) {
  if (capacity_ && *capacity_ == 0)
    throw ContractViolation("AggregateReservoir: capacity must be positive or unbounded");
}

double AggregateReservoir::effective_p(const Entry& e) const noexcept {
  if (z_agg_ <= 0.0) return e.p;
  return std::min(e.p, e.value_sum / z_agg_);
}

void AggregateReservoir::add(const PairKey& key, double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ContractViolation("AggregateReservoir::add: value must be positive and finite");

  if (!capacity_) {
    auto& slot = exact_[key];
    slot.estimate += value;
    ++slot.update_count;
    return;
  }

  if (heap_.contains(key)) {
    heap_.update(key, [&](Entry& e) {
      // Capture the inclusion bound at the old sum before the priority rises.
      if (z_agg_ > 0.0) e.p = std::min(e.p, e.value_sum / z_agg_);
      e.value_sum += value;
      ++e.update_count;
    });
    return;
  }

  const double beta = beta_of(key, seed_);
  if (heap_.size() < *capacity_) {
    heap_.push(Entry{key, value, beta, 1.0, 1});
    return;
  }

  const Entry candidate{key, value, beta, 1.0, 1};
  if (PriorityLess{}(candidate, heap_.top())) {
    z_agg_ = std::max(z_agg_, entry_priority(candidate));
    return;
  }
  const Entry evicted = heap_.pop_min();
  z_agg_ = std::max(z_agg_, entry_priority(evicted));
  heap_.push(candidate);
}

SimilarityTable AggregateReservoir::query() const {
  SimilarityTable table;
  if (!capacity_) {
    table.entries = exact_;
    return table;
  }
  table.entries.reserve(heap_.size());
  for (const Entry& e : heap_.entries()) {
    table.entries.emplace(e.key, TableEntry{e.value_sum / effective_p(e), e.update_count});
  }
  return table;
}

std::size_t AggregateReservoir::size() const {
  return capacity_ ? heap_.size() : exact_.size();
}

}  // namespace bipsim
