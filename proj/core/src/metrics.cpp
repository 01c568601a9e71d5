#include "bipsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace bipsim {

std::vector<std::uint32_t> dense_rank(std::span<const std::int64_t> values) {
  std::vector<std::int64_t> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end(), std::greater<>());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<std::uint32_t> ranks;
  ranks.reserve(values.size());
  for (std::int64_t v : values) {
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), v, std::greater<>());
    ranks.push_back(static_cast<std::uint32_t>(it - distinct.begin()) + 1);
  }
  return ranks;
}

RankedSimilarity rank_against_oracle(const ExactProjection& oracle, Side side,
                                     const SimilarityTable& table) {
  RankedSimilarity out;

  // Estimated ranks over the table's pairs of this side, on floored values.
  std::vector<std::pair<PairKey, const TableEntry*>> sampled;
  sampled.reserve(table.entries.size());
  for (const auto& [key, entry] : table.entries) {
    if (key.side == side) sampled.emplace_back(key, &entry);
  }
  std::sort(sampled.begin(), sampled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::int64_t> floored;
  floored.reserve(sampled.size());
  for (const auto& [key, entry] : sampled) {
    (void)key;
    floored.push_back(static_cast<std::int64_t>(std::floor(entry->estimate)));
  }
  const std::vector<std::uint32_t> est_ranks = dense_rank(floored);
  std::unordered_map<PairKey, std::uint32_t, PairKeyHash> est_rank_of;
  est_rank_of.reserve(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    est_rank_of.emplace(sampled[i].first, est_ranks[i]);
    out.max_estimated_rank = std::max(out.max_estimated_rank, est_ranks[i]);
  }
  const std::uint32_t missing_rank = out.max_estimated_rank + 1;

  // Actual ranks over every exact pair of this side.
  std::vector<std::pair<PairKey, std::uint32_t>> actual;
  actual.reserve(oracle.pair_count(side));
  oracle.for_each_pair(side, [&](const PairKey& key, std::uint32_t c) { actual.emplace_back(key, c); });
  std::sort(actual.begin(), actual.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::int64_t> actual_values;
  actual_values.reserve(actual.size());
  for (const auto& [key, c] : actual) {
    (void)key;
    actual_values.push_back(static_cast<std::int64_t>(c));
  }
  const std::vector<std::uint32_t> actual_ranks = dense_rank(actual_values);

  out.pairs.reserve(actual.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    RankedPair rp;
    rp.key = actual[i].first;
    rp.actual = actual[i].second;
    rp.actual_rank = actual_ranks[i];
    out.max_actual_rank = std::max(out.max_actual_rank, rp.actual_rank);
    if (const TableEntry* entry = table.find(rp.key)) {
      rp.estimate = entry->estimate;
      rp.update_count = entry->update_count;
      rp.estimated_rank = est_rank_of.at(rp.key);
    } else {
      rp.estimate = 0.0;
      rp.update_count = 0;
      rp.estimated_rank = missing_rank;
    }
    out.pairs.push_back(rp);
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const RankedPair& a, const RankedPair& b) {
    return a.actual_rank != b.actual_rank ? a.actual_rank < b.actual_rank : a.key < b.key;
  });
  return out;
}

namespace {

// Fractional ranks (ascending), ties averaged.
std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);

  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 && syy == 0.0) return 1.0;  // both constant: trivially aligned
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> top_k_correlation(const RankedSimilarity& ranked, std::uint32_t k) {
  std::vector<double> actual, estimated;
  for (const RankedPair& rp : ranked.pairs) {
    if (rp.actual_rank <= k) {
      actual.push_back(static_cast<double>(rp.actual_rank));
      estimated.push_back(static_cast<double>(rp.estimated_rank));
    }
  }
  if (actual.size() < 2) return std::nullopt;
  return spearman(actual, estimated);
}

std::optional<double> weighted_relative_error(const RankedSimilarity& ranked, std::uint32_t k) {
  double abs_error = 0.0;
  double actual_mass = 0.0;
  for (const RankedPair& rp : ranked.pairs) {
    if (rp.actual_rank <= k) {
      abs_error += std::abs(rp.estimate - static_cast<double>(rp.actual));
      actual_mass += static_cast<double>(rp.actual);
    }
  }
  if (actual_mass <= 0.0) return std::nullopt;
  return abs_error / actual_mass;
}

SimilarityTable filter_by_count(const SimilarityTable& table, std::uint32_t threshold) {
  if (threshold == 0) return table;
  SimilarityTable out;
  out.entries.reserve(table.entries.size());
  for (const auto& [key, entry] : table.entries) {
    if (entry.update_count >= threshold) out.entries.emplace(key, entry);
  }
  return out;
}

}  // namespace bipsim
