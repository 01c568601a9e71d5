#include "bipsim/edge_reservoir.hpp"

#include <algorithm>

namespace bipsim {

namespace {

std::span<const std::uint64_t> lookup(const std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>& adj,
                                      std::uint64_t id) {
  auto it = adj.find(id);
  if (it == adj.end()) return {};
  return {it->second.data(), it->second.size()};
}

void adjacency_erase(std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>& adj,
                     std::uint64_t id, std::uint64_t neighbor) {
  auto it = adj.find(id);
  if (it == adj.end()) return;
  auto& list = it->second;
  list.erase(std::find(list.begin(), list.end(), neighbor));
  if (list.empty()) adj.erase(it);
}

}  // namespace

const char* sampler_mode_name(SamplerMode m) noexcept {
  switch (m) {
    case SamplerMode::Adaptive: return "simadapt";
    case SamplerMode::Fixed: return "simfixed";
    case SamplerMode::Unit: return "simunif";
  }
  return "?";
}

bool EdgeReservoir::PriorityLess::operator()(const SampledEdge& a, const SampledEdge& b) const noexcept {
  const double ra = priority(a);
  const double rb = priority(b);
  if (ra != rb) return ra < rb;
  // Exact priority ties are possible with finite-precision hashes; break them
  // deterministically so eviction order is reproducible.
  if (a.beta != b.beta) return a.beta < b.beta;
  return a.key < b.key;
}

EdgeReservoir::EdgeReservoir(std::size_t capacity, SamplerMode mode, std::uint64_t seed)
    : capacity_(capacity), mode_(mode), seed_(seed), heap_(capacity) {
  if (capacity == 0) throw ContractViolation("EdgeReservoir: capacity must be positive");
}

double EdgeReservoir::effective_p(const SampledEdge& e) const noexcept {
  if (z_star_ <= 0.0) return e.p;
  return std::min(e.p, static_cast<double>(e.weight) / z_star_);
}

std::uint64_t EdgeReservoir::arrival_weight(const EdgeKey& e) const {
  if (mode_ == SamplerMode::Unit) return 1;
  // Degree sum in the provisional sampled graph that already contains the
  // arriving edge, so each endpoint counts it once.
  const auto du = lookup(adj_u_, e.u).size();
  const auto dv = lookup(adj_v_, e.v).size();
  return static_cast<std::uint64_t>(du) + static_cast<std::uint64_t>(dv) + 2;
}

void EdgeReservoir::bump_adjacent_weights(const EdgeKey& e) {
  // Refresh each neighbor's probability against the current threshold before
  // its weight (and hence its probability bound) rises.
  for (std::uint64_t u2 : lookup(adj_v_, e.v)) {
    heap_.update(EdgeKey{u2, e.v}, [this](SampledEdge& se) {
      update_probability(se, z_star_);
      ++se.weight;
    });
  }
  for (std::uint64_t v2 : lookup(adj_u_, e.u)) {
    heap_.update(EdgeKey{e.u, v2}, [this](SampledEdge& se) {
      update_probability(se, z_star_);
      ++se.weight;
    });
  }
}

void EdgeReservoir::insert_edge(EdgeKey e) {
  if (heap_.size() >= capacity_) throw ContractViolation("insert_edge: reservoir full");
  if (heap_.contains(e)) throw DuplicateEdge("insert_edge: edge already resident");

  if (mode_ == SamplerMode::Adaptive) bump_adjacent_weights(e);

  const std::uint64_t w = arrival_weight(e);
  adj_u_[e.u].push_back(e.v);
  adj_v_[e.v].push_back(e.u);
  heap_.push(SampledEdge{e, w, beta_of(e, seed_), 1.0});
}

void EdgeReservoir::delete_edge(EdgeKey e) {
  if (!heap_.contains(e)) throw ContractViolation("delete_edge: edge not resident");
  heap_.erase(e);
  adjacency_erase(adj_u_, e.u, e.v);
  adjacency_erase(adj_v_, e.v, e.u);
}

void EdgeReservoir::process_edge(const EdgeKey& e, UpdateSink& sink) {
  if (heap_.contains(e)) throw DuplicateEdge("process_edge: duplicate edge in stream");
  ++arrivals_;

  // Emission happens strictly before any reservoir mutation: the updates are
  // a function of the state after the previous arrival plus the new edge.
  for (std::uint64_t u2 : lookup(adj_v_, e.v)) {
    const SampledEdge& se = heap_.at(EdgeKey{u2, e.v});
    sink.add(PairKey::of(Side::U, u2, e.u), 1.0 / effective_p(se));
  }
  for (std::uint64_t v2 : lookup(adj_u_, e.u)) {
    const SampledEdge& se = heap_.at(EdgeKey{e.u, v2});
    sink.add(PairKey::of(Side::V, v2, e.v), 1.0 / effective_p(se));
  }

  if (heap_.size() < capacity_) {
    insert_edge(e);
    return;
  }

  const SampledEdge candidate{e, arrival_weight(e), beta_of(e, seed_), 1.0};
  if (PriorityLess{}(candidate, heap_.top())) {
    // Arrival loses: discard it and fold its priority into the threshold.
    z_star_ = std::max(z_star_, priority(candidate));
    return;
  }

  // Arrival wins: admit it (which may bump adjacent weights), then evict
  // whichever edge is minimal afterwards.
  insert_edge(e);
  const SampledEdge& victim = heap_.top();
  z_star_ = std::max(z_star_, priority(victim));
  delete_edge(victim.key);
}

std::vector<SimilarityUpdate> EdgeReservoir::process_edge(const EdgeKey& e) {
  struct Collector final : UpdateSink {
    std::vector<SimilarityUpdate> out;
    void add(const PairKey& key, double value) override { out.push_back({key, value}); }
  } collector;
  process_edge(e, collector);
  return std::move(collector.out);
}

double EdgeReservoir::edge_estimator(const EdgeKey& e) const {
  if (!heap_.contains(e)) return 0.0;
  return 1.0 / effective_p(heap_.at(e));
}

double EdgeReservoir::variance_estimate(const EdgeKey& e) const {
  if (!heap_.contains(e)) return 0.0;
  const double s = 1.0 / effective_p(heap_.at(e));
  return s * (s - 1.0);
}

std::span<const std::uint64_t> EdgeReservoir::neighbors(Side side, std::uint64_t id) const {
  return side == Side::U ? lookup(adj_u_, id) : lookup(adj_v_, id);
}

}  // namespace bipsim
