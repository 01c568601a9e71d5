#include "bipsim/baselines.hpp"

#include <algorithm>
#include <unordered_set>

namespace bipsim {

namespace {

std::span<const std::uint64_t> lookup(const std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>& adj,
                                      std::uint64_t id) {
  auto it = adj.find(id);
  if (it == adj.end()) return {};
  return {it->second.data(), it->second.size()};
}

}  // namespace

UniformSample::UniformSample(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(mix64(seed ^ 0x756e6966u)) {
  if (capacity == 0) throw ContractViolation("UniformSample: capacity must be positive");
  entries_.reserve(capacity);
}

void UniformSample::adjacency_insert(const EdgeKey& e) {
  adj_u_[e.u].push_back(e.v);
  adj_v_[e.v].push_back(e.u);
}

void UniformSample::adjacency_remove(const EdgeKey& e) {
  auto drop = [](Adjacency& adj, std::uint64_t id, std::uint64_t nbr) {
    auto it = adj.find(id);
    auto& list = it->second;
    list.erase(std::find(list.begin(), list.end(), nbr));
    if (list.empty()) adj.erase(it);
  };
  drop(adj_u_, e.u, e.v);
  drop(adj_v_, e.v, e.u);
}

void UniformSample::process(const EdgeKey& e) {
  ++arrivals_;
  if (entries_.size() < capacity_) {
    entries_.push_back(e);
    adjacency_insert(e);
    return;
  }
  std::uniform_int_distribution<std::uint64_t> pick(0, arrivals_ - 1);
  const std::uint64_t j = pick(rng_);
  if (j < capacity_) {
    adjacency_remove(entries_[j]);
    entries_[j] = e;
    adjacency_insert(e);
  }
}

double UniformSample::rate() const noexcept {
  if (arrivals_ == 0) return 1.0;
  return std::min(1.0, static_cast<double>(capacity_) / static_cast<double>(arrivals_));
}

double UniformSample::estimate(Side side, std::uint64_t a, std::uint64_t b) const {
  const Adjacency& adj = side == Side::U ? adj_u_ : adj_v_;
  const auto na = lookup(adj, a);
  const auto nb = lookup(adj, b);
  const auto& small = na.size() <= nb.size() ? na : nb;
  const auto& large = na.size() <= nb.size() ? nb : na;
  std::unordered_set<std::uint64_t> probe(small.begin(), small.end());
  std::size_t shared = 0;
  for (std::uint64_t x : large) shared += probe.count(x);
  const double p = rate();
  return static_cast<double>(shared) / (p * p);
}

SimilarityTable UniformSample::build_table() const {
  SimilarityTable table;
  const double p = rate();
  const double scale = 1.0 / (p * p);
  auto sweep = [&](const Adjacency& adj, Side side) {
    for (const auto& [center, nbrs] : adj) {
      (void)center;
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
          auto& entry = table.entries[PairKey::of(side, nbrs[i], nbrs[j])];
          entry.estimate += scale;
          ++entry.update_count;
        }
      }
    }
  };
  // Wedges centered at V nodes join U pairs and vice versa.
  sweep(adj_v_, Side::U);
  sweep(adj_u_, Side::V);
  return table;
}

std::span<const std::uint64_t> UniformSample::neighbors(Side side, std::uint64_t id) const {
  return side == Side::U ? lookup(adj_u_, id) : lookup(adj_v_, id);
}

CnHashSketches::CnHashSketches(std::uint32_t sketch_size, std::uint64_t seed)
    : sketch_size_(sketch_size), seed_(seed) {
  if (sketch_size == 0) throw ContractViolation("CnHashSketches: sketch size must be positive");
}

void CnHashSketches::insert(SketchMap& sketches, std::uint64_t owner, Side counterpart_side,
                            std::uint64_t counterpart) {
  NodeSketch& sk = sketches[owner];
  ++sk.degree;
  const std::uint64_t h = node_hash(counterpart_side, counterpart, seed_);
  const auto pos = std::lower_bound(sk.neighbors.begin(), sk.neighbors.end(),
                                    std::make_pair(h, counterpart));
  if (sk.neighbors.size() < sketch_size_) {
    sk.neighbors.insert(pos, {h, counterpart});
  } else if (pos != sk.neighbors.end()) {
    const auto idx = pos - sk.neighbors.begin();
    sk.neighbors.pop_back();
    sk.neighbors.insert(sk.neighbors.begin() + idx, {h, counterpart});
  }
}

void CnHashSketches::process(const EdgeKey& e) {
  insert(sketch_u_, e.u, Side::V, e.v);
  insert(sketch_v_, e.v, Side::U, e.u);
}

const NodeSketch* CnHashSketches::sketch(Side side, std::uint64_t id) const {
  const SketchMap& sketches = side == Side::U ? sketch_u_ : sketch_v_;
  auto it = sketches.find(id);
  return it == sketches.end() ? nullptr : &it->second;
}

std::optional<double> CnHashSketches::estimate(Side side, std::uint64_t a, std::uint64_t b) const {
  const NodeSketch* sa = sketch(side, a);
  const NodeSketch* sb = sketch(side, b);
  if (sa == nullptr || sb == nullptr) return std::nullopt;

  if (!sa->saturated(sketch_size_) && !sb->saturated(sketch_size_)) {
    // Both neighborhoods fully retained: exact intersection.
    std::size_t shared = 0;
    for (const auto& [h, id] : sa->neighbors) {
      (void)h;
      for (const auto& [h2, id2] : sb->neighbors) {
        (void)h2;
        if (id == id2) ++shared;
      }
    }
    return static_cast<double>(shared);
  }

  // Coordinated bottom-k over the hash-union of the two sketches.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
  merged.reserve(sa->neighbors.size() + sb->neighbors.size());
  std::merge(sa->neighbors.begin(), sa->neighbors.end(), sb->neighbors.begin(),
             sb->neighbors.end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  const std::size_t k = std::min<std::size_t>(sketch_size_, merged.size());
  if (k == 0) return 0.0;
  std::size_t both = 0;
  auto contains = [](const NodeSketch& sk, const std::pair<std::uint64_t, std::uint64_t>& item) {
    return std::binary_search(sk.neighbors.begin(), sk.neighbors.end(), item);
  };
  for (std::size_t i = 0; i < k; ++i) {
    if (contains(*sa, merged[i]) && contains(*sb, merged[i])) ++both;
  }
  const double jaccard = static_cast<double>(both) / static_cast<double>(k);
  const double degree_sum = static_cast<double>(sa->degree + sb->degree);
  return jaccard * degree_sum / (1.0 + jaccard);
}

SimilarityTable CnHashSketches::build_table(Side side) const {
  const SketchMap& sketches = side == Side::U ? sketch_u_ : sketch_v_;

  // Inverted index: sketched neighbor -> owners, then score owner pairs.
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> owners_of;
  for (const auto& [owner, sk] : sketches) {
    for (const auto& [h, nbr] : sk.neighbors) {
      (void)h;
      owners_of[nbr].push_back(owner);
    }
  }
  for (auto& [nbr, owners] : owners_of) {
    (void)nbr;
    std::sort(owners.begin(), owners.end());
  }

  SimilarityTable table;
  for (const auto& [nbr, owners] : owners_of) {
    (void)nbr;
    for (std::size_t i = 0; i < owners.size(); ++i) {
      for (std::size_t j = i + 1; j < owners.size(); ++j) {
        const PairKey key = PairKey::of(side, owners[i], owners[j]);
        if (table.entries.count(key)) continue;
        const auto est = estimate(side, owners[i], owners[j]);
        if (est && *est > 0.0) table.entries.emplace(key, TableEntry{*est, 1});
      }
    }
  }
  return table;
}

double sketch_space_equivalent_rate(std::uint64_t nodes, double per_sketch_cost,
                                    double per_edge_cost, std::uint64_t stream_len) {
  if (nodes == 0 || stream_len == 0 || per_sketch_cost <= 0.0 || per_edge_cost <= 0.0)
    throw ContractViolation("sketch_space_equivalent_rate: inputs must be positive");
  const double rate = (static_cast<double>(nodes) * per_sketch_cost) /
                      (static_cast<double>(stream_len) * per_edge_cost);
  return std::min(1.0, rate);
}

}  // namespace bipsim
