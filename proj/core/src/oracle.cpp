#include "bipsim/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <set>

namespace bipsim {

namespace {

std::uint32_t narrow_id(std::uint64_t id) {
  if (id > std::numeric_limits<std::uint32_t>::max())
    throw ContractViolation("ExactProjection: node ids must fit in 32 bits");
  return static_cast<std::uint32_t>(id);
}

}  // namespace

ExactProjection::ExactProjection(std::uint64_t pair_budget) : pair_budget_(pair_budget) {}

std::uint64_t ExactProjection::pack_pair(std::uint64_t a, std::uint64_t b) noexcept {
  if (a > b) std::swap(a, b);
  return (a << 32) | b;
}

void ExactProjection::bump(Counts& counts, std::uint64_t a, std::uint64_t b) {
  auto [it, inserted] = counts.try_emplace(pack_pair(a, b), 0u);
  ++it->second;
  if (inserted && total_pair_count() > pair_budget_)
    throw BudgetExceeded("ExactProjection: projected pair budget exceeded");
}

void ExactProjection::process_edge(const EdgeKey& e) {
  const std::uint32_t u = narrow_id(e.u);
  const std::uint32_t v = narrow_id(e.v);
  // Edge identity is ordered (U id, V id); pack without canonicalizing.
  if (!edges_.insert((static_cast<std::uint64_t>(u) << 32) | v).second)
    throw DuplicateEdge("ExactProjection: duplicate edge");

  if (auto it = adj_v_.find(v); it != adj_v_.end()) {
    for (std::uint32_t u2 : it->second) bump(counts_u_, u, u2);
  }
  if (auto it = adj_u_.find(u); it != adj_u_.end()) {
    for (std::uint32_t v2 : it->second) bump(counts_v_, v, v2);
  }
  adj_u_[u].push_back(v);
  adj_v_[v].push_back(u);
}

std::uint32_t ExactProjection::count(const PairKey& key) const {
  const Counts& counts = key.side == Side::U ? counts_u_ : counts_v_;
  auto it = counts.find(pack_pair(key.lo, key.hi));
  return it == counts.end() ? 0u : it->second;
}

std::uint64_t ExactProjection::degree(NodeId node) const {
  const Adjacency& adj = node.side == Side::U ? adj_u_ : adj_v_;
  auto it = adj.find(narrow_id(node.id));
  return it == adj.end() ? 0 : it->second.size();
}

std::uint64_t ExactProjection::node_total_similarity(NodeId node) const {
  const Adjacency& adj = node.side == Side::U ? adj_u_ : adj_v_;
  const Adjacency& other = node.side == Side::U ? adj_v_ : adj_u_;
  auto it = adj.find(narrow_id(node.id));
  if (it == adj.end()) return 0;
  std::uint64_t total = 0;
  for (std::uint32_t w : it->second) total += other.at(w).size() - 1;
  return total;
}

std::uint64_t ExactProjection::distinct_value_count(Side s) const {
  const Counts& counts = s == Side::U ? counts_u_ : counts_v_;
  std::set<std::uint32_t> values;
  for (const auto& [key, c] : counts) {
    (void)key;
    values.insert(c);
  }
  return values.size();
}

void ExactProjection::for_each_pair(Side s,
                                    const std::function<void(const PairKey&, std::uint32_t)>& fn) const {
  const Counts& counts = s == Side::U ? counts_u_ : counts_v_;
  for (const auto& [packed, c] : counts) {
    fn(PairKey{s, packed >> 32, packed & 0xffffffffULL}, c);
  }
}

void ExactProjection::set_count(const PairKey& key, std::uint32_t value) {
  Counts& counts = key.side == Side::U ? counts_u_ : counts_v_;
  counts[pack_pair(key.lo, key.hi)] = value;
}

bool ExactProjection::matrix_check(std::size_t max_side) const {
  if (adj_u_.size() > max_side || adj_v_.size() > max_side)
    throw ContractViolation("matrix_check: graph exceeds the dense size guard");

  // Dense ids for both sides, in sorted order for reproducibility.
  std::vector<std::uint32_t> us, vs;
  us.reserve(adj_u_.size());
  vs.reserve(adj_v_.size());
  for (const auto& [id, nbrs] : adj_u_) {
    (void)nbrs;
    us.push_back(id);
  }
  for (const auto& [id, nbrs] : adj_v_) {
    (void)nbrs;
    vs.push_back(id);
  }
  std::sort(us.begin(), us.end());
  std::sort(vs.begin(), vs.end());
  auto index_of = [](const std::vector<std::uint32_t>& ids, std::uint32_t id) {
    return static_cast<Eigen::Index>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(us.size()),
                                            static_cast<Eigen::Index>(vs.size()));
  for (const auto& [u, nbrs] : adj_u_) {
    for (std::uint32_t v : nbrs) a(index_of(us, u), index_of(vs, v)) = 1;
  }

  auto check_side = [&](const Eigen::MatrixXi& product, const std::vector<std::uint32_t>& ids,
                        const Counts& counts) {
    std::uint64_t nonzero = 0;
    for (Eigen::Index i = 0; i < product.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < product.cols(); ++j) {
        const std::uint32_t expected = static_cast<std::uint32_t>(product(i, j));
        if (expected > 0) ++nonzero;
        auto it = counts.find(pack_pair(ids[static_cast<std::size_t>(i)],
                                        ids[static_cast<std::size_t>(j)]));
        const std::uint32_t stored = it == counts.end() ? 0u : it->second;
        if (stored != expected) return false;
      }
    }
    // No stored pair may be missing from the product's support.
    return nonzero == counts.size();
  };

  const Eigen::MatrixXi cu = a * a.transpose();
  const Eigen::MatrixXi cv = a.transpose() * a;
  return check_side(cu, us, counts_u_) && check_side(cv, vs, counts_v_);
}

}  // namespace bipsim
