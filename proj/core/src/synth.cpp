#include "bipsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <unordered_set>

namespace bipsim {

namespace {

// Fenwick tree over per-node weights, supporting prefix-weighted draws.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), n_(n) {}

  void add(std::size_t i, double delta) {
    for (std::size_t k = i + 1; k <= n_; k += k & (~k + 1)) tree_[k] += delta;
  }

  double total() const {
    double sum = 0.0;
    for (std::size_t k = n_; k > 0; k -= k & (~k + 1)) sum += tree_[k];
    return sum;
  }

  // Largest index whose prefix sum is <= x; x in [0, total).
  std::size_t find(double x) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 <= n_) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step <= n_ && tree_[pos + step] <= x) {
        pos += step;
        x -= tree_[pos];
      }
    }
    return pos;  // 0-based node index
  }

 private:
  std::vector<double> tree_;
  std::size_t n_;
};

struct SideState {
  WeightTree tree;
  std::vector<std::uint64_t> degree;
  double exponent;

  SideState(std::size_t n, double a) : tree(n), degree(n, 0), exponent(a) {
    for (std::size_t i = 0; i < n; ++i) tree.add(i, 1.0);
  }

  std::size_t draw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, tree.total());
    // Rounding can nudge the draw onto the upper boundary; clamp to range.
    return std::min(tree.find(unif(rng)), degree.size() - 1);
  }

  void bump(std::size_t i) {
    const double before = std::pow(static_cast<double>(degree[i]) + 1.0, exponent);
    ++degree[i];
    const double after = std::pow(static_cast<double>(degree[i]) + 1.0, exponent);
    tree.add(i, after - before);
  }
};

}  // namespace

std::vector<EdgeKey> synth_bipartite(const SynthConfig& cfg) {
  if (cfg.u_nodes == 0 || cfg.v_nodes == 0)
    throw ContractViolation("synth_bipartite: node counts must be positive");
  if (cfg.u_nodes > 0xffffffffULL || cfg.v_nodes > 0xffffffffULL)
    throw ContractViolation("synth_bipartite: node counts must fit in 32 bits");
  const unsigned __int128 max_edges =
      static_cast<unsigned __int128>(cfg.u_nodes) * cfg.v_nodes;
  if (static_cast<unsigned __int128>(cfg.edges) > max_edges)
    throw ContractViolation("synth_bipartite: more edges than the complete graph holds");

  std::vector<EdgeKey> edges;
  edges.reserve(cfg.edges);

  if (static_cast<unsigned __int128>(cfg.edges) == max_edges) {
    for (std::uint64_t u = 0; u < cfg.u_nodes; ++u)
      for (std::uint64_t v = 0; v < cfg.v_nodes; ++v) edges.push_back(EdgeKey{u, v});
    return edges;
  }

  std::mt19937_64 rng(mix64(cfg.seed ^ 0x73796e7468ULL));
  SideState us(cfg.u_nodes, cfg.exponent);
  SideState vs(cfg.v_nodes, cfg.exponent);
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(cfg.edges * 2);

  auto packed = [](std::uint64_t u, std::uint64_t v) { return (u << 32) | v; };

  while (edges.size() < cfg.edges) {
    std::uint64_t u = us.draw(rng);
    std::uint64_t v = vs.draw(rng);
    bool placed = false;
    for (int attempt = 0; attempt < 32 && !placed; ++attempt) {
      if (!taken.count(packed(u, v))) {
        placed = true;
        break;
      }
      u = us.draw(rng);
      v = vs.draw(rng);
    }
    if (!placed) {
      // Dense corner: probe deterministically for a free slot.
      while (us.degree[u] >= cfg.v_nodes) u = (u + 1) % cfg.u_nodes;
      while (taken.count(packed(u, v))) v = (v + 1) % cfg.v_nodes;
    }
    taken.insert(packed(u, v));
    edges.push_back(EdgeKey{u, v});
    us.bump(u);
    vs.bump(v);
  }
  return edges;
}

void write_edge_file(const std::string& path, const std::vector<EdgeKey>& edges) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write edge file: " + path);
  std::string buf;
  buf.reserve(1 << 20);
  char line[48];
  for (const EdgeKey& e : edges) {
    const int len = std::snprintf(line, sizeof line, "%llu %llu\n",
                                  static_cast<unsigned long long>(e.u),
                                  static_cast<unsigned long long>(e.v));
    buf.append(line, static_cast<std::size_t>(len));
    if (buf.size() > (1 << 20) - 64) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace bipsim
