#include "bipsim/edge_stream.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace bipsim {

namespace {

std::atomic<std::uint64_t> g_file_opens{0};

bool parse_two_ids(const std::string& line, std::uint64_t& a, std::uint64_t& b) {
  const char* p = line.data();
  const char* end = p + line.size();
  auto skip_ws = [&] {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
  };
  skip_ws();
  auto r1 = std::from_chars(p, end, a);
  if (r1.ec != std::errc{}) return false;
  p = r1.ptr;
  skip_ws();
  auto r2 = std::from_chars(p, end, b);
  if (r2.ec != std::errc{}) return false;
  p = r2.ptr;
  // Anything after the second id must be separated; extra columns are fine.
  return p == end || *p == ' ' || *p == '\t' || *p == '\r' || *p == ',';
}

struct Builder {
  EdgeList out;
  std::unordered_map<std::uint64_t, std::uint64_t> u_map;
  std::unordered_map<std::uint64_t, std::uint64_t> v_map;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> u_degree;
  std::vector<std::uint64_t> v_degree;

  void add(std::uint64_t raw_u, std::uint64_t raw_v) {
    auto dense = [](std::unordered_map<std::uint64_t, std::uint64_t>& map,
                    std::vector<std::uint64_t>& labels, std::uint64_t raw) {
      auto [it, inserted] = map.try_emplace(raw, labels.size());
      if (inserted) labels.push_back(raw);
      return it->second;
    };
    const std::uint64_t u = dense(u_map, out.u_labels, raw_u);
    const std::uint64_t v = dense(v_map, out.v_labels, raw_v);
    if (!seen.insert((u << 32) | v).second) {
      ++out.stats.duplicates_dropped;
      return;
    }
    if (u >= u_degree.size()) u_degree.resize(u + 1, 0);
    if (v >= v_degree.size()) v_degree.resize(v + 1, 0);
    ++u_degree[u];
    ++v_degree[v];
    out.edges.push_back(EdgeKey{u, v});
  }

  EdgeList finish() {
    out.stats.u_nodes = out.u_labels.size();
    out.stats.v_nodes = out.v_labels.size();
    out.stats.edges = out.edges.size();
    std::uint64_t dmax = 0;
    for (std::uint64_t d : u_degree) dmax = std::max(dmax, d);
    for (std::uint64_t d : v_degree) dmax = std::max(dmax, d);
    out.stats.max_degree = dmax;
    const std::uint64_t nodes = out.stats.u_nodes + out.stats.v_nodes;
    out.stats.avg_degree =
        nodes == 0 ? 0.0 : 2.0 * static_cast<double>(out.stats.edges) / static_cast<double>(nodes);
    return std::move(out);
  }
};

}  // namespace

EdgeList load_edge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge file: " + path);
  g_file_opens.fetch_add(1, std::memory_order_relaxed);

  // Dense ids can only index 32 bits of pair packing downstream.
  Builder builder;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%' || line[first] == '#') continue;
    std::uint64_t a = 0, b = 0;
    if (!parse_two_ids(line.substr(first), a, b))
      throw ParseError("malformed edge at " + path + ":" + std::to_string(line_no));
    builder.add(a, b);
  }
  return builder.finish();
}

EdgeList make_edge_list(const std::vector<EdgeKey>& edges) {
  Builder builder;
  for (const EdgeKey& e : edges) builder.add(e.u, e.v);
  return builder.finish();
}

std::uint64_t edge_file_open_count() noexcept {
  return g_file_opens.load(std::memory_order_relaxed);
}

}  // namespace bipsim
