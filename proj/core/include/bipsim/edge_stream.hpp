#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "bipsim/types.hpp"

namespace bipsim {

struct StreamStats {
  std::uint64_t u_nodes = 0;
  std::uint64_t v_nodes = 0;
  std::uint64_t edges = 0;
  std::uint64_t duplicates_dropped = 0;
  std::uint64_t max_degree = 0;
  double avg_degree = 0.0;
};

// A bipartite edge stream loaded into memory. Node ids are remapped to dense
// per-side ids in order of first appearance; `u_labels`/`v_labels` map dense
// ids back to the file's original ids. Stream order follows the file;
// repeated edges are dropped and counted.
struct EdgeList {
  std::vector<EdgeKey> edges;
  std::vector<std::uint64_t> u_labels;
  std::vector<std::uint64_t> v_labels;
  StreamStats stats;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a whitespace-separated edge list: two unsigned integer ids per line,
// extra columns ignored, '%'/'#' comment lines and blank lines skipped.
// Throws ParseError (with the line number) on malformed input.
EdgeList load_edge_file(const std::string& path);

// Builds an EdgeList from in-memory edges (already dense ids; labels are the
// identity). Duplicates are dropped and counted, mirroring file ingestion.
EdgeList make_edge_list(const std::vector<EdgeKey>& edges);

// Counts file opens made by load_edge_file, so tests can pin how many passes
// over the input an experiment takes.
std::uint64_t edge_file_open_count() noexcept;

}  // namespace bipsim
