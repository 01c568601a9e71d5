#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bipsim/types.hpp"

namespace bipsim {

// Parameters for the synthetic heavy-tailed bipartite stream generator.
// Endpoints are drawn with probability proportional to (degree + 1)^exponent
// on each side, so exponent 0 is uniform, 1 is linear preferential
// attachment, and larger values skew harder.
struct SynthConfig {
  std::uint64_t u_nodes = 0;
  std::uint64_t v_nodes = 0;
  std::uint64_t edges = 0;
  double exponent = 1.0;
  std::uint64_t seed = 1;
};

// Generates a duplicate-free bipartite edge stream with reproducible order:
// the same config always yields the same stream. Throws ContractViolation
// when more edges are requested than u_nodes * v_nodes can host; requesting
// exactly that many yields the complete bipartite graph.
std::vector<EdgeKey> synth_bipartite(const SynthConfig& cfg);

// Writes a stream as a whitespace edge list ("u v" per line, newline
// terminated). Byte-identical output for identical input.
void write_edge_file(const std::string& path, const std::vector<EdgeKey>& edges);

}  // namespace bipsim
