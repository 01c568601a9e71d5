#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bipsim/aggregator.hpp"
#include "bipsim/edge_stream.hpp"
#include "bipsim/metrics.hpp"
#include "bipsim/oracle.hpp"
#include "bipsim/types.hpp"

namespace bipsim {

enum class Mode : std::uint8_t { SimAdapt, SimFixed, SimUnif, Simple, CnHash };

const char* mode_name(Mode m) noexcept;
std::optional<Mode> mode_from_name(const std::string& name) noexcept;
bool mode_uses_aggregator(Mode m) noexcept;

// One experiment: a dataset streamed once per repetition through the chosen
// estimator, scored against the exact projection at the requested top-k cuts.
struct ExperimentConfig {
  std::string dataset;
  Mode mode = Mode::SimAdapt;

  // Edge sample size: a fraction of the stream length or an absolute count
  // (exactly one of the two).
  std::optional<double> f_m;
  std::optional<std::uint64_t> m_abs;

  // Aggregate size: fraction of the exact U-side pair count (1.0 means exact
  // aggregation), or an absolute count. Fractions below 1 need the oracle.
  std::optional<double> f_n = 1.0;
  std::optional<std::uint64_t> n_abs;

  std::uint32_t filter_threshold = 10;  // applied to aggregator update counts
  std::vector<std::uint32_t> top_k = {100, 0};  // 0 selects the maximum rank
  std::uint64_t seed = 1;
  std::uint32_t repetitions = 1;
  std::uint64_t oracle_budget = ExactProjection::kDefaultPairBudget;
  std::uint64_t snapshot_every = 0;  // arrivals between mid-stream snapshots
  std::optional<std::uint32_t> cnhash_size;  // sketch size L; derived if unset
  unsigned jobs = 1;  // repetitions run concurrently
};

struct MetricRow {
  std::uint32_t k = 0;  // effective cut (0 is replaced by the max rank)
  std::optional<double> wre;
  std::optional<double> one_minus_cor;
};

struct SnapshotRow {
  std::uint64_t t = 0;
  std::uint32_t k = 0;
  std::optional<double> wre;
  std::optional<double> one_minus_cor;
};

struct ResultRecord {
  std::string dataset;
  Mode mode = Mode::SimAdapt;
  double f_m = 0.0;
  std::optional<double> f_n;  // nullopt when not derivable (no oracle)
  std::uint32_t filter_threshold = 0;  // threshold actually applied
  std::uint64_t seed = 0;
  std::uint64_t runtime_ms = 0;
  std::uint64_t m = 0;
  std::optional<std::uint64_t> n;  // nullopt for exact aggregation
  std::uint64_t peak_edge_occupancy = 0;
  std::uint64_t peak_aggregate_occupancy = 0;
  std::uint64_t duplicates_dropped = 0;
  bool oracle_available = false;
  std::vector<MetricRow> metrics;
  std::vector<SnapshotRow> snapshots;
};

// Stream and ground truth shared across configurations and repetitions.
struct ExperimentContext {
  EdgeList stream;
  std::optional<ExactProjection> oracle;  // absent when the pair budget blew

  bool oracle_available() const noexcept { return oracle.has_value(); }
};

// Loads the dataset and builds the exact projection under `oracle_budget`.
// A blown budget leaves the context without an oracle instead of failing.
ExperimentContext prepare_experiment(const std::string& dataset_path,
                                     std::uint64_t oracle_budget);

// Runs cfg.repetitions independent repetitions (seeds seed, seed+1, ...) and
// returns one record each. The overload without a context prepares one.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         const ExperimentContext& ctx);
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

// Flat result row as serialized to CSV/JSON.
struct ResultRow {
  std::string dataset;
  std::string mode;
  double f_m = 0.0;
  std::optional<double> f_n;
  std::uint32_t filter = 0;
  std::uint32_t k = 0;
  std::optional<double> wre;
  std::optional<double> one_minus_cor;
  std::uint64_t seed = 0;
  std::uint64_t runtime_ms = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Rows sorted by (mode, k, seed); one row per (record, k).
std::vector<ResultRow> flatten_results(std::span<const ResultRecord> records);

// CSV: header "dataset,mode,f_m,f_n,filter,k,wre,one_minus_cor,seed,runtime_ms",
// UTF-8, newline terminated, empty cells for undefined metrics.
void emit_results_csv(std::ostream& out, std::span<const ResultRecord> records);

// JSON: array of objects mirroring the CSV columns (null for undefined).
void emit_results_json(std::ostream& out, std::span<const ResultRecord> records);
std::vector<ResultRow> parse_results_json(std::istream& in);

// Sidecar for mid-stream snapshots: "t,mode,k,wre,one_minus_cor,seed".
void emit_snapshots_csv(std::ostream& out, std::span<const ResultRecord> records);

// Scatter of exact vs estimated (weight, rank) for pairs with actual dense
// rank <= k, for external plotting. `labels` maps dense ids back to input
// ids; pass an empty span to emit dense ids. A k beyond the maximum rank is
// truncated with a note on stderr.
void emit_rank_scatter(std::ostream& out, const RankedSimilarity& ranked, std::uint32_t k,
                       std::span<const std::uint64_t> labels);

// Raw estimate table dump ("side,node_a,node_b,estimate,update_count"),
// usable even when no oracle is available.
void emit_table_csv(std::ostream& out, const SimilarityTable& table,
                    std::span<const std::uint64_t> u_labels,
                    std::span<const std::uint64_t> v_labels);

}  // namespace bipsim
