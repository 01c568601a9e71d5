#include "bipsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <ostream>

#include <json.hpp>

#include "bipsim/baselines.hpp"
#include "bipsim/edge_reservoir.hpp"

namespace bipsim {

namespace {

constexpr std::uint64_t kAggregatorSeedTag = 0x61676772ULL;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

SamplerMode sampler_mode_of(Mode m) {
  switch (m) {
    case Mode::SimAdapt: return SamplerMode::Adaptive;
    case Mode::SimFixed: return SamplerMode::Fixed;
    case Mode::SimUnif: return SamplerMode::Unit;
    default: throw ContractViolation("mode has no edge sampler");
  }
}

struct PipelineOutput {
  SimilarityTable table;
  std::uint64_t peak_edge = 0;
  std::uint64_t peak_aggregate = 0;
  std::vector<SnapshotRow> snapshots;
};

}  // namespace

const char* mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::SimAdapt: return "simadapt";
    case Mode::SimFixed: return "simfixed";
    case Mode::SimUnif: return "simunif";
    case Mode::Simple: return "simple";
    case Mode::CnHash: return "cnhash";
  }
  return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) noexcept {
  for (Mode m : {Mode::SimAdapt, Mode::SimFixed, Mode::SimUnif, Mode::Simple, Mode::CnHash}) {
    if (name == mode_name(m)) return m;
  }
  return std::nullopt;
}

bool mode_uses_aggregator(Mode m) noexcept {
  return m == Mode::SimAdapt || m == Mode::SimFixed || m == Mode::SimUnif;
}

ExperimentContext prepare_experiment(const std::string& dataset_path, std::uint64_t oracle_budget) {
  ExperimentContext ctx;
  ctx.stream = load_edge_file(dataset_path);
  ctx.oracle.emplace(oracle_budget);
  try {
    for (const EdgeKey& e : ctx.stream.edges) ctx.oracle->process_edge(e);
  } catch (const BudgetExceeded&) {
    ctx.oracle.reset();
  }
  return ctx;
}

namespace {

struct ResolvedSizes {
  std::uint64_t m = 0;
  std::optional<std::uint64_t> n;  // nullopt = exact aggregation
  double f_m = 0.0;
  std::optional<double> f_n;
};

ResolvedSizes resolve_sizes(const ExperimentConfig& cfg, const ExperimentContext& ctx) {
  ResolvedSizes out;
  const std::uint64_t total_edges = ctx.stream.stats.edges;
  if (total_edges == 0) throw ContractViolation("run_experiment: empty stream");

  if (cfg.f_m && cfg.m_abs) throw ContractViolation("give either f_m or an absolute m, not both");
  if (cfg.m_abs) {
    out.m = *cfg.m_abs;
  } else if (cfg.f_m) {
    if (!(*cfg.f_m > 0.0) || *cfg.f_m > 1.0)
      throw ContractViolation("f_m must lie in (0, 1]");
    out.m = static_cast<std::uint64_t>(
        std::ceil(*cfg.f_m * static_cast<double>(total_edges)));
  } else {
    throw ContractViolation("edge sample size missing: set f_m or m");
  }
  out.m = std::max<std::uint64_t>(1, out.m);
  out.f_m = static_cast<double>(out.m) / static_cast<double>(total_edges);

  if (!mode_uses_aggregator(cfg.mode)) {
    out.n = std::nullopt;
    out.f_n = std::nullopt;
    return out;
  }

  if (cfg.f_n && cfg.n_abs) throw ContractViolation("give either f_n or an absolute n, not both");
  if (cfg.n_abs) {
    out.n = *cfg.n_abs;
    if (ctx.oracle_available()) {
      out.f_n = static_cast<double>(*cfg.n_abs) /
                static_cast<double>(std::max<std::uint64_t>(1, ctx.oracle->pair_count(Side::U)));
    }
  } else if (cfg.f_n) {
    if (!(*cfg.f_n > 0.0) || *cfg.f_n > 1.0)
      throw ContractViolation("f_n must lie in (0, 1]");
    if (*cfg.f_n == 1.0) {
      out.n = std::nullopt;  // exact aggregation
      out.f_n = 1.0;
    } else {
      if (!ctx.oracle_available())
        throw ContractViolation(
            "fractional n needs the exact pair count; give n absolutely or raise the oracle budget");
      out.n = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(
                 std::ceil(*cfg.f_n * static_cast<double>(ctx.oracle->pair_count(Side::U)))));
      out.f_n = *cfg.f_n;
    }
  } else {
    out.n = std::nullopt;
    out.f_n = 1.0;
  }
  return out;
}

std::vector<MetricRow> score_table(const ExactProjection& oracle, const SimilarityTable& table,
                                   std::span<const std::uint32_t> top_k) {
  const RankedSimilarity ranked = rank_against_oracle(oracle, Side::U, table);
  std::vector<MetricRow> rows;
  rows.reserve(top_k.size());
  for (std::uint32_t k : top_k) {
    MetricRow row;
    row.k = k == 0 ? ranked.max_actual_rank : k;
    row.wre = weighted_relative_error(ranked, row.k);
    if (auto cor = top_k_correlation(ranked, row.k)) row.one_minus_cor = 1.0 - *cor;
    rows.push_back(row);
  }
  return rows;
}

PipelineOutput run_pipeline(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                            const ResolvedSizes& sizes, std::uint64_t seed,
                            std::uint32_t applied_filter) {
  PipelineOutput out;

  // Snapshots compare against the exact projection of the stream prefix, so
  // they run their own oracle in lockstep with the sampler.
  std::optional<ExactProjection> snap_oracle;
  const bool snapshots_on = cfg.snapshot_every > 0 && ctx.oracle_available();
  if (snapshots_on) snap_oracle.emplace(cfg.oracle_budget);

  auto snapshot = [&](std::uint64_t t, const SimilarityTable& raw) {
    const SimilarityTable filtered = filter_by_count(raw, applied_filter);
    for (const MetricRow& row : score_table(*snap_oracle, filtered, cfg.top_k)) {
      out.snapshots.push_back(SnapshotRow{t, row.k, row.wre, row.one_minus_cor});
    }
  };

  auto drive = [&](auto&& consume, auto&& current_table) {
    std::uint64_t t = 0;
    for (const EdgeKey& e : ctx.stream.edges) {
      consume(e);
      ++t;
      if (snapshots_on) {
        snap_oracle->process_edge(e);
        if (t % cfg.snapshot_every == 0 && t < ctx.stream.edges.size()) snapshot(t, current_table());
      }
    }
  };

  switch (cfg.mode) {
    case Mode::SimAdapt:
    case Mode::SimFixed:
    case Mode::SimUnif: {
      EdgeReservoir reservoir(sizes.m, sampler_mode_of(cfg.mode), seed);
      AggregateReservoir aggregate(sizes.n, mix64(seed ^ kAggregatorSeedTag));
      drive(
          [&](const EdgeKey& e) {
            reservoir.process_edge(e, aggregate);
            out.peak_edge = std::max<std::uint64_t>(out.peak_edge, reservoir.size());
            out.peak_aggregate = std::max<std::uint64_t>(out.peak_aggregate, aggregate.size());
          },
          [&] { return aggregate.query(); });
      out.table = aggregate.query();
      break;
    }
    case Mode::Simple: {
      UniformSample sample(sizes.m, seed);
      drive(
          [&](const EdgeKey& e) {
            sample.process(e);
            out.peak_edge = std::max<std::uint64_t>(out.peak_edge, sample.size());
          },
          [&] { return sample.build_table(); });
      out.table = sample.build_table();
      break;
    }
    case Mode::CnHash: {
      const std::uint64_t nodes = ctx.stream.stats.u_nodes + ctx.stream.stats.v_nodes;
      const std::uint32_t sketch_size =
          cfg.cnhash_size.value_or(static_cast<std::uint32_t>(std::max<std::uint64_t>(
              1, (sizes.m + nodes / 2) / std::max<std::uint64_t>(1, nodes))));
      CnHashSketches sketches(sketch_size, seed);
      drive([&](const EdgeKey& e) { sketches.process(e); },
            [&] { return sketches.build_table(Side::U); });
      out.table = sketches.build_table(Side::U);
      out.peak_edge = static_cast<std::uint64_t>(sketches.node_count()) * sketch_size;
      break;
    }
  }
  return out;
}

ResultRecord run_single(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                        const ResolvedSizes& sizes, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();

  const std::uint32_t applied_filter =
      mode_uses_aggregator(cfg.mode) ? cfg.filter_threshold : 0u;

  PipelineOutput pipeline = run_pipeline(cfg, ctx, sizes, seed, applied_filter);

  ResultRecord record;
  record.dataset = cfg.dataset;
  record.mode = cfg.mode;
  record.f_m = sizes.f_m;
  record.f_n = mode_uses_aggregator(cfg.mode) ? sizes.f_n : std::optional<double>{};
  record.filter_threshold = applied_filter;
  record.seed = seed;
  record.m = sizes.m;
  record.n = sizes.n;
  record.peak_edge_occupancy = pipeline.peak_edge;
  record.peak_aggregate_occupancy = pipeline.peak_aggregate;
  record.duplicates_dropped = ctx.stream.stats.duplicates_dropped;
  record.oracle_available = ctx.oracle_available();
  record.snapshots = std::move(pipeline.snapshots);

  const SimilarityTable filtered = filter_by_count(pipeline.table, applied_filter);
  if (ctx.oracle_available()) {
    record.metrics = score_table(*ctx.oracle, filtered, cfg.top_k);
  } else {
    for (std::uint32_t k : cfg.top_k) record.metrics.push_back(MetricRow{k, {}, {}});
  }

  record.runtime_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
          .count());
  return record;
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, const ExperimentContext& ctx) {
  if (cfg.repetitions == 0) throw ContractViolation("run_experiment: repetitions must be >= 1");
  const ResolvedSizes sizes = resolve_sizes(cfg, ctx);

  std::vector<ResultRecord> records(cfg.repetitions);
  const unsigned jobs = std::max(1u, cfg.jobs);
  if (jobs == 1) {
    for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
      records[rep] = run_single(cfg, ctx, sizes, cfg.seed + rep);
    }
    return records;
  }

  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::uint32_t rep = next.fetch_add(1);
      if (rep >= cfg.repetitions) return;
      records[rep] = run_single(cfg, ctx, sizes, cfg.seed + rep);
    }
  };
  std::vector<std::future<void>> futures;
  for (unsigned i = 0; i < jobs; ++i) futures.push_back(std::async(std::launch::async, worker));
  for (auto& f : futures) f.get();
  return records;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  const ExperimentContext ctx = prepare_experiment(cfg.dataset, cfg.oracle_budget);
  return run_experiment(cfg, ctx);
}

std::vector<ResultRow> flatten_results(std::span<const ResultRecord> records) {
  std::vector<ResultRow> rows;
  for (const ResultRecord& record : records) {
    for (const MetricRow& metric : record.metrics) {
      ResultRow row;
      row.dataset = record.dataset;
      row.mode = mode_name(record.mode);
      row.f_m = record.f_m;
      row.f_n = record.f_n;
      row.filter = record.filter_threshold;
      row.k = metric.k;
      row.wre = metric.wre;
      row.one_minus_cor = metric.one_minus_cor;
      row.seed = record.seed;
      row.runtime_ms = record.runtime_ms;
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.mode != b.mode) return a.mode < b.mode;
    if (a.k != b.k) return a.k < b.k;
    return a.seed < b.seed;
  });
  return rows;
}

void emit_results_csv(std::ostream& out, std::span<const ResultRecord> records) {
  out << "dataset,mode,f_m,f_n,filter,k,wre,one_minus_cor,seed,runtime_ms\n";
  for (const ResultRow& row : flatten_results(records)) {
    out << row.dataset << ',' << row.mode << ',' << fmt_double(row.f_m) << ',' << fmt_opt(row.f_n)
        << ',' << row.filter << ',' << row.k << ',' << fmt_opt(row.wre) << ','
        << fmt_opt(row.one_minus_cor) << ',' << row.seed << ',' << row.runtime_ms << '\n';
  }
}

void emit_results_json(std::ostream& out, std::span<const ResultRecord> records) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& row : flatten_results(records)) {
    nlohmann::json j{{"dataset", row.dataset}, {"mode", row.mode},       {"f_m", row.f_m},
                     {"filter", row.filter},   {"k", row.k},             {"seed", row.seed},
                     {"runtime_ms", row.runtime_ms}};
    j["f_n"] = row.f_n ? nlohmann::json(*row.f_n) : nlohmann::json();
    j["wre"] = row.wre ? nlohmann::json(*row.wre) : nlohmann::json();
    j["one_minus_cor"] = row.one_minus_cor ? nlohmann::json(*row.one_minus_cor) : nlohmann::json();
    rows.push_back(std::move(j));
  }
  out << rows.dump(2) << '\n';
}

std::vector<ResultRow> parse_results_json(std::istream& in) {
  nlohmann::json rows = nlohmann::json::parse(in);
  std::vector<ResultRow> out;
  for (const auto& j : rows) {
    ResultRow row;
    row.dataset = j.at("dataset").get<std::string>();
    row.mode = j.at("mode").get<std::string>();
    row.f_m = j.at("f_m").get<double>();
    if (!j.at("f_n").is_null()) row.f_n = j.at("f_n").get<double>();
    row.filter = j.at("filter").get<std::uint32_t>();
    row.k = j.at("k").get<std::uint32_t>();
    if (!j.at("wre").is_null()) row.wre = j.at("wre").get<double>();
    if (!j.at("one_minus_cor").is_null()) row.one_minus_cor = j.at("one_minus_cor").get<double>();
    row.seed = j.at("seed").get<std::uint64_t>();
    row.runtime_ms = j.at("runtime_ms").get<std::uint64_t>();
    out.push_back(std::move(row));
  }
  return out;
}

void emit_snapshots_csv(std::ostream& out, std::span<const ResultRecord> records) {
  out << "t,mode,k,wre,one_minus_cor,seed\n";
  for (const ResultRecord& record : records) {
    for (const SnapshotRow& snap : record.snapshots) {
      out << snap.t << ',' << mode_name(record.mode) << ',' << snap.k << ',' << fmt_opt(snap.wre)
          << ',' << fmt_opt(snap.one_minus_cor) << ',' << record.seed << '\n';
    }
  }
}

void emit_rank_scatter(std::ostream& out, const RankedSimilarity& ranked, std::uint32_t k,
                       std::span<const std::uint64_t> labels) {
  if (k > ranked.max_actual_rank) {
    std::cerr << "emit_rank_scatter: k=" << k << " exceeds max rank " << ranked.max_actual_rank
              << ", truncating\n";
    k = ranked.max_actual_rank;
  }
  auto label = [&](std::uint64_t dense) {
    return dense < labels.size() ? labels[dense] : dense;
  };
  out << "side,node_a,node_b,actual_weight,estimated_weight,actual_rank,estimated_rank\n";
  for (const RankedPair& rp : ranked.pairs) {
    if (rp.actual_rank > k) continue;
    out << side_name(rp.key.side) << ',' << label(rp.key.lo) << ',' << label(rp.key.hi) << ','
        << rp.actual << ',' << fmt_double(rp.estimate) << ',' << rp.actual_rank << ','
        << rp.estimated_rank << '\n';
  }
}

void emit_table_csv(std::ostream& out, const SimilarityTable& table,
                    std::span<const std::uint64_t> u_labels,
                    std::span<const std::uint64_t> v_labels) {
  std::vector<std::pair<PairKey, TableEntry>> rows(table.entries.begin(), table.entries.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out << "side,node_a,node_b,estimate,update_count\n";
  for (const auto& [key, entry] : rows) {
    const auto labels = key.side == Side::U ? u_labels : v_labels;
    auto label = [&](std::uint64_t dense) {
      return dense < labels.size() ? labels[dense] : dense;
    };
    out << side_name(key.side) << ',' << label(key.lo) << ',' << label(key.hi) << ','
        << fmt_double(entry.estimate) << ',' << entry.update_count << '\n';
  }
}

}  // namespace bipsim
