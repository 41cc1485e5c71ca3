#pragma once

// End-to-end commands behind the command-line tool.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pretopomd/config.hpp"
#include "pretopomd/data_model.hpp"
#include "pretopomd/hierarchy.hpp"
#include "pretopomd/metrics.hpp"
#include "pretopomd/pretopo_space.hpp"

namespace pretopomd {

/// What was built for one declared prenetwork.
struct PrenetworkReport {
  std::string name;
  std::vector<std::string> features;
  Metric metric = Metric::Euclidean;
  WeightScheme scheme = WeightScheme::RadiusBinary;
  double square_length = 0.0;
  double threshold = 1.0;
  bool manual_threshold = false;
  std::size_t edges = 0;
};

struct ClusterRun {
  std::vector<PrenetworkReport> prenetworks;
  AnalysisResult analysis;
  ClusterAssignment assignment;
  /// Deterministic record of every effective setting and derived value.
  nlohmann::ordered_json metadata;
  /// Wall-clock seconds per stage; kept apart from the metadata because it
  /// varies between runs.
  nlohmann::ordered_json timings;
};

/// Builds the space described by `config` over `table` and runs the full
/// analysis. Throws Error(UnknownPrenetworkInRule) before any computation
/// when the rule names an undeclared prenetwork.
ClusterRun run_clustering(const RunConfig& config, const MixedDataTable& table);

/// Loads the table named by the config, inferring the schema if none is
/// given.
MixedDataTable load_run_table(const RunConfig& config);

/// assignments.csv, dendrogram.json, dendrogram.dot, run_metadata.json and
/// timings.json.
void write_cluster_outputs(const ClusterRun& run,
                           const std::filesystem::path& out_dir);

/// data.csv, schema.txt, truth.csv.
void write_generated(const LabeledDataset& dataset,
                     const std::filesystem::path& out_dir);

void cmd_generate(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir);
ClusterRun cmd_cluster(const std::filesystem::path& config_path,
                       const std::filesystem::path& out_dir);

/// Reads `element_id,cluster_id` rows; -1 marks an outlier.
std::vector<std::ptrdiff_t> load_assignments(const std::filesystem::path& path);

/// JSON text of the metric report; undefined indices are null and an
/// infinite index is the string "Infinity".
std::string metric_report_json(const MetricReport& report);

std::string cmd_evaluate(const std::filesystem::path& assignments,
                         const std::filesystem::path& data,
                         const std::optional<std::filesystem::path>& schema);

/// Queries: {"roots"}, {"path", "<element>"}, {"set", "<id>"}.
std::string cmd_inspect(const std::filesystem::path& dendrogram,
                        std::span<const std::string> query);

}  // namespace pretopomd
