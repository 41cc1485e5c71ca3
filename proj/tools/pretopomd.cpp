#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pretopomd/error.hpp"
#include "pretopomd/parallel.hpp"
#include "pretopomd/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

void emit(const std::string& text, const std::optional<fs::path>& out_file) {
  if (!out_file) {
    std::cout << text;
    return;
  }
  if (out_file->has_parent_path()) fs::create_directories(out_file->parent_path());
  std::ofstream out(*out_file, std::ios::binary);
  if (!out) {
    throw pretopomd::Error(pretopomd::Errc::IoError,
                           "cannot write '" + out_file->string() + "'");
  }
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("pretopomd");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%l: %v");

  CLI::App app{"Hierarchical clustering of mixed numeric and categorical data"};
  app.require_subcommand(1);

  unsigned threads = 1;
  std::string log_level = "warn";
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--log-level", log_level, "Diagnostic verbosity")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  fs::path config;
  fs::path out_dir;
  auto* generate = app.add_subcommand("generate", "Write a synthetic labelled dataset");
  generate->add_option("--config", config, "Config file with a [generator] section")
      ->required()->check(CLI::ExistingFile);
  generate->add_option("--out", out_dir, "Output directory")->required();

  auto* cluster = app.add_subcommand("cluster", "Cluster the dataset named in a config");
  cluster->add_option("--config", config, "Run config file")
      ->required()->check(CLI::ExistingFile);
  cluster->add_option("--out", out_dir, "Output directory")->required();

  fs::path assignments;
  fs::path data;
  std::optional<fs::path> schema;
  std::optional<fs::path> report_file;
  auto* evaluate = app.add_subcommand("evaluate", "Internal quality indices of an assignment");
  evaluate->add_option("assignments", assignments, "assignments.csv")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("data", data, "Data CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("schema", schema, "Schema file (inferred when omitted)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", report_file, "Write the JSON report here instead of stdout");

  fs::path dendrogram;
  std::vector<std::string> query;
  std::optional<fs::path> inspect_file;
  auto* inspect = app.add_subcommand("inspect", "Query a dendrogram.json");
  inspect->add_option("dendrogram", dendrogram, "dendrogram.json")
      ->required()->check(CLI::ExistingFile);
  inspect->add_option("query", query, "roots | path <element> | set <id>")->required();
  inspect->add_option("--out", inspect_file, "Write the answer here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, std::cerr, std::cerr);
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  pretopomd::set_thread_count(threads);

  try {
    if (generate->parsed()) {
      pretopomd::cmd_generate(config, out_dir);
      spdlog::info("wrote dataset to {}", out_dir.string());
    } else if (cluster->parsed()) {
      const auto run = pretopomd::cmd_cluster(config, out_dir);
      for (const auto& p : run.prenetworks) {
        spdlog::debug("prenetwork {}: square_length {} threshold {} edges {}", p.name,
                      p.square_length, p.threshold, p.edges);
      }
      spdlog::info("{} sets in the family, {} clusters, {} outliers",
                   run.analysis.family.size(), run.assignment.clusters.size(),
                   run.assignment.outlier_count());
    } else if (evaluate->parsed()) {
      emit(pretopomd::cmd_evaluate(assignments, data, schema), report_file);
    } else if (inspect->parsed()) {
      emit(pretopomd::cmd_inspect(dendrogram, query), inspect_file);
    }
  } catch (const pretopomd::Error& e) {
    spdlog::error("{}", e.what());
    return EXIT_FAILURE;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
