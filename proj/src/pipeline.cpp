#include "pretopomd/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pretopomd/datagen.hpp"
#include "pretopomd/error.hpp"

namespace pretopomd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoError, fmt::format("cannot write '{}'", path.string()));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, fmt::format("cannot open '{}'", path.string()));
  }
  return in;
}

std::vector<std::string> resolve_features(const PrenetworkDecl& decl,
                                          const Schema& schema) {
  std::vector<std::string> names;
  for (const auto& item : decl.features) {
    if (item.empty() || item.front() != '@') {
      names.push_back(item);
      continue;
    }
    if (item != "@numeric" && item != "@categorical" && item != "@all") {
      throw ConfigError(fmt::format("prenetwork.{}.features", decl.name),
                        fmt::format("unknown selector '{}'", item));
    }
    for (const auto& f : schema.features()) {
      const bool take = item == "@all" || (item == "@numeric") == f.is_numeric();
      if (take) names.push_back(f.name);
    }
  }
  if (names.empty()) {
    throw ConfigError(fmt::format("prenetwork.{}.features", decl.name),
                      "selects no feature");
  }
  return names;
}

std::vector<PrenetworkDecl> effective_prenetworks(const RunConfig& config,
                                                  const Schema& schema) {
  if (!config.prenetworks.empty()) return config.prenetworks;
  std::vector<PrenetworkDecl> decls;
  const bool any_numeric = std::any_of(schema.features().begin(), schema.features().end(),
                                       [](const Feature& f) { return f.is_numeric(); });
  const bool any_symbolic = std::any_of(schema.features().begin(), schema.features().end(),
                                        [](const Feature& f) { return !f.is_numeric(); });
  if (any_numeric) decls.push_back({"Num", {"@numeric"}, {}, WeightScheme::RadiusBinary, {}});
  if (any_symbolic) decls.push_back({"Cat", {"@categorical"}, {}, WeightScheme::RadiusBinary, {}});
  return decls;
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

MixedDataTable load_run_table(const RunConfig& config) {
  const auto schema = config.schema ? load_schema(*config.schema)
                                    : infer_schema(config.data, config.max_levels);
  return load_csv(config.data, schema);
}

ClusterRun run_clustering(const RunConfig& config, const MixedDataTable& table) {
  const auto total_start = Clock::now();
  const auto& schema = table.schema();
  const auto n = table.rows();
  if (n == 0) throw Error(Errc::EmptyTable, "no elements to cluster");

  const auto rule = parse_rule(config.dnf);
  const auto decls = effective_prenetworks(config, schema);
  {
    std::vector<std::string> names;
    for (const auto& d : decls) names.push_back(d.name);
    BoundRule check(rule, names);  // validates before any computation
  }

  ClusterRun run;
  auto stage = Clock::now();
  std::vector<Prenetwork> nets;
  std::vector<double> thresholds;
  std::vector<DistanceMatrix> matrices;
  std::vector<std::size_t> used_columns;
  for (const auto& decl : decls) {
    const auto names = resolve_features(decl, schema);
    const bool allow_mixed = !decl.metric || *decl.metric == Metric::Gower;
    const auto group = feature_group(table, names, allow_mixed);
    for (const auto c : group.columns()) used_columns.push_back(c);

    const PrenetworkSpec spec{decl.name, decl.metric.value_or(default_metric(group.kind())),
                              decl.scheme};
    ThresholdConfig th = config.thresholds;
    if (decl.manual_threshold) th.manual_threshold = decl.manual_threshold;
    auto dm = pairwise_distances(group, {spec.metric});
    auto built = build_prenetwork(group, dm, spec, th);

    run.prenetworks.push_back({decl.name, names, spec.metric, spec.scheme,
                               built.square_length, built.threshold,
                               built.manual_threshold, built.network.edge_count()});
    nets.push_back(std::move(built.network));
    thresholds.push_back(built.threshold);
    matrices.push_back(std::move(dm));
  }
  const PretopologicalSpace space(n, std::move(nets), std::move(thresholds), rule);
  run.timings["prenetworks"] = seconds_since(stage);

  stage = Clock::now();
  const DistanceMatrix* seed_dm = nullptr;
  DistanceMatrix gower;
  if (config.seeds.strategy == SeedStrategy::NearestNeighbors) {
    if (config.seed_distance == "gower") {
      std::sort(used_columns.begin(), used_columns.end());
      used_columns.erase(std::unique(used_columns.begin(), used_columns.end()),
                         used_columns.end());
      std::vector<std::string> names;
      for (const auto c : used_columns) names.push_back(schema[c].name);
      gower = gower_distances(feature_group(table, names, true));
      seed_dm = &gower;
    } else {
      const auto it = std::find_if(decls.begin(), decls.end(), [&](const auto& d) {
        return d.name == config.seed_distance;
      });
      if (it == decls.end()) {
        throw ConfigError("seeds.seed_distance",
                          fmt::format("no prenetwork named '{}'", config.seed_distance));
      }
      seed_dm = &matrices[static_cast<std::size_t>(it - decls.begin())];
    }
  }
  run.timings["seed_distance"] = seconds_since(stage);

  stage = Clock::now();
  run.analysis = quasi_structural_analysis(space, config.seeds, seed_dm, config.hierarchy);
  run.timings["quasi_structural_analysis"] = seconds_since(stage);
  run.assignment = extract_clusters(run.analysis.hierarchy, n);

  auto& meta = run.metadata;
  meta["input"]["data"] = config.data.generic_string();
  meta["input"]["schema"] = config.schema ? nlohmann::ordered_json(config.schema->generic_string())
                                          : nlohmann::ordered_json("inferred");
  meta["input"]["elements"] = n;
  auto features = nlohmann::ordered_json::array();
  for (const auto& f : schema.features()) {
    features.push_back({{"name", f.name}, {"kind", to_string(f.kind)}});
  }
  meta["input"]["features"] = std::move(features);

  auto prenets = nlohmann::ordered_json::array();
  for (const auto& p : run.prenetworks) {
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["features"] = p.features;
    j["metric"] = to_string(p.metric);
    j["weights"] = to_string(p.scheme);
    j["square_length"] = p.square_length;
    j["threshold"] = p.threshold;
    j["threshold_source"] = p.manual_threshold ? "manual" : "auto";
    j["edges"] = p.edges;
    prenets.push_back(std::move(j));
  }
  meta["prenetworks"] = std::move(prenets);

  const auto& th = config.thresholds;
  meta["thresholds"] = {{"threshold_power", th.threshold_power},
                        {"closest_coeff", th.closest_coeff},
                        {"square_lgth_coeff", th.square_lgth_coeff},
                        {"area_method", to_string(th.area_method)},
                        {"manual_threshold", optional_json(th.manual_threshold)}};
  meta["rule"] = {{"text", config.dnf}, {"canonical", format_rule(rule)}};
  meta["seeds"] = {
      {"seed_size", config.seeds.d},
      {"effective_seed_size", std::min(config.seeds.d, n)},
      {"seed_strategy", to_string(config.seeds.strategy)},
      {"rng_seed", config.seeds.rng_seed},
      {"walk_sampling", to_string(config.seeds.sampling)},
      {"seed_distance", config.seeds.strategy == SeedStrategy::NearestNeighbors
                            ? nlohmann::ordered_json(config.seed_distance)
                            : nlohmann::ordered_json(nullptr)},
      {"truncated_walks", run.analysis.seeds.truncated.size()}};
  meta["quasi_hierarchy"] = {{"th_qh", config.hierarchy.th_qh},
                             {"tie_break", to_string(config.hierarchy.tie_break)},
                             {"hierarchy_rng_seed", config.hierarchy.rng_seed}};

  const auto& family = run.analysis.family;
  std::size_t closed = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    closed += family.closed[i] ? 1 : 0;
    largest = std::max(largest, family.sets[i].size());
  }
  meta["counts"] = {{"family_sets", family.size()},
                    {"closed_sets", closed},
                    {"largest_set", largest},
                    {"hierarchy_sets", run.analysis.hierarchy.size()}};

  std::vector<std::size_t> sizes(run.assignment.clusters.size(), 0);
  for (const auto l : run.assignment.labels) {
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  }
  meta["clusters"] = {{"count", run.assignment.clusters.size()},
                      {"outliers", run.assignment.outlier_count()},
                      {"sizes", sizes},
                      {"set_ids", run.assignment.set_ids}};
  run.timings["total"] = seconds_since(total_start);
  return run;
}

void write_cluster_outputs(const ClusterRun& run,
                           const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "assignments.csv");
    out << "element_id,cluster_id\n";
    for (std::size_t i = 0; i < run.assignment.labels.size(); ++i) {
      out << i << ',' << run.assignment.labels[i] << '\n';
    }
  }
  open_output(out_dir / "dendrogram.json")
      << export_dendrogram(run.analysis.hierarchy, DendrogramFormat::Json);
  open_output(out_dir / "dendrogram.dot")
      << export_dendrogram(run.analysis.hierarchy, DendrogramFormat::Dot);
  open_output(out_dir / "run_metadata.json") << run.metadata.dump(2) << '\n';
  open_output(out_dir / "timings.json") << run.timings.dump(2) << '\n';
}

void write_generated(const LabeledDataset& dataset,
                     const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "data.csv");
    write_csv(out, dataset.table);
  }
  {
    auto out = open_output(out_dir / "schema.txt");
    write_schema(out, dataset.table.schema());
  }
  auto out = open_output(out_dir / "truth.csv");
  out << "element_id,true_cluster\n";
  for (std::size_t i = 0; i < dataset.ground_truth.size(); ++i) {
    out << i << ',' << dataset.ground_truth[i] << '\n';
  }
}

void cmd_generate(const std::filesystem::path& config_path,
                  const std::filesystem::path& out_dir) {
  write_generated(generate(load_generator_config(config_path)), out_dir);
}

ClusterRun cmd_cluster(const std::filesystem::path& config_path,
                       const std::filesystem::path& out_dir) {
  const auto config = load_run_config(config_path);
  const auto table = load_run_table(config);
  auto run = run_clustering(config, table);
  write_cluster_outputs(run, out_dir);
  return run;
}

std::vector<std::ptrdiff_t> load_assignments(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::EmptyFile, "no header line");
  std::vector<std::ptrdiff_t> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_record(line);
    if (fields.size() != 2) throw CellError(Errc::MissingColumn, row, 0, line);
    long long id = 0;
    long long cluster = 0;
    const auto parse = [&](const std::string& text, long long& out, std::size_t col) {
      const auto* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(text.data(), end, out);
      if (ec != std::errc{} || ptr != end) {
        throw CellError(Errc::UnparseableNumeric, row, col, text);
      }
    };
    parse(fields[0], id, 0);
    parse(fields[1], cluster, 1);
    if (id != static_cast<long long>(row)) {
      throw CellError(Errc::InvalidArgument, row, 0, fields[0]);
    }
    labels.push_back(cluster < 0 ? ClusterAssignment::kOutlier
                                 : static_cast<std::ptrdiff_t>(cluster));
    ++row;
  }
  return labels;
}

std::string metric_report_json(const MetricReport& report) {
  const auto value = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v) return nullptr;
    if (std::isinf(*v)) return "Infinity";
    return *v;
  };
  nlohmann::ordered_json j;
  j["calinski_harabasz_embedded"] = value(report.calinski_harabasz);
  j["silhouette_gower"] = value(report.silhouette);
  j["davies_bouldin_embedded"] = value(report.davies_bouldin);
  j["n_clusters"] = report.n_clusters;
  j["n_outliers"] = report.n_outliers;
  return j.dump(2) + "\n";
}

std::string cmd_evaluate(const std::filesystem::path& assignments,
                         const std::filesystem::path& data,
                         const std::optional<std::filesystem::path>& schema) {
  const auto s = schema ? load_schema(*schema) : infer_schema(data, 100);
  const auto table = load_csv(data, s);
  const auto labels = load_assignments(assignments);
  return metric_report_json(evaluate_clustering(table, labels));
}

std::string cmd_inspect(const std::filesystem::path& dendrogram,
                        std::span<const std::string> query) {
  auto in = open_input(dendrogram);
  nlohmann::json nodes;
  try {
    in >> nodes;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument,
                fmt::format("'{}' is not a dendrogram: {}", dendrogram.string(), e.what()));
  }
  if (!nodes.is_array()) {
    throw Error(Errc::InvalidArgument, "dendrogram JSON must be an array of nodes");
  }
  const auto parse_index = [](const std::string& text, Errc code) {
    std::size_t out = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
      throw Error(code, fmt::format("'{}' is not an index", text));
    }
    return out;
  };
  const auto describe = [&](const nlohmann::json& node) {
    return fmt::format("set {} size {} parent {}", node.at("id").get<long long>(),
                       node.at("size").get<std::size_t>(),
                       node.at("parent").get<long long>());
  };

  if (query.empty()) throw Error(Errc::InvalidArgument, "empty inspect query");
  std::ostringstream out;
  if (query[0] == "roots" && query.size() == 1) {
    for (const auto& node : nodes) {
      if (node.at("parent").get<long long>() < 0) out << describe(node) << '\n';
    }
    return out.str();
  }
  if (query[0] == "set" && query.size() == 2) {
    const auto id = parse_index(query[1], Errc::UnknownSetId);
    if (id >= nodes.size()) {
      throw Error(Errc::UnknownSetId, fmt::format("no set with id {}", id));
    }
    const auto& node = nodes[id];
    out << describe(node) << '\n';
    out << "elements " << fmt::format("{}", fmt::join(node.at("elements").get<std::vector<std::size_t>>(), " "))
        << '\n';
    out << "children " << fmt::format("{}", fmt::join(node.at("children").get<std::vector<std::size_t>>(), " "))
        << '\n';
    return out.str();
  }
  if (query[0] == "path" && query.size() == 2) {
    const auto element = parse_index(query[1], Errc::UnknownElement);
    // Leaf-most set: the smallest containing the element, lowest id first.
    std::optional<std::size_t> leaf;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto elems = nodes[i].at("elements").get<std::vector<std::size_t>>();
      if (!std::binary_search(elems.begin(), elems.end(), element)) continue;
      if (!leaf || nodes[i].at("size").get<std::size_t>() <
                       nodes[*leaf].at("size").get<std::size_t>()) {
        leaf = i;
      }
    }
    if (!leaf) {
      throw Error(Errc::UnknownElement,
                  fmt::format("element {} belongs to no set", element));
    }
    for (auto id = static_cast<long long>(*leaf); id >= 0;
         id = nodes[static_cast<std::size_t>(id)].at("parent").get<long long>()) {
      out << describe(nodes[static_cast<std::size_t>(id)]) << '\n';
    }
    return out.str();
  }
  throw Error(Errc::InvalidArgument,
              fmt::format("unknown inspect query '{}'", fmt::join(query, " ")));
}

}  // namespace pretopomd
