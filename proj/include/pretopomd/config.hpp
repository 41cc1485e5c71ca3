#pragma once

// INI-style run configuration.
//
//   data = data.csv                 # paths relative to the config file
//   schema = schema.txt             # optional; inferred when absent
//   dnf = "Num OR Cat"
//   th_qh = 0.5
//
//   [prenetwork.Num]
//   features = @numeric             # or a comma list; @categorical, @all
//   metric = euclidean              # default follows the group kind
//   weights = radius_binary         # or similarity
//
//   [thresholds]
//   threshold_power = 1
//   closest_coeff = 1
//   square_lgth_coeff = 1
//   area_method = max_distance_square
//
//   [seeds]
//   seed_size = 3
//   seed_strategy = nearest_neighbors
//   rng_seed = 0
//
//   [generator]
//   n_samples = 500
//   k = 3
//   ...

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pretopomd/datagen.hpp"
#include "pretopomd/distances.hpp"
#include "pretopomd/hierarchy.hpp"
#include "pretopomd/pretopo_space.hpp"
#include "pretopomd/seeding.hpp"

namespace pretopomd {

struct PrenetworkDecl {
  std::string name;
  /// Feature names or one of the selectors @numeric, @categorical, @all.
  std::vector<std::string> features;
  std::optional<Metric> metric;
  WeightScheme scheme = WeightScheme::RadiusBinary;
  std::optional<double> manual_threshold;
};

struct RunConfig {
  std::filesystem::path data;
  std::optional<std::filesystem::path> schema;
  std::size_t max_levels = 100;

  /// Empty means "Num" over the numeric and "Cat" over the categorical and
  /// ordinal features, whichever exist.
  std::vector<PrenetworkDecl> prenetworks;
  ThresholdConfig thresholds;
  std::string dnf;
  SeedConfig seeds;
  /// Distance for nearest-neighbour seeding: "gower" over the features the
  /// prenetworks use, or the name of a prenetwork whose distances to reuse.
  std::string seed_distance = "gower";
  QuasiHierarchyOptions hierarchy;
};

/// Parses a run configuration; relative paths resolve against `base_dir`.
/// Throws ConfigError naming the offending key.
RunConfig parse_run_config(std::istream& in,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Reads the [generator] section. Throws ConfigError("generator.<key>").
GeneratorConfig parse_generator_config(std::istream& in);
GeneratorConfig load_generator_config(const std::filesystem::path& path);

}  // namespace pretopomd
