#pragma once

// Synthetic labelled mixed datasets: isotropic Gaussian blobs whose last
// columns are cut into categories at empirical quantiles.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pretopomd/data_model.hpp"

namespace pretopomd {

struct GeneratorConfig {
  std::size_t n_samples = 500;
  std::size_t k = 3;
  std::size_t n_numeric = 5;
  std::size_t n_categorical = 5;
  std::size_t n_levels = 3;
  double std = 0.1;
  std::uint64_t rng_seed = 0;

  [[nodiscard]] std::size_t dims() const noexcept {
    return n_numeric + n_categorical;
  }
  /// Throws Error(InvalidArgument) on an inconsistent configuration.
  void validate() const;
};

using PointList = std::vector<std::vector<double>>;

/// k standard-normal points rescaled so their mean pairwise Euclidean
/// distance is 1 (left as drawn when k = 1).
PointList generate_centers(std::size_t k, std::size_t dims,
                           std::mt19937_64& rng);

struct MixtureSample {
  PointList points;
  std::vector<std::size_t> labels;
};

/// Each point picks a component uniformly, then draws from
/// N(center, std^2 I).
MixtureSample sample_mixture(const GeneratorConfig& config,
                             const PointList& centers, std::mt19937_64& rng);

/// Level index per value: the number of cut points not above it, where the
/// cut points are the sorted values at 0-based positions ceil(j * n / L),
/// j = 1..L-1. Cut points equal to the column minimum are ignored, so a
/// constant column maps entirely to level 0.
std::vector<std::size_t> quantile_categorize(std::span<const double> column,
                                             std::size_t n_levels);

/// "q0" .. "q{L-1}".
std::vector<std::string> quantile_level_names(std::size_t n_levels);

struct LabeledDataset {
  MixedDataTable table;
  std::vector<std::size_t> ground_truth;
  PointList centers;
};

/// Centers, samples, then categorisation of the last n_categorical columns.
/// Numeric columns are named num0.., categorical ones cat0...
LabeledDataset generate(const GeneratorConfig& config);

}  // namespace pretopomd
