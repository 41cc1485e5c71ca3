#include "pretopomd/datagen.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

void GeneratorConfig::validate() const {
  if (dims() == 0) {
    throw Error(Errc::InvalidArgument, "generator needs at least one feature");
  }
  if (k == 0 || k > n_samples) {
    throw Error(Errc::InvalidArgument,
                fmt::format("k = {} must lie in [1, n_samples = {}]", k,
                            n_samples));
  }
  if (n_categorical > 0 && n_levels < 2) {
    throw Error(Errc::InvalidArgument, "n_levels must be at least 2");
  }
  if (!(std >= 0.0) || !std::isfinite(std)) {
    throw Error(Errc::InvalidArgument, "std must be finite and non-negative");
  }
}

PointList generate_centers(std::size_t k, std::size_t dims,
                           std::mt19937_64& rng) {
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  PointList centers(k, std::vector<double>(dims));
  for (auto& c : centers) {
    for (auto& v : c) v = normal(rng);
  }
  if (k < 2) return centers;

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dims; ++d) {
        const double diff = centers[i][d] - centers[j][d];
        sq += diff * diff;
      }
      total += std::sqrt(sq);
    }
  }
  const double mean = total / static_cast<double>(k * (k - 1) / 2);
  for (auto& c : centers) {
    for (auto& v : c) v /= mean;
  }
  return centers;
}

MixtureSample sample_mixture(const GeneratorConfig& config,
                             const PointList& centers, std::mt19937_64& rng) {
  if (centers.size() != config.k) {
    throw Error(Errc::InvalidArgument, "center count differs from k");
  }
  boost::random::uniform_int_distribution<std::size_t> component(0, config.k - 1);
  boost::random::normal_distribution<double> noise(0.0, 1.0);
  MixtureSample out;
  out.points.reserve(config.n_samples);
  out.labels.reserve(config.n_samples);
  for (std::size_t s = 0; s < config.n_samples; ++s) {
    const auto c = component(rng);
    const auto& mu = centers[c];
    std::vector<double> point(mu.size());
    for (std::size_t d = 0; d < mu.size(); ++d) {
      point[d] = mu[d] + config.std * noise(rng);
    }
    out.points.push_back(std::move(point));
    out.labels.push_back(c);
  }
  return out;
}

std::vector<std::size_t> quantile_categorize(std::span<const double> column,
                                             std::size_t n_levels) {
  if (n_levels < 2) {
    throw Error(Errc::InvalidArgument, "n_levels must be at least 2");
  }
  if (column.empty()) {
    throw Error(Errc::InvalidArgument, "cannot categorise an empty column");
  }
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();

  std::vector<double> cuts;
  for (std::size_t j = 1; j < n_levels; ++j) {
    // ceil(j * n / L) in integer arithmetic.
    const auto pos = std::min((j * n + n_levels - 1) / n_levels, n - 1);
    if (sorted[pos] > sorted.front()) cuts.push_back(sorted[pos]);
  }

  std::vector<std::size_t> levels(n);
  for (std::size_t i = 0; i < n; ++i) {
    levels[i] = static_cast<std::size_t>(
        std::upper_bound(cuts.begin(), cuts.end(), column[i]) - cuts.begin());
  }
  return levels;
}

std::vector<std::string> quantile_level_names(std::size_t n_levels) {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < n_levels; ++l) names.push_back(fmt::format("q{}", l));
  return names;
}

LabeledDataset generate(const GeneratorConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);
  auto centers = generate_centers(config.k, config.dims(), rng);
  auto sample = sample_mixture(config, centers, rng);

  const auto n = config.n_samples;
  const auto dims = config.dims();
  std::vector<Feature> features;
  for (std::size_t d = 0; d < config.n_numeric; ++d) {
    features.push_back({fmt::format("num{}", d), FeatureKind::Numeric, {}});
  }
  for (std::size_t d = 0; d < config.n_categorical; ++d) {
    features.push_back({fmt::format("cat{}", d), FeatureKind::Categorical,
                        quantile_level_names(config.n_levels)});
  }

  std::vector<double> cells(n * dims);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < config.n_numeric; ++d) {
      cells[i * dims + d] = sample.points[i][d];
    }
  }
  std::vector<double> column(n);
  for (std::size_t d = config.n_numeric; d < dims; ++d) {
    for (std::size_t i = 0; i < n; ++i) column[i] = sample.points[i][d];
    const auto levels = quantile_categorize(column, config.n_levels);
    for (std::size_t i = 0; i < n; ++i) {
      cells[i * dims + d] = static_cast<double>(levels[i]);
    }
  }

  return {MixedDataTable(Schema(std::move(features)), std::move(cells)),
          std::move(sample.labels), std::move(centers)};
}

}  // namespace pretopomd
