#pragma once

// Internal validity indices. Labels are per-element cluster ids; any negative
// label marks an outlier, which is left out of every index.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pretopomd/data_model.hpp"
#include "pretopomd/distances.hpp"

namespace pretopomd {

/// Dense n x p numeric representation of a table.
class Embedding {
public:
  Embedding(std::size_t rows, std::size_t dims, std::vector<double> values);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t k) const {
    return values_[i * dims_ + k];
  }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dims_, dims_};
  }

private:
  std::size_t rows_;
  std::size_t dims_;
  std::vector<double> values_;
};

/// Numeric columns z-scored (population sd, constant columns become 0),
/// ordinal columns rank-coded then z-scored, categorical columns one-hot
/// with indicators of 1/sqrt(2) so one mismatch costs a unit squared
/// distance.
Embedding simple_embedding(const MixedDataTable& table);

/// (BCSS / (k - 1)) / (WCSS / (n - k)); +infinity when WCSS is 0.
/// Throws Error(UndefinedIndex) with fewer than two clusters.
double calinski_harabasz(const Embedding& emb,
                         std::span<const std::ptrdiff_t> labels);

/// Mean silhouette over clustered elements; members of singleton clusters
/// score 0. Throws Error(UndefinedIndex) with fewer than two clusters.
double silhouette(const DistanceMatrix& dm,
                  std::span<const std::ptrdiff_t> labels);

/// Mean over clusters of max_j (S_i + S_j) / M_ij with S the mean distance
/// to the centroid and M the centroid distance; coincident centroids give
/// +infinity. Throws Error(UndefinedIndex) with fewer than two clusters.
double davies_bouldin(const Embedding& emb,
                      std::span<const std::ptrdiff_t> labels);

struct MetricReport {
  std::optional<double> calinski_harabasz;
  std::optional<double> silhouette;
  std::optional<double> davies_bouldin;
  std::size_t n_clusters = 0;
  std::size_t n_outliers = 0;
};

/// Calinski-Harabasz and Davies-Bouldin on simple_embedding, silhouette on
/// Gower distances. Undefined indices stay empty. Throws
/// Error(LengthMismatch) when labels and rows disagree.
MetricReport evaluate_clustering(const MixedDataTable& table,
                                 std::span<const std::ptrdiff_t> labels);

}  // namespace pretopomd
