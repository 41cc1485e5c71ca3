#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "pretopomd/data_model.hpp"

namespace pretopomd {

enum class Metric { Euclidean, AbsoluteDifference, Hamming, Gower };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view text) noexcept;

/// Euclidean for numeric groups, Hamming for categorical ones, Gower for
/// mixed ones.
Metric default_metric(GroupKind kind) noexcept;

struct DistanceSpec {
  Metric metric = Metric::Euclidean;
};

/// Dense symmetric n x n matrix with a zero diagonal.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}
  /// Takes a row-major n*n buffer; throws Error(InvalidArgument) unless it
  /// is symmetric, finite, non-negative with a zero diagonal.
  DistanceMatrix(std::size_t n, std::vector<double> values);
  /// Adopts a buffer already known to be valid, skipping the checks.
  static DistanceMatrix trusted(std::size_t n, std::vector<double> values) {
    DistanceMatrix dm;
    dm.n_ = n;
    dm.values_ = std::move(values);
    return dm;
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  void set(std::size_t i, std::size_t j, double d) {
    values_[i * n_ + j] = d;
    values_[j * n_ + i] = d;
  }
  [[nodiscard]] double max_off_diagonal() const noexcept;
  [[nodiscard]] const std::vector<double>& values() const noexcept {
    return values_;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Euclidean: root of summed squared differences. AbsoluteDifference: sum of
/// absolute differences. Hamming: fraction of mismatching columns. Gower: see
/// gower_distances. Throws Error(IncompatibleMetric) when the metric does
/// not fit the group kind.
DistanceMatrix pairwise_distances(const FeatureGroup& group, DistanceSpec spec);

/// Mean per-feature dissimilarity: |xi - xj| / range for numeric and ordinal
/// (rank) columns, 0 when the range is 0; 0/1 mismatch for categorical ones.
DistanceMatrix gower_distances(const FeatureGroup& group);
DistanceMatrix gower_distances(const MixedDataTable& table);

/// n lines of n comma-separated values, 17 significant digits.
void write_matrix_csv(std::ostream& out, const DistanceMatrix& dm);

}  // namespace pretopomd
