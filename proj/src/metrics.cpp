#include "pretopomd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Non-outlier elements grouped by label, in ascending label order.
std::vector<std::vector<std::size_t>> group_labels(
    std::span<const std::ptrdiff_t> labels) {
  std::map<std::ptrdiff_t, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) by_label[labels[i]].push_back(i);
  }
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [label, members] : by_label) groups.push_back(std::move(members));
  if (groups.size() < 2) {
    throw Error(Errc::UndefinedIndex,
                fmt::format("{} cluster(s); at least 2 are required",
                            groups.size()));
  }
  return groups;
}

void check_length(std::size_t labels, std::size_t rows) {
  if (labels != rows) {
    throw Error(Errc::LengthMismatch,
                fmt::format("{} labels for {} elements", labels, rows));
  }
}

std::vector<double> centroid(const Embedding& emb,
                             const std::vector<std::size_t>& members) {
  std::vector<double> c(emb.dims(), 0.0);
  for (const auto i : members) {
    for (std::size_t k = 0; k < emb.dims(); ++k) c[k] += emb(i, k);
  }
  for (auto& v : c) v /= static_cast<double>(members.size());
  return c;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

}  // namespace

Embedding::Embedding(std::size_t rows, std::size_t dims,
                     std::vector<double> values)
    : rows_(rows), dims_(dims), values_(std::move(values)) {
  if (values_.size() != rows * dims || dims == 0) {
    throw Error(Errc::InvalidArgument, "embedding shape mismatch");
  }
  for (const auto v : values_) {
    if (!std::isfinite(v)) {
      throw Error(Errc::NonFiniteValue, "embedding has a non-finite entry");
    }
  }
}

Embedding simple_embedding(const MixedDataTable& table) {
  const auto n = table.rows();
  if (n == 0) throw Error(Errc::EmptyTable, "cannot embed an empty table");

  std::vector<std::vector<double>> columns;
  const double scale = 1.0 / std::sqrt(2.0);
  for (std::size_t c = 0; c < table.cols(); ++c) {
    const auto& f = table.schema()[c];
    if (f.kind == FeatureKind::Categorical) {
      for (std::size_t l = 0; l < f.levels.size(); ++l) {
        std::vector<double> col(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          if (table.level(r, c) == l) col[r] = scale;
        }
        columns.push_back(std::move(col));
      }
      continue;
    }
    std::vector<double> col(n);
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      col[r] = table.value(r, c);
      mean += col[r];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto v : col) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (auto& v : col) v = sd > 0.0 ? (v - mean) / sd : 0.0;
    columns.push_back(std::move(col));
  }

  const auto p = columns.size();
  std::vector<double> values(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < p; ++k) values[r * p + k] = columns[k][r];
  }
  return Embedding(n, p, std::move(values));
}

double calinski_harabasz(const Embedding& emb,
                         std::span<const std::ptrdiff_t> labels) {
  check_length(labels.size(), emb.rows());
  const auto groups = group_labels(labels);

  std::vector<std::size_t> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  const auto overall = centroid(emb, all);

  double between = 0.0;
  double within = 0.0;
  for (const auto& g : groups) {
    const auto c = centroid(emb, g);
    between += static_cast<double>(g.size()) * squared_distance(c, overall);
    for (const auto i : g) within += squared_distance(emb.row(i), c);
  }
  if (within == 0.0) return kInf;
  const double k = static_cast<double>(groups.size());
  const double n = static_cast<double>(all.size());
  return (between / (k - 1.0)) / (within / (n - k));
}

double silhouette(const DistanceMatrix& dm,
                  std::span<const std::ptrdiff_t> labels) {
  check_length(labels.size(), dm.size());
  const auto groups = group_labels(labels);

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto i : groups[g]) {
      ++count;
      if (groups[g].size() == 1) continue;  // s(i) = 0
      double a = 0.0;
      for (const auto j : groups[g]) a += dm(i, j);
      a /= static_cast<double>(groups[g].size() - 1);
      double b = kInf;
      for (std::size_t h = 0; h < groups.size(); ++h) {
        if (h == g) continue;
        double sum = 0.0;
        for (const auto j : groups[h]) sum += dm(i, j);
        b = std::min(b, sum / static_cast<double>(groups[h].size()));
      }
      const double denom = std::max(a, b);
      if (denom > 0.0) total += (b - a) / denom;
    }
  }
  return total / static_cast<double>(count);
}

double davies_bouldin(const Embedding& emb,
                      std::span<const std::ptrdiff_t> labels) {
  check_length(labels.size(), emb.rows());
  const auto groups = group_labels(labels);
  const auto k = groups.size();

  std::vector<std::vector<double>> centers;
  std::vector<double> scatter;
  for (const auto& g : groups) {
    centers.push_back(centroid(emb, g));
    double s = 0.0;
    for (const auto i : g) s += std::sqrt(squared_distance(emb.row(i), centers.back()));
    scatter.push_back(s / static_cast<double>(g.size()));
  }

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double m = std::sqrt(squared_distance(centers[i], centers[j]));
      const double r = m > 0.0 ? (scatter[i] + scatter[j]) / m : kInf;
      worst = std::max(worst, r);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

MetricReport evaluate_clustering(const MixedDataTable& table,
                                 std::span<const std::ptrdiff_t> labels) {
  check_length(labels.size(), table.rows());
  MetricReport report;
  std::vector<std::ptrdiff_t> distinct;
  for (const auto l : labels) {
    if (l < 0) {
      ++report.n_outliers;
    } else if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) {
      distinct.push_back(l);
    }
  }
  report.n_clusters = distinct.size();
  if (report.n_clusters < 2) return report;

  const auto emb = simple_embedding(table);
  report.calinski_harabasz = calinski_harabasz(emb, labels);
  report.davies_bouldin = davies_bouldin(emb, labels);
  report.silhouette = silhouette(gower_distances(table), labels);
  return report;
}

}  // namespace pretopomd
