#include "pretopomd/distances.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "pretopomd/error.hpp"
#include "pretopomd/parallel.hpp"

namespace pretopomd {

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::Euclidean: return "euclidean";
    case Metric::AbsoluteDifference: return "absolute_difference";
    case Metric::Hamming: return "hamming";
    case Metric::Gower: return "gower";
  }
  return "euclidean";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
  if (text == "euclidean") return Metric::Euclidean;
  if (text == "absolute_difference" || text == "absolute") {
    return Metric::AbsoluteDifference;
  }
  if (text == "hamming") return Metric::Hamming;
  if (text == "gower") return Metric::Gower;
  return std::nullopt;
}

Metric default_metric(GroupKind kind) noexcept {
  switch (kind) {
    case GroupKind::Numeric: return Metric::Euclidean;
    case GroupKind::Categorical: return Metric::Hamming;
    case GroupKind::Mixed: return Metric::Gower;
  }
  return Metric::Gower;
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n * n) {
    throw Error(Errc::InvalidArgument, "distance buffer is not n*n");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0.0) {
      throw Error(Errc::InvalidArgument, "non-zero diagonal");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (*this)(i, j);
      if (!std::isfinite(d) || d < 0.0 || d != (*this)(j, i)) {
        throw Error(Errc::InvalidArgument,
                    fmt::format("invalid distance at ({}, {})", i, j));
      }
    }
  }
}

double DistanceMatrix::max_off_diagonal() const noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) best = std::max(best, (*this)(i, j));
  }
  return best;
}

namespace {

/// row(i, out) writes out[j] for every j > i.
template <typename RowFn>
DistanceMatrix fill(std::size_t n, RowFn&& row_kernel) {
  std::vector<double> values(n * n, 0.0);
  std::atomic<bool> finite{true};
  // Upper triangle row by row, then a blocked mirror; writing both halves in
  // the pair loop strides through memory.
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    bool ok = true;
    for (std::size_t i = begin; i < end; ++i) {
      double* row = values.data() + i * n;
      row_kernel(i, row);
      for (std::size_t j = i + 1; j < n; ++j) ok = ok && std::isfinite(row[j]);
    }
    if (!ok) finite = false;
  });
  if (!finite) {
    throw Error(Errc::NonFiniteValue, "distance overflowed to a non-finite value");
  }
  constexpr std::size_t kBlock = 64;
  for (std::size_t ib = 0; ib < n; ib += kBlock) {
    for (std::size_t jb = ib; jb < n; jb += kBlock) {
      const auto i_end = std::min(ib + kBlock, n);
      const auto j_end = std::min(jb + kBlock, n);
      for (std::size_t i = ib; i < i_end; ++i) {
        for (std::size_t j = std::max(jb, i + 1); j < j_end; ++j) {
          values[j * n + i] = values[i * n + j];
        }
      }
    }
  }
  return DistanceMatrix::trusted(n, std::move(values));
}

/// Column-major copy of the chosen columns. Kernels hold row i fixed and
/// sweep j along a column, which keeps every pair's summation order while
/// letting the j loop vectorise.
struct Columns {
  std::size_t n = 0;
  std::size_t width = 0;
  std::vector<double> cells;

  [[nodiscard]] const double* col(std::size_t k) const { return cells.data() + k * n; }
};

Columns pack(const MixedDataTable& table, std::span<const std::size_t> cols) {
  const auto n = table.rows();
  Columns out{n, cols.size(), std::vector<double>(n * cols.size())};
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) out.cells[k * n + r] = table.value(r, cols[k]);
  }
  return out;
}

}  // namespace

DistanceMatrix gower_distances(const FeatureGroup& group) {
  const auto& table = group.table();
  const auto n = table.rows();
  if (n == 0) throw Error(Errc::EmptyTable, "gower distance of empty table");

  // Numeric and ordinal columns are range-normalised, categorical ones
  // contribute a 0/1 mismatch. Constant columns contribute nothing.
  std::vector<std::size_t> scaled_cols;
  std::vector<double> range;
  std::vector<std::size_t> categorical_cols;
  for (const auto c : group.columns()) {
    if (table.schema()[c].kind == FeatureKind::Categorical) {
      categorical_cols.push_back(c);
      continue;
    }
    double lo = table.value(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < n; ++r) {
      lo = std::min(lo, table.value(r, c));
      hi = std::max(hi, table.value(r, c));
    }
    if (hi > lo) {
      scaled_cols.push_back(c);
      range.push_back(hi - lo);
    }
  }
  const auto scaled = pack(table, scaled_cols);
  const auto categorical = pack(table, categorical_cols);

  const double width = static_cast<double>(group.width());
  return fill(n, [&](std::size_t i, double* row) {
    thread_local std::vector<double> mismatches;
    mismatches.assign(n, 0.0);
    for (std::size_t j = i + 1; j < n; ++j) row[j] = 0.0;
    for (std::size_t k = 0; k < scaled.width; ++k) {
      const auto* c = scaled.col(k);
      const double a = c[i];
      const double r = range[k];
      for (std::size_t j = i + 1; j < n; ++j) row[j] += std::abs(a - c[j]) / r;
    }
    for (std::size_t k = 0; k < categorical.width; ++k) {
      const auto* c = categorical.col(k);
      const double a = c[i];
      for (std::size_t j = i + 1; j < n; ++j) mismatches[j] += a != c[j] ? 1.0 : 0.0;
    }
    for (std::size_t j = i + 1; j < n; ++j) row[j] = (row[j] + mismatches[j]) / width;
  });
}

DistanceMatrix gower_distances(const MixedDataTable& table) {
  if (table.rows() == 0) {
    throw Error(Errc::EmptyTable, "gower distance of empty table");
  }
  return gower_distances(whole_table(table));
}

DistanceMatrix pairwise_distances(const FeatureGroup& group, DistanceSpec spec) {
  const auto& table = group.table();
  const auto cols = group.columns();
  const auto n = group.rows();

  switch (spec.metric) {
    case Metric::Euclidean:
    case Metric::AbsoluteDifference:
      if (group.kind() != GroupKind::Numeric) {
        throw Error(Errc::IncompatibleMetric,
                    fmt::format("{} needs an all-numeric group",
                                to_string(spec.metric)));
      }
      break;
    case Metric::Hamming:
      if (group.kind() != GroupKind::Categorical) {
        throw Error(Errc::IncompatibleMetric,
                    "hamming needs an all-categorical group");
      }
      break;
    case Metric::Gower:
      return gower_distances(group);
  }

  const auto packed = pack(table, cols);
  const auto w = packed.width;
  if (spec.metric == Metric::Euclidean) {
    return fill(n, [&](std::size_t i, double* row) {
      for (std::size_t j = i + 1; j < n; ++j) row[j] = 0.0;
      for (std::size_t k = 0; k < w; ++k) {
        const auto* c = packed.col(k);
        const double a = c[i];
        for (std::size_t j = i + 1; j < n; ++j) row[j] += (a - c[j]) * (a - c[j]);
      }
      for (std::size_t j = i + 1; j < n; ++j) row[j] = std::sqrt(row[j]);
    });
  }
  if (spec.metric == Metric::AbsoluteDifference) {
    return fill(n, [&](std::size_t i, double* row) {
      for (std::size_t j = i + 1; j < n; ++j) row[j] = 0.0;
      for (std::size_t k = 0; k < w; ++k) {
        const auto* c = packed.col(k);
        const double a = c[i];
        for (std::size_t j = i + 1; j < n; ++j) row[j] += std::abs(a - c[j]);
      }
    });
  }
  const double width = static_cast<double>(w);
  return fill(n, [&](std::size_t i, double* row) {
    for (std::size_t j = i + 1; j < n; ++j) row[j] = 0.0;
    for (std::size_t k = 0; k < w; ++k) {
      const auto* c = packed.col(k);
      const double a = c[i];
      for (std::size_t j = i + 1; j < n; ++j) row[j] += a != c[j] ? 1.0 : 0.0;
    }
    for (std::size_t j = i + 1; j < n; ++j) row[j] /= width;
  });
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& dm) {
  for (std::size_t i = 0; i < dm.size(); ++i) {
    for (std::size_t j = 0; j < dm.size(); ++j) {
      if (j) out << ',';
      out << fmt::format("{:.17g}", dm(i, j));
    }
    out << '\n';
  }
}

}  // namespace pretopomd
