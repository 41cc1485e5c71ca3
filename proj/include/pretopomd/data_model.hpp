#pragma once

// Mixed-type tabular data: the element universe every other module works on.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pretopomd {

enum class FeatureKind { Numeric, Categorical, Ordinal };

std::string_view to_string(FeatureKind kind) noexcept;
std::optional<FeatureKind> parse_feature_kind(std::string_view text) noexcept;

/// One column of the table. `levels` is empty for numeric features; for
/// ordinal features its order defines the ranks 0..L-1.
struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> levels;

  [[nodiscard]] bool is_numeric() const noexcept {
    return kind == FeatureKind::Numeric;
  }
  [[nodiscard]] std::optional<std::size_t> level_index(
      std::string_view level) const;

  friend bool operator==(const Feature&, const Feature&) = default;
};

class Schema {
public:
  /// Throws Error(InvalidSchema) on empty, duplicate or unnamed features, or
  /// on a categorical/ordinal feature without levels.
  explicit Schema(std::vector<Feature> features);

  [[nodiscard]] std::span<const Feature> features() const noexcept {
    return features_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return features_.size(); }
  [[nodiscard]] const Feature& operator[](std::size_t i) const {
    return features_[i];
  }
  [[nodiscard]] std::optional<std::size_t> index_of(
      std::string_view name) const;

  friend bool operator==(const Schema&, const Schema&) = default;

private:
  std::vector<Feature> features_;
};

/// Reads the `name:kind[:level1|level2|...]` schema format, one feature per
/// line. Blank lines and lines starting with '#' are skipped.
Schema parse_schema(std::istream& in);
Schema load_schema(const std::filesystem::path& path);
void write_schema(std::ostream& out, const Schema& schema);

/// Immutable table of n elements. Cells are stored as doubles: the value
/// itself for numeric features, the level index (rank) otherwise. Element
/// identity is the row index.
class MixedDataTable {
public:
  MixedDataTable(Schema schema, std::vector<double> cells);

  [[nodiscard]] const Schema& schema() const noexcept { return schema_; }
  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return schema_.size(); }

  [[nodiscard]] double value(std::size_t row, std::size_t col) const {
    return cells_[row * cols() + col];
  }
  [[nodiscard]] std::size_t level(std::size_t row, std::size_t col) const {
    return static_cast<std::size_t>(value(row, col));
  }
  /// Text form of a cell, as it appears in CSV.
  [[nodiscard]] std::string cell_text(std::size_t row, std::size_t col) const;

  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {cells_.data() + r * cols(), cols()};
  }

  friend bool operator==(const MixedDataTable&,
                         const MixedDataTable&) = default;

private:
  Schema schema_;
  std::size_t rows_ = 0;
  std::vector<double> cells_;
};

/// Parses CSV text against a schema. The header must list the schema's
/// feature names in order.
MixedDataTable parse_csv(std::istream& in, const Schema& schema);
MixedDataTable load_csv(const std::filesystem::path& path,
                        const Schema& schema);
void write_csv(std::ostream& out, const MixedDataTable& table);

/// Numeric iff every non-empty cell parses as a finite real; otherwise
/// categorical with the sorted distinct values as levels.
Schema infer_schema(std::istream& in, std::size_t max_levels);
Schema infer_schema(const std::filesystem::path& path, std::size_t max_levels);

/// Splits one CSV record, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_record(std::string_view line);
/// Quotes a field when it contains a comma, quote or newline.
std::string quote_csv_field(std::string_view field);

enum class GroupKind { Numeric, Categorical, Mixed };

/// Column selection feeding one prenetwork.
class FeatureGroup {
public:
  FeatureGroup(const MixedDataTable& table, std::vector<std::size_t> columns,
               GroupKind kind)
      : table_(&table), columns_(std::move(columns)), kind_(kind) {}

  [[nodiscard]] const MixedDataTable& table() const noexcept {
    return *table_;
  }
  [[nodiscard]] std::span<const std::size_t> columns() const noexcept {
    return columns_;
  }
  [[nodiscard]] GroupKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t rows() const noexcept { return table_->rows(); }
  [[nodiscard]] std::size_t width() const noexcept { return columns_.size(); }

private:
  const MixedDataTable* table_;
  std::vector<std::size_t> columns_;
  GroupKind kind_;
};

/// Selects the named columns. Categorical and ordinal columns may share a
/// group; mixing them with numeric columns requires `allow_mixed`.
FeatureGroup feature_group(const MixedDataTable& table,
                           std::span<const std::string> names,
                           bool allow_mixed = false);

/// Every column of the table as one (possibly mixed) group.
FeatureGroup whole_table(const MixedDataTable& table);

}  // namespace pretopomd
