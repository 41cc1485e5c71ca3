#include "pretopomd/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

namespace {

std::optional<double> parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool read_record(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, fmt::format("cannot open '{}'", path.string()));
  }
  return in;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::Categorical: return "categorical";
    case FeatureKind::Ordinal: return "ordinal";
  }
  return "numeric";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view text) noexcept {
  if (text == "numeric") return FeatureKind::Numeric;
  if (text == "categorical") return FeatureKind::Categorical;
  if (text == "ordinal") return FeatureKind::Ordinal;
  return std::nullopt;
}

std::optional<std::size_t> Feature::level_index(std::string_view level) const {
  const auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

Schema::Schema(std::vector<Feature> features) : features_(std::move(features)) {
  if (features_.empty()) {
    throw Error(Errc::InvalidSchema, "schema has no features");
  }
  std::unordered_set<std::string> seen;
  for (const auto& f : features_) {
    if (f.name.empty()) {
      throw Error(Errc::InvalidSchema, "feature with empty name");
    }
    if (!seen.insert(f.name).second) {
      throw Error(Errc::InvalidSchema,
                  fmt::format("duplicate feature name '{}'", f.name));
    }
    if (!f.is_numeric()) {
      if (f.levels.empty()) {
        throw Error(Errc::InvalidSchema,
                    fmt::format("feature '{}' declares no levels", f.name));
      }
      std::set<std::string_view> distinct(f.levels.begin(), f.levels.end());
      if (distinct.size() != f.levels.size()) {
        throw Error(Errc::InvalidSchema,
                    fmt::format("feature '{}' repeats a level", f.name));
      }
    } else if (!f.levels.empty()) {
      throw Error(Errc::InvalidSchema,
                  fmt::format("numeric feature '{}' has levels", f.name));
    }
  }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

Schema parse_schema(std::istream& in) {
  std::vector<Feature> features;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;

    const auto c1 = text.find(':');
    if (c1 == std::string_view::npos) {
      throw Error(Errc::InvalidSchema,
                  fmt::format("schema line '{}' lacks a kind", text));
    }
    Feature f;
    f.name = std::string(trim(text.substr(0, c1)));
    auto rest = text.substr(c1 + 1);
    const auto c2 = rest.find(':');
    const auto kind_text = trim(rest.substr(0, c2));
    const auto kind = parse_feature_kind(kind_text);
    if (!kind) {
      throw Error(Errc::InvalidSchema,
                  fmt::format("unknown feature kind '{}'", kind_text));
    }
    f.kind = *kind;
    if (c2 != std::string_view::npos) {
      auto levels = rest.substr(c2 + 1);
      while (true) {
        const auto bar = levels.find('|');
        f.levels.emplace_back(levels.substr(0, bar));
        if (bar == std::string_view::npos) break;
        levels.remove_prefix(bar + 1);
      }
    }
    features.push_back(std::move(f));
  }
  return Schema(std::move(features));
}

Schema load_schema(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_schema(in);
}

void write_schema(std::ostream& out, const Schema& schema) {
  for (const auto& f : schema.features()) {
    out << f.name << ':' << to_string(f.kind);
    if (!f.is_numeric()) out << ':' << fmt::format("{}", fmt::join(f.levels, "|"));
    out << '\n';
  }
}

MixedDataTable::MixedDataTable(Schema schema, std::vector<double> cells)
    : schema_(std::move(schema)), cells_(std::move(cells)) {
  const auto p = schema_.size();
  if (cells_.size() % p != 0) {
    throw Error(Errc::InvalidArgument, "cell count is not a multiple of width");
  }
  rows_ = cells_.size() / p;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      const double v = cells_[r * p + c];
      if (!std::isfinite(v)) {
        throw CellError(Errc::NonFiniteValue, r, c, fmt::format("{}", v));
      }
      const auto& f = schema_[c];
      if (!f.is_numeric() &&
          (v < 0 || v != std::floor(v) ||
           static_cast<std::size_t>(v) >= f.levels.size())) {
        throw CellError(Errc::UnknownCategoryLevel, r, c,
                        fmt::format("{}", v));
      }
    }
  }
}

std::string MixedDataTable::cell_text(std::size_t row, std::size_t col) const {
  const auto& f = schema_[col];
  if (f.is_numeric()) return fmt::format("{}", value(row, col));
  return f.levels[level(row, col)];
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string quote_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

MixedDataTable parse_csv(std::istream& in, const Schema& schema) {
  std::string line;
  if (!read_record(in, line)) {
    throw Error(Errc::EmptyFile, "no header line");
  }
  const auto header = split_csv_record(line);
  const auto p = schema.size();
  for (std::size_t c = 0; c < p; ++c) {
    if (c >= header.size() || header[c] != schema[c].name) {
      throw Error(Errc::MissingColumn,
                  fmt::format("expected column '{}' at position {}",
                              schema[c].name, c));
    }
  }
  if (header.size() != p) {
    throw Error(Errc::MissingColumn,
                fmt::format("header has {} columns, schema has {}",
                            header.size(), p));
  }

  std::vector<double> cells;
  std::size_t row = 0;
  while (read_record(in, line)) {
    const auto fields = split_csv_record(line);
    if (fields.size() != p) {
      throw CellError(Errc::MissingColumn, row, std::min(fields.size(), p),
                      line);
    }
    for (std::size_t c = 0; c < p; ++c) {
      const auto& text = fields[c];
      if (text.empty()) throw CellError(Errc::MissingValue, row, c, text);
      const auto& f = schema[c];
      if (f.is_numeric()) {
        const auto v = parse_real(text);
        if (!v) throw CellError(Errc::UnparseableNumeric, row, c, text);
        cells.push_back(*v);
      } else {
        const auto idx = f.level_index(text);
        if (!idx) throw CellError(Errc::UnknownCategoryLevel, row, c, text);
        cells.push_back(static_cast<double>(*idx));
      }
    }
    ++row;
  }
  if (row == 0) throw Error(Errc::EmptyFile, "no data rows");
  return MixedDataTable(schema, std::move(cells));
}

MixedDataTable load_csv(const std::filesystem::path& path,
                        const Schema& schema) {
  auto in = open_input(path);
  return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const MixedDataTable& table) {
  const auto& schema = table.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out << ',';
    out << quote_csv_field(schema[c].name);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (c) out << ',';
      out << quote_csv_field(table.cell_text(r, c));
    }
    out << '\n';
  }
}

Schema infer_schema(std::istream& in, std::size_t max_levels) {
  std::string line;
  if (!read_record(in, line)) throw Error(Errc::EmptyFile, "no header line");
  const auto header = split_csv_record(line);
  const auto p = header.size();

  std::vector<bool> numeric(p, true);
  std::vector<std::set<std::string>> distinct(p);
  std::size_t rows = 0;
  while (read_record(in, line)) {
    const auto fields = split_csv_record(line);
    if (fields.size() != p) {
      throw CellError(Errc::MissingColumn, rows, std::min(fields.size(), p),
                      line);
    }
    for (std::size_t c = 0; c < p; ++c) {
      if (fields[c].empty()) continue;
      if (numeric[c] && !parse_real(fields[c])) numeric[c] = false;
      if (distinct[c].size() <= max_levels) distinct[c].insert(fields[c]);
    }
    ++rows;
  }
  if (rows == 0) throw Error(Errc::EmptyFile, "no data rows");

  std::vector<Feature> features;
  for (std::size_t c = 0; c < p; ++c) {
    Feature f{header[c], FeatureKind::Numeric, {}};
    if (!numeric[c]) {
      if (distinct[c].size() > max_levels) {
        throw Error(Errc::TooManyLevels,
                    fmt::format("column '{}' has more than {} levels",
                                header[c], max_levels));
      }
      f.kind = FeatureKind::Categorical;
      f.levels.assign(distinct[c].begin(), distinct[c].end());
    }
    features.push_back(std::move(f));
  }
  return Schema(std::move(features));
}

Schema infer_schema(const std::filesystem::path& path, std::size_t max_levels) {
  auto in = open_input(path);
  return infer_schema(in, max_levels);
}

FeatureGroup feature_group(const MixedDataTable& table,
                           std::span<const std::string> names,
                           bool allow_mixed) {
  if (names.empty()) {
    throw Error(Errc::InvalidArgument, "feature group needs at least one name");
  }
  const auto& schema = table.schema();
  std::vector<std::size_t> columns;
  bool any_numeric = false;
  bool any_symbolic = false;
  for (const auto& name : names) {
    const auto idx = schema.index_of(name);
    if (!idx) {
      throw Error(Errc::UnknownFeature, fmt::format("{}", name));
    }
    columns.push_back(*idx);
    (schema[*idx].is_numeric() ? any_numeric : any_symbolic) = true;
  }
  GroupKind kind = any_numeric ? GroupKind::Numeric : GroupKind::Categorical;
  if (any_numeric && any_symbolic) {
    if (!allow_mixed) {
      throw Error(Errc::IncompatibleKinds,
                  "group mixes numeric and categorical features");
    }
    kind = GroupKind::Mixed;
  }
  return FeatureGroup(table, std::move(columns), kind);
}

FeatureGroup whole_table(const MixedDataTable& table) {
  std::vector<std::string> names;
  for (const auto& f : table.schema().features()) names.push_back(f.name);
  return feature_group(table, names, true);
}

}  // namespace pretopomd
