#include "pretopomd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

namespace {

using boost::property_tree::ptree;

const std::set<std::string> kTopKeys{"data", "schema", "max_levels", "dnf",
                                     "th_qh", "tie_break"};
const std::set<std::string> kPrenetworkKeys{"features", "metric", "weights",
                                            "manual_threshold"};
const std::set<std::string> kThresholdKeys{"threshold_power", "closest_coeff",
                                           "square_lgth_coeff", "area_method",
                                           "manual_threshold"};
const std::set<std::string> kSeedKeys{"seed_size", "seed_strategy", "rng_seed",
                                      "walk_sampling", "seed_distance"};
const std::set<std::string> kGeneratorKeys{"n_samples", "k", "n_numeric",
                                           "n_categorical", "n_levels", "std",
                                           "rng_seed"};

std::string path_of(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

std::string unquote(std::string text) {
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return text.substr(1, text.size() - 2);
  }
  return text;
}

ptree read_tree(std::istream& in) {
  ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}", e.line()), e.message());
  }
  return tree;
}

/// Value lookup within one section, with errors carrying the key path.
class Section {
public:
  Section(const ptree* node, std::string name)
      : node_(node), name_(std::move(name)) {}

  void reject_unknown(const std::set<std::string>& allowed,
                      bool allow_subsections = false) const {
    if (node_ == nullptr) return;
    for (const auto& [key, child] : *node_) {
      if (allow_subsections && !child.empty()) continue;
      if (!allowed.contains(key)) {
        throw ConfigError(path_of(name_, key), "unknown key");
      }
    }
  }

  [[nodiscard]] std::optional<std::string> text(const std::string& key) const {
    if (node_ == nullptr) return std::nullopt;
    const auto it = node_->find(key);
    if (it == node_->not_found() || !it->second.empty()) return std::nullopt;
    return unquote(it->second.data());
  }

  [[nodiscard]] std::string required_text(const std::string& key) const {
    auto value = text(key);
    if (!value) throw ConfigError(path_of(name_, key), "missing key");
    return *value;
  }

  [[nodiscard]] std::optional<double> real(const std::string& key) const {
    const auto value = text(key);
    if (!value) return std::nullopt;
    double out = 0.0;
    const auto* end = value->data() + value->size();
    auto [ptr, ec] = std::from_chars(value->data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
      throw ConfigError(path_of(name_, key),
                        fmt::format("'{}' is not a real number", *value));
    }
    return out;
  }

  [[nodiscard]] std::optional<std::uint64_t> count(const std::string& key) const {
    const auto value = text(key);
    if (!value) return std::nullopt;
    std::uint64_t out = 0;
    const auto* end = value->data() + value->size();
    auto [ptr, ec] = std::from_chars(value->data(), end, out);
    if (ec != std::errc{} || ptr != end) {
      throw ConfigError(path_of(name_, key),
                        fmt::format("'{}' is not a non-negative integer", *value));
    }
    return out;
  }

  template <typename T, typename ParseFn>
  [[nodiscard]] std::optional<T> choice(const std::string& key,
                                        ParseFn&& parse) const {
    const auto value = text(key);
    if (!value) return std::nullopt;
    const auto parsed = parse(*value);
    if (!parsed) {
      throw ConfigError(path_of(name_, key),
                        fmt::format("unrecognised value '{}'", *value));
    }
    return *parsed;
  }

  [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
  const ptree* node_;
  std::string name_;
};

Section section(const ptree& tree, const std::string& name) {
  const auto it = tree.find(name);
  if (it == tree.not_found()) return {nullptr, name};
  return {&it->second, name};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    auto item = text.substr(start, end - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) items.push_back(item.substr(first, last - first + 1));
    start = end + 1;
  }
  return items;
}

}  // namespace

RunConfig parse_run_config(std::istream& in,
                           const std::filesystem::path& base_dir) {
  const auto tree = read_tree(in);
  RunConfig config;

  const Section top(&tree, "");
  top.reject_unknown(kTopKeys, true);
  for (const auto& [key, child] : tree) {
    if (child.empty()) continue;
    if (key != "thresholds" && key != "seeds" && key != "generator" &&
        key.rfind("prenetwork.", 0) != 0) {
      throw ConfigError(key, "unknown section");
    }
  }

  config.data = base_dir / top.required_text("data");
  if (const auto schema = top.text("schema")) config.schema = base_dir / *schema;
  if (const auto v = top.count("max_levels")) config.max_levels = *v;
  config.dnf = top.required_text("dnf");
  if (const auto v = top.real("th_qh")) {
    if (!(*v > 0.0)) throw ConfigError("th_qh", "must be positive");
    config.hierarchy.th_qh = *v;
  }
  if (const auto v = top.choice<TieBreak>("tie_break", parse_tie_break)) {
    config.hierarchy.tie_break = *v;
  }

  for (const auto& [key, child] : tree) {
    if (key.rfind("prenetwork.", 0) != 0) continue;
    const Section s(&child, key);
    s.reject_unknown(kPrenetworkKeys);
    PrenetworkDecl decl;
    decl.name = key.substr(std::string("prenetwork.").size());
    if (decl.name.empty()) throw ConfigError(key, "prenetwork needs a name");
    decl.features = split_list(s.required_text("features"));
    if (decl.features.empty()) {
      throw ConfigError(path_of(key, "features"), "empty feature list");
    }
    decl.metric = s.choice<Metric>("metric", parse_metric);
    if (const auto w = s.choice<WeightScheme>("weights", parse_weight_scheme)) {
      decl.scheme = *w;
    }
    decl.manual_threshold = s.real("manual_threshold");
    if (decl.manual_threshold && !(*decl.manual_threshold > 0.0)) {
      throw ConfigError(path_of(key, "manual_threshold"), "must be positive");
    }
    config.prenetworks.push_back(std::move(decl));
  }

  const auto th = section(tree, "thresholds");
  th.reject_unknown(kThresholdKeys);
  if (const auto v = th.real("threshold_power")) config.thresholds.threshold_power = *v;
  if (const auto v = th.real("closest_coeff")) config.thresholds.closest_coeff = *v;
  if (const auto v = th.real("square_lgth_coeff")) config.thresholds.square_lgth_coeff = *v;
  if (const auto v = th.choice<AreaMethod>("area_method", parse_area_method)) {
    config.thresholds.area_method = *v;
  }
  config.thresholds.manual_threshold = th.real("manual_threshold");
  try {
    config.thresholds.validate();
  } catch (const Error& e) {
    throw ConfigError("thresholds", e.what());
  }

  const auto seeds = section(tree, "seeds");
  seeds.reject_unknown(kSeedKeys);
  if (const auto v = seeds.count("seed_size")) {
    if (*v == 0) throw ConfigError("seeds.seed_size", "must be at least 1");
    config.seeds.d = *v;
  }
  if (const auto v = seeds.choice<SeedStrategy>("seed_strategy", parse_seed_strategy)) {
    config.seeds.strategy = *v;
  }
  if (const auto v = seeds.count("rng_seed")) {
    config.seeds.rng_seed = *v;
    config.hierarchy.rng_seed = *v;
  }
  if (const auto v = seeds.choice<WalkSampling>("walk_sampling", parse_walk_sampling)) {
    config.seeds.sampling = *v;
  }
  if (const auto v = seeds.text("seed_distance")) config.seed_distance = *v;
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, fmt::format("cannot open '{}'", path.string()));
  }
  return parse_run_config(in, path.parent_path());
}

GeneratorConfig parse_generator_config(std::istream& in) {
  const auto tree = read_tree(in);
  const auto s = section(tree, "generator");
  s.reject_unknown(kGeneratorKeys);

  const auto required = [&](const std::string& key) {
    const auto v = s.count(key);
    if (!v) throw ConfigError(path_of("generator", key), "missing key");
    return static_cast<std::size_t>(*v);
  };
  GeneratorConfig config;
  config.n_samples = required("n_samples");
  config.k = required("k");
  config.n_numeric = required("n_numeric");
  config.n_categorical = required("n_categorical");
  if (const auto v = s.count("n_levels")) config.n_levels = *v;
  const auto sd = s.real("std");
  if (!sd) throw ConfigError("generator.std", "missing key");
  config.std = *sd;
  if (const auto v = s.count("rng_seed")) config.rng_seed = *v;
  try {
    config.validate();
  } catch (const Error& e) {
    throw ConfigError("generator", e.what());
  }
  return config;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, fmt::format("cannot open '{}'", path.string()));
  }
  return parse_generator_config(in);
}

}  // namespace pretopomd
