#pragma once

// Shared fixtures and brute-force oracles. Nothing here calls the code it is
// used to check beyond constructing inputs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pretopomd/data_model.hpp"
#include "pretopomd/distances.hpp"
#include "pretopomd/dnf_rule.hpp"
#include "pretopomd/element_set.hpp"
#include "pretopomd/pretopo_space.hpp"

namespace testsupport {

using namespace pretopomd;

inline MixedDataTable table_from_text(const std::string& schema_text,
                                      const std::string& csv_text) {
  std::istringstream schema_in(schema_text);
  std::istringstream csv_in(csv_text);
  return parse_csv(csv_in, parse_schema(schema_in));
}

/// Numeric table with columns x0, x1, ...
inline MixedDataTable numeric_table(const std::vector<std::vector<double>>& rows) {
  std::vector<Feature> features;
  for (std::size_t k = 0; k < rows.front().size(); ++k) {
    features.push_back({"x" + std::to_string(k), FeatureKind::Numeric, {}});
  }
  std::vector<double> cells;
  for (const auto& r : rows) cells.insert(cells.end(), r.begin(), r.end());
  return MixedDataTable(Schema(std::move(features)), std::move(cells));
}

/// |a - b| on a line.
inline DistanceMatrix line_distances(const std::vector<double>& xs) {
  DistanceMatrix dm(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) dm.set(i, j, std::abs(xs[i] - xs[j]));
  }
  return dm;
}

inline ElementSet from_mask(std::size_t n, std::uint64_t mask) {
  ElementSet s(n);
  for (std::size_t x = 0; x < n; ++x) {
    if ((mask >> x) & 1U) s.insert(x);
  }
  return s;
}

inline std::uint64_t to_mask(const ElementSet& s) {
  std::uint64_t mask = 0;
  s.for_each([&](std::size_t x) { mask |= std::uint64_t{1} << x; });
  return mask;
}

/// Positive rule over `names` with a random shape.
inline RuleExpression random_rule(std::mt19937_64& rng,
                                  const std::vector<std::string>& names,
                                  int depth) {
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::uniform_int_distribution<int> shape(0, 2);
  if (depth == 0 || shape(rng) == 0) return RuleExpression::var(names[pick(rng)]);
  std::uniform_int_distribution<int> arity(2, 3);
  std::vector<RuleExpression> children;
  const int count = arity(rng);
  for (int i = 0; i < count; ++i) children.push_back(random_rule(rng, names, depth - 1));
  return shape(rng) == 1 ? RuleExpression::all_of(std::move(children))
                         : RuleExpression::any_of(std::move(children));
}

struct RandomSpec {
  std::size_t n = 0;
  std::vector<std::vector<double>> weights;  // per prenetwork, row-major n*n
  std::vector<double> thresholds;
  std::vector<std::string> names;
  RuleExpression rule = RuleExpression::var("P0");
};

/// Random sparse non-negative weights, thresholds in (0, 1.5], random rule.
inline RandomSpec random_spec(std::mt19937_64& rng, std::size_t n,
                              std::size_t nets) {
  RandomSpec spec;
  spec.n = n;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution unit_weights(0.5);
  for (std::size_t p = 0; p < nets; ++p) {
    spec.names.push_back("P" + std::to_string(p));
    const double density = 0.05 + 0.3 * unit(rng);
    const bool binary = unit_weights(rng);
    std::vector<double> w(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y && unit(rng) < density) w[x * n + y] = binary ? 1.0 : unit(rng);
      }
    }
    spec.weights.push_back(std::move(w));
    spec.thresholds.push_back(0.05 + 1.45 * unit(rng));
  }
  spec.rule = random_rule(rng, spec.names, 2);
  return spec;
}

inline PretopologicalSpace make_space(const RandomSpec& spec) {
  std::vector<Prenetwork> nets;
  for (std::size_t p = 0; p < spec.names.size(); ++p) {
    nets.emplace_back(spec.names[p], spec.n, spec.weights[p]);
  }
  return PretopologicalSpace(spec.n, std::move(nets), spec.thresholds, spec.rule);
}

/// Pseudoclosure straight from the definition: x joins when the rule holds
/// over the threshold tests on summed weights into A.
inline ElementSet naive_pseudoclosure(const RandomSpec& spec, const ElementSet& a) {
  ElementSet out = a;
  if (a.empty()) return out;
  for (std::size_t x = 0; x < spec.n; ++x) {
    if (a.contains(x)) continue;
    TruthAssignment truth;
    for (std::size_t p = 0; p < spec.names.size(); ++p) {
      double sum = 0.0;
      for (std::size_t y = 0; y < spec.n; ++y) {
        if (y != x && a.contains(y)) sum += spec.weights[p][x * spec.n + y];
      }
      truth[spec.names[p]] = sum >= spec.thresholds[p];
    }
    if (evaluate(spec.rule, truth)) out.insert(x);
  }
  return out;
}

/// Smallest fixpoint superset of A by enumeration of all 2^n subsets.
inline ElementSet brute_force_closure(const RandomSpec& spec, const ElementSet& a) {
  const auto base = to_mask(a);
  std::uint64_t best = 0;
  int best_size = -1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << spec.n); ++mask) {
    if ((mask & base) != base) continue;
    const auto s = from_mask(spec.n, mask);
    if (naive_pseudoclosure(spec, s) != s) continue;
    const int size = std::popcount(mask);
    if (best_size < 0 || size < best_size) {
      best = mask;
      best_size = size;
    }
  }
  return from_mask(spec.n, best);
}

/// Adjusted Rand index from the contingency table.
inline double adjusted_rand_index(const std::vector<long>& a, const std::vector<long>& b) {
  std::map<std::pair<long, long>, double> cells;
  std::map<long, double> rows;
  std::map<long, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  const auto pairs = [](double c) { return c * (c - 1) / 2; };
  double index = 0;
  double sum_rows = 0;
  double sum_cols = 0;
  for (const auto& [k, c] : cells) index += pairs(c);
  for (const auto& [k, c] : rows) sum_rows += pairs(c);
  for (const auto& [k, c] : cols) sum_cols += pairs(c);
  const double total = pairs(static_cast<double>(a.size()));
  const double expected = sum_rows * sum_cols / total;
  const double max_index = (sum_rows + sum_cols) / 2;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

/// Points as rows; labels < 0 are ignored by the index oracles below.
using Points = std::vector<std::vector<double>>;

inline double sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

/// Calinski-Harabasz through the pairwise identity
/// sum_i |x_i - mean|^2 = (1 / 2m) sum_{i,j} |x_i - x_j|^2.
inline double oracle_calinski_harabasz(const Points& x, const std::vector<long>& labels) {
  std::map<long, std::vector<std::size_t>> groups;
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (labels[i] < 0) continue;
    groups[labels[i]].push_back(i);
    all.push_back(i);
  }
  const auto scatter = [&](const std::vector<std::size_t>& members) {
    double s = 0;
    for (const auto i : members) {
      for (const auto j : members) s += sq(x[i], x[j]);
    }
    return s / (2.0 * static_cast<double>(members.size()));
  };
  double within = 0;
  for (const auto& [l, members] : groups) within += scatter(members);
  const double between = scatter(all) - within;
  const double k = static_cast<double>(groups.size());
  const double n = static_cast<double>(all.size());
  return (between / (k - 1)) / (within / (n - k));
}

inline double oracle_silhouette(const std::vector<std::vector<double>>& d,
                                const std::vector<long>& labels) {
  std::map<long, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(i);
  }
  double total = 0;
  std::size_t count = 0;
  for (const auto& [li, mine] : groups) {
    for (const auto i : mine) {
      ++count;
      if (mine.size() == 1) continue;
      double a = 0;
      for (const auto j : mine) a += d[i][j];
      a /= static_cast<double>(mine.size() - 1);
      double b = INFINITY;
      for (const auto& [lj, other] : groups) {
        if (lj == li) continue;
        double m = 0;
        for (const auto j : other) m += d[i][j];
        b = std::min(b, m / static_cast<double>(other.size()));
      }
      total += (b - a) / std::max(a, b);
    }
  }
  return total / static_cast<double>(count);
}

inline double oracle_davies_bouldin(const Points& x, const std::vector<long>& labels) {
  std::map<long, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(i);
  }
  std::vector<std::vector<double>> centers;
  std::vector<double> spread;
  for (const auto& [l, members] : groups) {
    std::vector<double> c(x.front().size(), 0.0);
    for (const auto i : members) {
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += x[i][k];
    }
    for (auto& v : c) v /= static_cast<double>(members.size());
    double s = 0;
    for (const auto i : members) s += std::sqrt(sq(x[i], c));
    spread.push_back(s / static_cast<double>(members.size()));
    centers.push_back(std::move(c));
  }
  double total = 0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    double worst = 0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (i != j) {
        worst = std::max(worst, (spread[i] + spread[j]) / std::sqrt(sq(centers[i], centers[j])));
      }
    }
    total += worst;
  }
  return total / static_cast<double>(centers.size());
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pretopomd_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace testsupport
