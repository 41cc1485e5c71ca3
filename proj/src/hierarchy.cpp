#include "pretopomd/hierarchy.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_set>

#include <boost/random/bernoulli_distribution.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bits.hpp"

#include "pretopomd/error.hpp"
#include "pretopomd/parallel.hpp"

namespace pretopomd {

SetFamily iterative_pseudoclosure(const PretopologicalSpace& space,
                                  std::span<const ElementSet> seeds) {
  const auto n = space.size();
  // buckets[s] holds the sets of cardinality s, in discovery order.
  std::vector<std::vector<ElementSet>> buckets(n + 1);
  std::unordered_set<ElementSet, ElementSetHash> known;
  for (const auto& seed : seeds) {
    if (seed.universe() != n) {
      throw Error(Errc::InvalidArgument, "seed over a different universe");
    }
    if (known.insert(seed).second) buckets[seed.size()].push_back(seed);
  }

  SetFamily family;
  for (std::size_t s = 0; s <= n; ++s) {
    // The pseudoclosure never shrinks a set and only returns a set of the
    // same size when it is a fixpoint, so new sets land in later buckets and
    // this bucket is stable while we walk it.
    for (const auto& set : buckets[s]) {
      auto next = space.pseudoclosure(set);
      const bool fixpoint = next == set;
      if (!fixpoint && known.insert(next).second) {
        buckets[next.size()].push_back(std::move(next));
      }
      family.sets.push_back(set);
      family.closed.push_back(fixpoint);
    }
  }
  return family;
}

double attraction(std::size_t size_a, std::size_t size_b,
                  std::size_t intersection) noexcept {
  const double a = static_cast<double>(size_a);
  const double b = static_cast<double>(size_b);
  return (a / b) * (static_cast<double>(intersection) / b);
}

using detail::common_bits;

AttractionMatrix attraction_matrix(const SetFamily& family) {
  const auto m = family.size();
  std::vector<std::size_t> sizes(m);
  for (std::size_t i = 0; i < m; ++i) {
    sizes[i] = family.sets[i].size();
    if (sizes[i] == 0) {
      throw Error(Errc::EmptySetInFamily,
                  fmt::format("family set {} is empty", i));
    }
  }
  AttractionMatrix atr(m);
  if (m == 0) return atr;
  const auto n = family.sets.front().universe();
  for (const auto& set : family.sets) {
    if (set.universe() != n) {
      throw Error(Errc::InvalidArgument, "family sets over different universes");
    }
  }
  const auto store = [&](std::size_t i, std::size_t j, std::size_t inter) {
    atr.at(i, j) = attraction(sizes[i], sizes[j], inter);
    atr.at(j, i) = attraction(sizes[j], sizes[i], inter);
  };

  // Small sets overlap rarely; counting through an element -> sets index
  // then costs sum(deg^2) instead of m^2 word scans.
  const auto words = family.sets.front().words().size();
  std::vector<std::vector<std::uint32_t>> containing(n);
  for (std::size_t i = 0; i < m; ++i) {
    family.sets[i].for_each(
        [&](std::size_t x) { containing[x].push_back(static_cast<std::uint32_t>(i)); });
  }
  double sparse_cost = 0.0;
  for (const auto& c : containing) {
    sparse_cost += static_cast<double>(c.size()) * static_cast<double>(c.size());
  }
  const double dense_cost =
      0.5 * static_cast<double>(m) * static_cast<double>(m) * static_cast<double>(words);

  if (sparse_cost < dense_cost) {
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
      std::vector<std::size_t> counts(m, 0);
      std::vector<std::size_t> touched;
      for (std::size_t i = begin; i < end; ++i) {
        family.sets[i].for_each([&](std::size_t x) {
          for (const auto j : containing[x]) {
            if (j <= i) continue;
            if (counts[j]++ == 0) touched.push_back(j);
          }
        });
        for (const auto j : touched) {
          store(i, j, counts[j]);
          counts[j] = 0;
        }
        touched.clear();
      }
    });
    return atr;
  }

  // One contiguous word block per set keeps the pair scan cache friendly.
  std::vector<std::uint64_t> packed(m * words);
  for (std::size_t i = 0; i < m; ++i) {
    const auto w = family.sets[i].words();
    std::copy(w.begin(), w.end(), packed.begin() + static_cast<std::ptrdiff_t>(i * words));
  }
  // The intersection is symmetric, so each unordered pair is counted once.
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto* a = packed.data() + i * words;
      for (std::size_t j = i + 1; j < m; ++j) {
        const auto inter = common_bits(a, packed.data() + j * words, words);
        if (inter != 0) store(i, j, inter);
      }
    }
  });
  return atr;
}

std::string_view to_string(TieBreak t) noexcept {
  return t == TieBreak::SeededRandom ? "seeded_random" : "higher_index";
}

std::optional<TieBreak> parse_tie_break(std::string_view text) noexcept {
  if (text == "higher_index") return TieBreak::HigherIndex;
  if (text == "seeded_random") return TieBreak::SeededRandom;
  return std::nullopt;
}

std::vector<std::size_t> QuasiHierarchy::children(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < parent.size(); ++j) {
    if (parent[j] == static_cast<std::ptrdiff_t>(i)) out.push_back(j);
  }
  return out;
}

QuasiHierarchy quasi_hierarchy(const SetFamily& family,
                               const AttractionMatrix& atr,
                               const QuasiHierarchyOptions& options) {
  const auto m = family.size();
  if (atr.size() != m) {
    throw Error(Errc::InvalidArgument,
                "attraction matrix does not match the family");
  }
  if (!(options.th_qh > 0.0)) {
    throw Error(Errc::InvalidArgument, "th_qh must be positive");
  }
  const auto link = [&](std::size_t i, std::size_t j) {
    return i != j && atr(i, j) > options.th_qh;
  };

  std::mt19937_64 rng(options.rng_seed);
  boost::random::bernoulli_distribution<> coin(0.5);
  std::vector<bool> removed(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m && !removed[i]; ++j) {
      if (removed[j] || !link(i, j) || !link(j, i)) continue;
      const auto si = family.sets[i].size();
      const auto sj = family.sets[j].size();
      bool drop_j = si >= sj;
      if (si == sj && options.tie_break == TieBreak::SeededRandom) {
        drop_j = coin(rng);
      }
      removed[drop_j ? j : i] = true;
    }
  }

  QuasiHierarchy qh;
  qh.th_qh = options.th_qh;
  for (std::size_t i = 0; i < m; ++i) {
    if (removed[i]) continue;
    qh.sets.push_back(family.sets[i]);
    qh.family_index.push_back(i);
  }
  const auto k = qh.sets.size();
  qh.adjacency.assign(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (link(qh.family_index[a], qh.family_index[b])) qh.adjacency[a * k + b] = 1;
    }
  }

  qh.parent.assign(k, QuasiHierarchy::kRoot);
  for (std::size_t child = 0; child < k; ++child) {
    const auto child_size = qh.sets[child].size();
    std::size_t best_size = 0;
    for (std::size_t p = 0; p < k; ++p) {
      if (!qh.linked(p, child)) continue;
      const auto ps = qh.sets[p].size();
      if (ps <= child_size) continue;
      if (qh.parent[child] == QuasiHierarchy::kRoot || ps < best_size) {
        qh.parent[child] = static_cast<std::ptrdiff_t>(p);
        best_size = ps;
      }
    }
  }
  return qh;
}

AnalysisResult quasi_structural_analysis(const PretopologicalSpace& space,
                                         const SeedConfig& seeds,
                                         const DistanceMatrix* dm,
                                         const QuasiHierarchyOptions& options) {
  if (space.size() == 0) {
    throw Error(Errc::EmptyTable, "cannot analyse an empty universe");
  }
  SeedConfig effective = seeds;
  effective.d = std::min(seeds.d, space.size());
  AnalysisResult result;
  result.seeds = set_seeds(space, effective, dm);
  result.family = iterative_pseudoclosure(space, result.seeds.seeds);
  const auto atr = attraction_matrix(result.family);
  result.hierarchy = quasi_hierarchy(result.family, atr, options);
  return result;
}

std::size_t ClusterAssignment::outlier_count() const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), kOutlier));
}

ClusterAssignment extract_clusters(const QuasiHierarchy& qh, std::size_t n) {
  std::vector<std::size_t> top;
  for (std::size_t i = 0; i < qh.size(); ++i) {
    if (qh.parent[i] != QuasiHierarchy::kRoot) continue;
    if (qh.sets[i].size() == n) {
      const auto kids = qh.children(i);
      top.insert(top.end(), kids.begin(), kids.end());
    } else {
      top.push_back(i);
    }
  }
  std::sort(top.begin(), top.end());

  // Smallest containing top-level set wins, then the lowest index.
  std::vector<std::ptrdiff_t> owner(n, ClusterAssignment::kOutlier);
  for (const auto id : top) {
    qh.sets[id].for_each([&](std::size_t x) {
      if (x >= n) return;
      const auto current = owner[x];
      if (current == ClusterAssignment::kOutlier ||
          qh.sets[id].size() < qh.sets[static_cast<std::size_t>(current)].size()) {
        owner[x] = static_cast<std::ptrdiff_t>(id);
      }
    });
  }

  ClusterAssignment out;
  out.labels.assign(n, ClusterAssignment::kOutlier);
  for (const auto id : top) {
    const auto sid = static_cast<std::ptrdiff_t>(id);
    if (std::find(owner.begin(), owner.end(), sid) == owner.end()) continue;
    const auto label = static_cast<std::ptrdiff_t>(out.clusters.size());
    for (std::size_t x = 0; x < n; ++x) {
      if (owner[x] == sid) out.labels[x] = label;
    }
    out.clusters.push_back(qh.sets[id]);
    out.set_ids.push_back(id);
  }
  return out;
}

std::string export_dendrogram(const QuasiHierarchy& qh, DendrogramFormat format) {
  const auto k = qh.size();
  if (format == DendrogramFormat::Json) {
    auto nodes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::size_t> links;
      for (std::size_t j = 0; j < k; ++j) {
        if (qh.linked(i, j)) links.push_back(j);
      }
      nlohmann::ordered_json node;
      node["id"] = i;
      node["size"] = qh.sets[i].size();
      node["elements"] = qh.sets[i].members();
      node["parent"] = qh.parent[i];
      node["children"] = qh.children(i);
      node["links"] = links;
      nodes.push_back(std::move(node));
    }
    return nodes.dump(2) + "\n";
  }

  std::string out = "digraph quasi_hierarchy {\n";
  for (std::size_t i = 0; i < k; ++i) {
    out += fmt::format("  n{} [label=\"{} ({})\"];\n", i, i, qh.sets[i].size());
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (qh.linked(i, j)) out += fmt::format("  n{} -> n{};\n", i, j);
    }
  }
  out += "}\n";
  return out;
}

}  // namespace pretopomd
