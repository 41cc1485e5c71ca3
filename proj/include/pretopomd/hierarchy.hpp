#pragma once

// From seeds to a quasi-hierarchy of (possibly overlapping) sets, and from the
// quasi-hierarchy to flat clusters and dendrogram exports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pretopomd/element_set.hpp"
#include "pretopomd/pretopo_space.hpp"
#include "pretopomd/seeding.hpp"

namespace pretopomd {

/// Distinct sets ordered by non-decreasing cardinality.
struct SetFamily {
  std::vector<ElementSet> sets;
  /// closed[i] is true when sets[i] is a fixpoint of the pseudoclosure.
  std::vector<bool> closed;

  [[nodiscard]] std::size_t size() const noexcept { return sets.size(); }
};

/// Applies the pseudoclosure to every seed and every set it produces,
/// smallest sets first, keeping each distinct set once. The result holds
/// the seeds, all intermediate sets and the closures.
SetFamily iterative_pseudoclosure(const PretopologicalSpace& space,
                                  std::span<const ElementSet> seeds);

/// Atr(A, B) = (|A| / |B|) * (|A n B| / |B|): how strongly A attracts B.
/// Large sets attract their subsets; disjoint sets do not interact.
class AttractionMatrix {
public:
  explicit AttractionMatrix(std::size_t m) : m_(m), values_(m * m, 0.0) {}

  [[nodiscard]] std::size_t size() const noexcept { return m_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return values_[i * m_ + j];
  }
  double& at(std::size_t i, std::size_t j) { return values_[i * m_ + j]; }

private:
  std::size_t m_;
  std::vector<double> values_;
};

/// Attraction of one set over another, evaluated directly.
double attraction(std::size_t size_a, std::size_t size_b,
                  std::size_t intersection) noexcept;

/// Throws Error(EmptySetInFamily) if any set is empty.
AttractionMatrix attraction_matrix(const SetFamily& family);

enum class TieBreak { HigherIndex, SeededRandom };

std::string_view to_string(TieBreak t) noexcept;
std::optional<TieBreak> parse_tie_break(std::string_view text) noexcept;

struct QuasiHierarchyOptions {
  double th_qh = 0.5;
  TieBreak tie_break = TieBreak::HigherIndex;
  std::uint64_t rng_seed = 0;
};

/// Surviving sets linked by thresholded attraction.
struct QuasiHierarchy {
  static constexpr std::ptrdiff_t kRoot = -1;

  std::vector<ElementSet> sets;
  /// Position of each surviving set in the input family.
  std::vector<std::size_t> family_index;
  /// Row-major 0/1 matrix over surviving sets: adjacency[i*m + j] is 1 when
  /// set i attracts set j above th_qh.
  std::vector<std::uint8_t> adjacency;
  /// Smallest strictly larger set linking to this one, or kRoot.
  std::vector<std::ptrdiff_t> parent;
  double th_qh = 0.5;

  [[nodiscard]] std::size_t size() const noexcept { return sets.size(); }
  [[nodiscard]] bool linked(std::size_t i, std::size_t j) const {
    return adjacency[i * sets.size() + j] != 0;
  }
  [[nodiscard]] std::vector<std::size_t> children(std::size_t i) const;
};

/// Links i -> j whenever Atr(i, j) > th_qh. Of every mutually linked pair the
/// smaller set is dropped (equal sizes: per options.tie_break); pairs are
/// visited in ascending index order and dropped sets take no further part.
QuasiHierarchy quasi_hierarchy(const SetFamily& family,
                               const AttractionMatrix& atr,
                               const QuasiHierarchyOptions& options = {});

struct AnalysisResult {
  SeedList seeds;
  SetFamily family;
  QuasiHierarchy hierarchy;
};

/// Seeds, iterative pseudoclosure, attraction and quasi-hierarchy, in that
/// order. The seed size is capped at the universe size.
AnalysisResult quasi_structural_analysis(const PretopologicalSpace& space,
                                         const SeedConfig& seeds,
                                         const DistanceMatrix* dm,
                                         const QuasiHierarchyOptions& options = {});

/// Flat labelling of elements.
struct ClusterAssignment {
  static constexpr std::ptrdiff_t kOutlier = -1;

  /// labels[x] indexes `clusters`, or is kOutlier.
  std::vector<std::ptrdiff_t> labels;
  /// Top-level sets that received at least one element.
  std::vector<ElementSet> clusters;
  /// Hierarchy index of each cluster.
  std::vector<std::size_t> set_ids;

  [[nodiscard]] std::size_t outlier_count() const;
};

/// Top-level sets are those without a parent; the whole universe is never a
/// cluster and is replaced by its children. An element in several top-level
/// sets goes to the smallest (then lowest index); one in none is an outlier.
ClusterAssignment extract_clusters(const QuasiHierarchy& qh, std::size_t n);

enum class DendrogramFormat { Json, Dot };

std::string export_dendrogram(const QuasiHierarchy& qh, DendrogramFormat format);

}  // namespace pretopomd
