#pragma once

// Prenetworks, automatic thresholds and the pseudoclosure/closure operators
// of a pretopological space built from weighted graphs and a positive rule.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pretopomd/data_model.hpp"
#include "pretopomd/distances.hpp"
#include "pretopomd/dnf_rule.hpp"
#include "pretopomd/element_set.hpp"

namespace pretopomd {

enum class AreaMethod { MaxDistanceSquare, BoundingBox };
enum class WeightScheme { RadiusBinary, Similarity };

std::string_view to_string(AreaMethod method) noexcept;
std::optional<AreaMethod> parse_area_method(std::string_view text) noexcept;
std::string_view to_string(WeightScheme scheme) noexcept;
std::optional<WeightScheme> parse_weight_scheme(std::string_view text) noexcept;

struct ThresholdConfig {
  double threshold_power = 1.0;
  double closest_coeff = 1.0;
  double square_lgth_coeff = 1.0;
  AreaMethod area_method = AreaMethod::MaxDistanceSquare;
  std::optional<double> manual_threshold;

  /// Throws Error(InvalidArgument) for non-positive coefficients, a
  /// non-finite power or a non-positive manual threshold.
  void validate() const;
};

/// MaxDistanceSquare: square of the largest pairwise distance. BoundingBox:
/// product of the column ranges of `group`, which must be numeric.
double dispersion_area(const DistanceMatrix& dm, AreaMethod method,
                       const FeatureGroup* group = nullptr);

/// sqrt(area / n) * square_lgth_coeff. Throws Error(SingletonMatrix) for
/// n < 2.
double square_length(const DistanceMatrix& dm, const ThresholdConfig& config,
                     const FeatureGroup* group = nullptr);

/// Adaptive threshold (real_points / n)^threshold_power, where
///   closest_i     = #{ j != i : d(i, j) < square_length * closest_coeff },
///                   at least 1
///   real_points   = n - sum_i (closest_i - 1) / closest_i.
/// Returns the manual threshold instead when one is configured.
double auto_threshold(const DistanceMatrix& dm, const ThresholdConfig& config,
                      const FeatureGroup* group = nullptr);

/// Weighted directed graph over the universe. w(x, y) is the weight of the
/// edge x -> y; zero means no edge and the diagonal is ignored.
class Prenetwork {
public:
  /// Throws Error(InvalidArgument) for negative or non-finite weights.
  Prenetwork(std::string name, std::size_t n, std::vector<double> weights);
  /// Unit-weight graph given by its out-neighbour sets; self-loops are
  /// dropped.
  static Prenetwork from_edges(std::string name, std::vector<ElementSet> out);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double weight(std::size_t x, std::size_t y) const {
    if (unit_weights_) return x != y && out_[x].contains(y) ? 1.0 : 0.0;
    return weights_[x * n_ + y];
  }
  /// { y != x : w(x, y) > 0 }
  [[nodiscard]] const ElementSet& out_neighbors(std::size_t x) const {
    return out_[x];
  }
  /// { x != y : w(x, y) > 0 }
  [[nodiscard]] const ElementSet& in_neighbors(std::size_t y) const {
    return in_[y];
  }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_; }

  /// Sum of w(x, y) over y in A, y != x.
  [[nodiscard]] double weight_into(std::size_t x, const ElementSet& a) const;

private:
  Prenetwork(std::string name, std::size_t n) : name_(std::move(name)), n_(n) {}

  std::string name_;
  std::size_t n_;
  std::vector<double> weights_;  // empty when every edge weighs 1
  std::vector<ElementSet> out_;
  std::vector<ElementSet> in_;
  std::size_t edges_ = 0;
  bool unit_weights_ = true;
};

/// w(x, y) = 1 when d(x, y) < radius, else 0.
Prenetwork radius_prenetwork(std::string name, const DistanceMatrix& dm,
                             double radius);
/// w(x, y) = 1 - d(x, y) / max_d, all zero when max_d = 0.
Prenetwork similarity_prenetwork(std::string name, const DistanceMatrix& dm);

struct PrenetworkSpec {
  std::string name;
  Metric metric = Metric::Euclidean;
  WeightScheme scheme = WeightScheme::RadiusBinary;
};

/// A prenetwork together with the quantities derived while building it.
struct BuiltPrenetwork {
  Prenetwork network;
  double square_length = 0.0;
  double threshold = 1.0;
  bool manual_threshold = false;
};

/// Distance matrix of the group under spec.metric, then the weight scheme
/// (radius = square_length) and the threshold. Universes with fewer than two
/// elements yield an edgeless prenetwork with threshold 1 (or the manual one).
BuiltPrenetwork build_prenetwork(const FeatureGroup& group,
                                 const PrenetworkSpec& spec,
                                 const ThresholdConfig& config);
BuiltPrenetwork build_prenetwork(const FeatureGroup& group,
                                 const DistanceMatrix& dm,
                                 const PrenetworkSpec& spec,
                                 const ThresholdConfig& config);

/// V(A, x): true iff the weight from x into A reaches theta.
bool v_membership(const Prenetwork& net, double theta, const ElementSet& a,
                  std::size_t x);

/// Universe, prenetworks, one threshold per prenetwork and the rule combining
/// their membership tests.
class PretopologicalSpace {
public:
  /// Throws Error(InvalidArgument) on size mismatches or non-positive
  /// thresholds and Error(UnknownPrenetworkInRule) when the rule names a
  /// missing prenetwork.
  PretopologicalSpace(std::size_t n, std::vector<Prenetwork> prenetworks,
                      std::vector<double> thresholds, RuleExpression rule);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::span<const Prenetwork> prenetworks() const noexcept {
    return prenetworks_;
  }
  [[nodiscard]] std::span<const double> thresholds() const noexcept {
    return thresholds_;
  }
  [[nodiscard]] const RuleExpression& rule() const noexcept { return rule_; }

  /// Whether x satisfies the rule with respect to A.
  [[nodiscard]] bool attracted(const ElementSet& a, std::size_t x) const;

  /// a(A) = A plus every element attracted by A; a(empty) = empty.
  [[nodiscard]] ElementSet pseudoclosure(const ElementSet& a) const;

  /// Smallest fixpoint of the pseudoclosure containing A. When `iterations`
  /// is given it receives the number of pseudoclosure applications.
  [[nodiscard]] ElementSet closure(const ElementSet& a,
                                   std::size_t* iterations = nullptr) const;

private:
  std::size_t n_;
  std::vector<Prenetwork> prenetworks_;
  std::vector<double> thresholds_;
  RuleExpression rule_;
  BoundRule bound_;
};

}  // namespace pretopomd
