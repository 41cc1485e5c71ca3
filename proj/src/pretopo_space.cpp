#include "pretopomd/pretopo_space.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

std::string_view to_string(AreaMethod method) noexcept {
  return method == AreaMethod::BoundingBox ? "bounding_box"
                                           : "max_distance_square";
}

std::optional<AreaMethod> parse_area_method(std::string_view text) noexcept {
  if (text == "max_distance_square") return AreaMethod::MaxDistanceSquare;
  if (text == "bounding_box") return AreaMethod::BoundingBox;
  return std::nullopt;
}

std::string_view to_string(WeightScheme scheme) noexcept {
  return scheme == WeightScheme::Similarity ? "similarity" : "radius_binary";
}

std::optional<WeightScheme> parse_weight_scheme(std::string_view text) noexcept {
  if (text == "radius_binary" || text == "radius") {
    return WeightScheme::RadiusBinary;
  }
  if (text == "similarity") return WeightScheme::Similarity;
  return std::nullopt;
}

void ThresholdConfig::validate() const {
  if (!std::isfinite(threshold_power)) {
    throw Error(Errc::InvalidArgument, "threshold_power must be finite");
  }
  if (!(closest_coeff > 0.0) || !std::isfinite(closest_coeff)) {
    throw Error(Errc::InvalidArgument, "closest_coeff must be positive");
  }
  if (!(square_lgth_coeff > 0.0) || !std::isfinite(square_lgth_coeff)) {
    throw Error(Errc::InvalidArgument, "square_lgth_coeff must be positive");
  }
  if (manual_threshold &&
      (!(*manual_threshold > 0.0) || !std::isfinite(*manual_threshold))) {
    throw Error(Errc::InvalidArgument, "manual_threshold must be positive");
  }
}

double dispersion_area(const DistanceMatrix& dm, AreaMethod method,
                       const FeatureGroup* group) {
  if (method == AreaMethod::MaxDistanceSquare) {
    const double d = dm.max_off_diagonal();
    return d * d;
  }
  if (group == nullptr || group->kind() != GroupKind::Numeric) {
    throw Error(Errc::InvalidArgument,
                "bounding_box area needs a numeric feature group");
  }
  const auto& table = group->table();
  double area = 1.0;
  for (const auto c : group->columns()) {
    double lo = table.value(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < table.rows(); ++r) {
      lo = std::min(lo, table.value(r, c));
      hi = std::max(hi, table.value(r, c));
    }
    area *= hi - lo;
  }
  return area;
}

double square_length(const DistanceMatrix& dm, const ThresholdConfig& config,
                     const FeatureGroup* group) {
  const auto n = dm.size();
  if (n < 2) {
    throw Error(Errc::SingletonMatrix, "square_length needs at least 2 elements");
  }
  const double area = dispersion_area(dm, config.area_method, group);
  return std::sqrt(area / static_cast<double>(n)) * config.square_lgth_coeff;
}

double auto_threshold(const DistanceMatrix& dm, const ThresholdConfig& config,
                      const FeatureGroup* group) {
  if (config.manual_threshold) return *config.manual_threshold;
  const auto n = dm.size();
  const double radius = square_length(dm, config, group) * config.closest_coeff;

  double inverse_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t closest = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && dm(i, j) < radius) ++closest;
    }
    closest = std::max<std::size_t>(closest, 1);
    inverse_sum += static_cast<double>(closest - 1) / static_cast<double>(closest);
  }
  const double real_points = static_cast<double>(n) - inverse_sum;
  return std::pow(real_points / static_cast<double>(n), config.threshold_power);
}

Prenetwork::Prenetwork(std::string name, std::size_t n,
                       std::vector<double> weights)
    : name_(std::move(name)),
      n_(n),
      weights_(std::move(weights)),
      out_(n, ElementSet(n)),
      in_(n, ElementSet(n)) {
  if (weights_.size() != n * n) {
    throw Error(Errc::InvalidArgument,
                fmt::format("prenetwork '{}' weights are not n*n", name_));
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double w = weights_[x * n + y];
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(Errc::InvalidArgument,
                    fmt::format("prenetwork '{}' has invalid weight at ({}, {})",
                                name_, x, y));
      }
      if (x == y || w == 0.0) continue;
      out_[x].insert(y);
      in_[y].insert(x);
      ++edges_;
      if (w != 1.0) unit_weights_ = false;
    }
  }
  if (unit_weights_) std::vector<double>().swap(weights_);
}

Prenetwork Prenetwork::from_edges(std::string name, std::vector<ElementSet> out) {
  const auto n = out.size();
  Prenetwork net(std::move(name), n);
  net.out_ = std::move(out);
  net.in_.assign(n, ElementSet(n));
  for (std::size_t x = 0; x < n; ++x) {
    auto& row = net.out_[x];
    if (row.universe() != n) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("prenetwork '{}' edge set {} has the wrong universe",
                              net.name_, x));
    }
    row.erase(x);
    row.for_each([&](std::size_t y) { net.in_[y].insert(x); });
    net.edges_ += row.size();
  }
  return net;
}

double Prenetwork::weight_into(std::size_t x, const ElementSet& a) const {
  const auto& out = out_[x];
  if (unit_weights_) return static_cast<double>(out.intersection_size(a));
  double sum = 0.0;
  const auto ow = out.words();
  const auto aw = a.words();
  for (std::size_t k = 0; k < ow.size(); ++k) {
    auto word = ow[k] & aw[k];
    while (word != 0) {
      const auto y = k * ElementSet::kWordBits +
                     static_cast<std::size_t>(std::countr_zero(word));
      sum += weights_[x * n_ + y];
      word &= word - 1;
    }
  }
  return sum;
}

Prenetwork radius_prenetwork(std::string name, const DistanceMatrix& dm,
                             double radius) {
  const auto n = dm.size();
  std::vector<ElementSet> out(n, ElementSet(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y && dm(x, y) < radius) out[x].insert(y);
    }
  }
  return Prenetwork::from_edges(std::move(name), std::move(out));
}

Prenetwork similarity_prenetwork(std::string name, const DistanceMatrix& dm) {
  const auto n = dm.size();
  const double max_d = dm.max_off_diagonal();
  std::vector<double> w(n * n, 0.0);
  if (max_d > 0.0) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y) w[x * n + y] = 1.0 - dm(x, y) / max_d;
      }
    }
  }
  return Prenetwork(std::move(name), n, std::move(w));
}

BuiltPrenetwork build_prenetwork(const FeatureGroup& group,
                                 const PrenetworkSpec& spec,
                                 const ThresholdConfig& config) {
  return build_prenetwork(group, pairwise_distances(group, {spec.metric}), spec,
                          config);
}

BuiltPrenetwork build_prenetwork(const FeatureGroup& group,
                                 const DistanceMatrix& dm,
                                 const PrenetworkSpec& spec,
                                 const ThresholdConfig& config) {
  config.validate();
  const auto n = dm.size();
  if (n < 2) {
    return {Prenetwork(spec.name, n, std::vector<double>(n * n, 0.0)), 0.0,
            config.manual_threshold.value_or(1.0),
            config.manual_threshold.has_value()};
  }
  const double radius = square_length(dm, config, &group);
  auto net = spec.scheme == WeightScheme::RadiusBinary
                 ? radius_prenetwork(spec.name, dm, radius)
                 : similarity_prenetwork(spec.name, dm);
  const double theta = auto_threshold(dm, config, &group);
  return {std::move(net), radius, theta, config.manual_threshold.has_value()};
}

bool v_membership(const Prenetwork& net, double theta, const ElementSet& a,
                  std::size_t x) {
  return net.weight_into(x, a) >= theta;
}

PretopologicalSpace::PretopologicalSpace(std::size_t n,
                                         std::vector<Prenetwork> prenetworks,
                                         std::vector<double> thresholds,
                                         RuleExpression rule)
    : n_(n),
      prenetworks_(std::move(prenetworks)),
      thresholds_(std::move(thresholds)),
      rule_(std::move(rule)) {
  if (prenetworks_.size() != thresholds_.size()) {
    throw Error(Errc::InvalidArgument,
                "one threshold is required per prenetwork");
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < prenetworks_.size(); ++i) {
    if (prenetworks_[i].size() != n_) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("prenetwork '{}' has {} elements, expected {}",
                              prenetworks_[i].name(), prenetworks_[i].size(), n_));
    }
    if (!(thresholds_[i] > 0.0) || !std::isfinite(thresholds_[i])) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("threshold of '{}' must be positive",
                              prenetworks_[i].name()));
    }
    if (std::find(names.begin(), names.end(), prenetworks_[i].name()) !=
        names.end()) {
      throw Error(Errc::InvalidArgument,
                  fmt::format("duplicate prenetwork '{}'", prenetworks_[i].name()));
    }
    names.push_back(prenetworks_[i].name());
  }
  bound_ = BoundRule(rule_, names);
}

bool PretopologicalSpace::attracted(const ElementSet& a, std::size_t x) const {
  return bound_.evaluate([&](std::size_t i) {
    return v_membership(prenetworks_[i], thresholds_[i], a, x);
  });
}

ElementSet PretopologicalSpace::pseudoclosure(const ElementSet& a) const {
  ElementSet result = a;
  if (a.empty()) return result;

  // Thresholds are positive and the rule is monotone, so an element with no
  // edge into A satisfies no membership test and cannot be attracted.
  ElementSet candidates(n_);
  a.for_each([&](std::size_t y) {
    for (const auto& net : prenetworks_) candidates |= net.in_neighbors(y);
  });
  candidates.subtract(a);
  candidates.for_each([&](std::size_t x) {
    if (attracted(a, x)) result.insert(x);
  });
  return result;
}

ElementSet PretopologicalSpace::closure(const ElementSet& a,
                                        std::size_t* iterations) const {
  ElementSet current = a;
  std::size_t steps = 0;
  while (true) {
    auto next = pseudoclosure(current);
    ++steps;
    if (next == current) break;
    current = std::move(next);
  }
  if (iterations != nullptr) *iterations = steps;
  return current;
}

}  // namespace pretopomd
