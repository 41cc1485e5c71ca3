#pragma once

// Elementary subsets ("seeds") grown into closures by the hierarchy stage.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "pretopomd/distances.hpp"
#include "pretopomd/element_set.hpp"
#include "pretopomd/pretopo_space.hpp"

namespace pretopomd {

enum class SeedStrategy { NearestNeighbors, RandomWalk };
enum class WalkSampling { Uniform, WeightProportional };

std::string_view to_string(SeedStrategy s) noexcept;
std::optional<SeedStrategy> parse_seed_strategy(std::string_view text) noexcept;
std::string_view to_string(WalkSampling s) noexcept;
std::optional<WalkSampling> parse_walk_sampling(std::string_view text) noexcept;

struct SeedConfig {
  std::size_t d = 3;
  SeedStrategy strategy = SeedStrategy::NearestNeighbors;
  std::uint64_t rng_seed = 0;
  WalkSampling sampling = WalkSampling::Uniform;
};

struct NeighborSet {
  ElementSet members;
  /// Set when a random walk could not collect d distinct elements.
  bool trapped = false;
};

/// `start` plus its d-1 nearest elements under dm; ties go to the lower
/// index.
ElementSet nearest_neighbors(std::size_t start, std::size_t d,
                             const DistanceMatrix& dm);

/// Walks from `start` along positive-weight out-edges (the union over all
/// prenetworks), collecting distinct elements until d are held. Throws
/// Error(IsolatedStart) when d > 1 and `start` has no out-edge.
NeighborSet random_walk_neighbors(std::size_t start, std::size_t d,
                                  const PretopologicalSpace& space,
                                  WalkSampling sampling, std::mt19937_64& rng);

/// Dispatches on config.strategy; `dm` is required for NearestNeighbors.
NeighborSet find_neighbors(std::size_t start, const SeedConfig& config,
                           const PretopologicalSpace& space,
                           const DistanceMatrix* dm, std::mt19937_64& rng);

/// Generator used for the walk starting at `start`; a pure function of
/// (rng_seed, start).
std::mt19937_64 walk_rng(std::uint64_t rng_seed, std::size_t start);

struct SeedList {
  /// seeds[x] is the seed grown from element x.
  std::vector<ElementSet> seeds;
  /// Start elements whose walk ended short of d elements.
  std::vector<std::size_t> truncated;
};

/// One seed per element, in element order.
SeedList set_seeds(const PretopologicalSpace& space, const SeedConfig& config,
                   const DistanceMatrix* dm);

}  // namespace pretopomd
