#include "pretopomd/seeding.hpp"

#include <algorithm>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

std::string_view to_string(SeedStrategy s) noexcept {
  return s == SeedStrategy::RandomWalk ? "random_walk" : "nearest_neighbors";
}

std::optional<SeedStrategy> parse_seed_strategy(std::string_view text) noexcept {
  if (text == "nearest_neighbors") return SeedStrategy::NearestNeighbors;
  if (text == "random_walk") return SeedStrategy::RandomWalk;
  return std::nullopt;
}

std::string_view to_string(WalkSampling s) noexcept {
  return s == WalkSampling::WeightProportional ? "weighted" : "uniform";
}

std::optional<WalkSampling> parse_walk_sampling(std::string_view text) noexcept {
  if (text == "uniform") return WalkSampling::Uniform;
  if (text == "weighted") return WalkSampling::WeightProportional;
  return std::nullopt;
}

namespace {

void check_size(std::size_t d, std::size_t n) {
  if (d == 0 || d > n) {
    throw Error(Errc::InvalidArgument,
                fmt::format("seed size {} must lie in [1, {}]", d, n));
  }
}

ElementSet out_edges(const PretopologicalSpace& space, std::size_t x) {
  ElementSet out(space.size());
  for (const auto& net : space.prenetworks()) out |= net.out_neighbors(x);
  return out;
}

ElementSet reachable_from(const PretopologicalSpace& space, std::size_t start) {
  ElementSet seen(space.size(), {start});
  std::vector<std::size_t> frontier{start};
  while (!frontier.empty()) {
    const auto x = frontier.back();
    frontier.pop_back();
    out_edges(space, x).for_each([&](std::size_t y) {
      if (!seen.contains(y)) {
        seen.insert(y);
        frontier.push_back(y);
      }
    });
  }
  return seen;
}

}  // namespace

ElementSet nearest_neighbors(std::size_t start, std::size_t d,
                             const DistanceMatrix& dm) {
  const auto n = dm.size();
  check_size(d, n);
  std::vector<std::size_t> order;
  order.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != start) order.push_back(j);
  }
  const auto by_distance = [&](std::size_t a, std::size_t b) {
    const double da = dm(start, a);
    const double db = dm(start, b);
    return da < db || (da == db && a < b);
  };
  std::partial_sort(order.begin(),
                    order.begin() + static_cast<std::ptrdiff_t>(d - 1),
                    order.end(), by_distance);
  ElementSet seed(n, {start});
  for (std::size_t k = 0; k + 1 < d; ++k) seed.insert(order[k]);
  return seed;
}

NeighborSet random_walk_neighbors(std::size_t start, std::size_t d,
                                  const PretopologicalSpace& space,
                                  WalkSampling sampling, std::mt19937_64& rng) {
  const auto n = space.size();
  check_size(d, n);
  NeighborSet result{ElementSet(n, {start}), false};
  if (d == 1) return result;
  if (out_edges(space, start).empty()) {
    throw Error(Errc::IsolatedStart,
                fmt::format("element {} has no outgoing edge", start));
  }

  const auto reachable = reachable_from(space, start);
  const std::size_t target = std::min(d, reachable.size());
  // Directed graphs can strand the walk in a sink component; give up after
  // this many steps without a new element.
  const std::size_t max_idle = 64 * n + 64;

  std::size_t current = start;
  std::size_t idle = 0;
  std::vector<std::size_t> options;
  std::vector<double> cumulative;
  while (result.members.size() < target && idle < max_idle) {
    options = out_edges(space, current).members();
    if (options.empty()) break;
    std::size_t next = 0;
    if (sampling == WalkSampling::Uniform) {
      boost::random::uniform_int_distribution<std::size_t> pick(
          0, options.size() - 1);
      next = options[pick(rng)];
    } else {
      cumulative.clear();
      double total = 0.0;
      for (const auto y : options) {
        for (const auto& net : space.prenetworks()) total += net.weight(current, y);
        cumulative.push_back(total);
      }
      boost::random::uniform_real_distribution<double> u(0.0, total);
      const double r = u(rng);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
      next = options[std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), options.size() - 1)];
    }
    if (result.members.contains(next)) {
      ++idle;
    } else {
      result.members.insert(next);
      idle = 0;
    }
    current = next;
  }
  result.trapped = result.members.size() < d;
  return result;
}

std::mt19937_64 walk_rng(std::uint64_t rng_seed, std::size_t start) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed),
                    static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(start),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(start) >> 32)};
  return std::mt19937_64(seq);
}

NeighborSet find_neighbors(std::size_t start, const SeedConfig& config,
                           const PretopologicalSpace& space,
                           const DistanceMatrix* dm, std::mt19937_64& rng) {
  if (config.strategy == SeedStrategy::NearestNeighbors) {
    if (dm == nullptr) {
      throw Error(Errc::InvalidArgument,
                  "nearest-neighbour seeding needs a distance matrix");
    }
    return {nearest_neighbors(start, config.d, *dm), false};
  }
  return random_walk_neighbors(start, config.d, space, config.sampling, rng);
}

SeedList set_seeds(const PretopologicalSpace& space, const SeedConfig& config,
                   const DistanceMatrix* dm) {
  const auto n = space.size();
  if (dm != nullptr && dm->size() != n) {
    throw Error(Errc::InvalidArgument,
                "distance matrix and space cover different universes");
  }
  check_size(config.d, n);
  SeedList list;
  list.seeds.reserve(n);
  // Nearest-neighbour seeding draws nothing, so the per-start stream is only
  // built for walks.
  std::mt19937_64 rng;
  for (std::size_t x = 0; x < n; ++x) {
    if (config.strategy == SeedStrategy::RandomWalk) rng = walk_rng(config.rng_seed, x);
    try {
      auto found = find_neighbors(x, config, space, dm, rng);
      if (found.trapped) list.truncated.push_back(x);
      list.seeds.push_back(std::move(found.members));
    } catch (const Error& e) {
      if (e.code() != Errc::IsolatedStart) throw;
      list.truncated.push_back(x);
      list.seeds.emplace_back(n, std::initializer_list<std::size_t>{x});
    }
  }
  return list;
}

}  // namespace pretopomd
