#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "pretopomd/error.hpp"
#include "pretopomd/seeding.hpp"
#include "support.hpp"

using namespace pretopomd;
using testsupport::line_distances;

namespace {

PretopologicalSpace space_from(std::size_t n, std::vector<double> w) {
  std::vector<Prenetwork> nets;
  nets.emplace_back("N", n, std::move(w));
  return PretopologicalSpace(n, std::move(nets), {1.0}, RuleExpression::var("N"));
}

PretopologicalSpace radius_space(const DistanceMatrix& dm, double radius) {
  std::vector<Prenetwork> nets;
  nets.push_back(radius_prenetwork("N", dm, radius));
  return PretopologicalSpace(dm.size(), std::move(nets), {1.0}, RuleExpression::var("N"));
}

}  // namespace

TEST(NearestNeighbors, Examples) {
  const auto dm = line_distances({0, 1, 5, 6});
  EXPECT_EQ(nearest_neighbors(0, 2, dm), ElementSet(4, {0, 1}));
  EXPECT_EQ(nearest_neighbors(2, 3, dm), ElementSet(4, {1, 2, 3}));
  EXPECT_EQ(nearest_neighbors(3, 1, dm), ElementSet(4, {3}));
}

TEST(NearestNeighbors, TiesGoToLowerIndex) {
  const auto dm = line_distances({5, 4, 6, 5});
  EXPECT_EQ(nearest_neighbors(0, 2, dm), ElementSet(4, {0, 3}));
  EXPECT_EQ(nearest_neighbors(0, 3, dm), ElementSet(4, {0, 1, 3}));
}

TEST(SetSeeds, PerElementNearest) {
  const auto dm = line_distances({0, 1, 10});
  const auto space = radius_space(dm, 2.0);
  SeedConfig config;
  config.d = 2;
  const auto list = set_seeds(space, config, &dm);
  ASSERT_EQ(list.seeds.size(), 3U);
  EXPECT_EQ(list.seeds[0], ElementSet(3, {0, 1}));
  EXPECT_EQ(list.seeds[1], ElementSet(3, {0, 1}));
  EXPECT_EQ(list.seeds[2], ElementSet(3, {1, 2}));
  EXPECT_TRUE(list.truncated.empty());
}

TEST(SetSeeds, SizeOneGivesSingletonsForBothStrategies) {
  const auto dm = line_distances({0, 1, 10});
  const auto space = radius_space(dm, 2.0);
  for (const auto strategy : {SeedStrategy::NearestNeighbors, SeedStrategy::RandomWalk}) {
    SeedConfig config;
    config.d = 1;
    config.strategy = strategy;
    const auto list = set_seeds(space, config, &dm);
    for (std::size_t x = 0; x < 3; ++x) EXPECT_EQ(list.seeds[x], ElementSet(3, {x}));
  }
}

TEST(RandomWalk, IsolatedStartIsAnError) {
  const auto dm = line_distances({0, 1, 10});
  const auto space = radius_space(dm, 2.0);
  auto rng = walk_rng(1, 2);
  try {
    (void)random_walk_neighbors(2, 2, space, WalkSampling::Uniform, rng);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IsolatedStart);
  }
}

TEST(RandomWalk, TrappedWalkIsFlagged) {
  // only edge is 0 -> 1; the walk cannot leave 1
  std::vector<double> w(9, 0.0);
  w[0 * 3 + 1] = 1.0;
  const auto space = space_from(3, w);
  auto rng = walk_rng(7, 0);
  const auto result = random_walk_neighbors(0, 3, space, WalkSampling::Uniform, rng);
  EXPECT_EQ(result.members, ElementSet(3, {0, 1}));
  EXPECT_TRUE(result.trapped);

  SeedConfig config;
  config.d = 3;
  config.strategy = SeedStrategy::RandomWalk;
  config.rng_seed = 7;
  // elements 1 and 2 have no out-edges, so they stay alone
  const auto list = set_seeds(space, config, nullptr);
  EXPECT_EQ(list.seeds[0], ElementSet(3, {0, 1}));
  EXPECT_EQ(list.seeds[1], ElementSet(3, {1}));
  EXPECT_EQ(list.truncated, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(RandomWalk, FollowsEdgesAndIsReproducible) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<double> xs(60);
  for (auto& x : xs) x = u(gen);
  const auto dm = line_distances(xs);
  const auto space = radius_space(dm, 15.0);
  SeedConfig config;
  config.d = 4;
  config.strategy = SeedStrategy::RandomWalk;
  config.rng_seed = 99;
  const auto a = set_seeds(space, config, nullptr);
  const auto b = set_seeds(space, config, nullptr);
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(a.truncated, b.truncated);
  const auto& net = space.prenetworks()[0];
  for (std::size_t x = 0; x < xs.size(); ++x) {
    const auto& seed = a.seeds[x];
    EXPECT_TRUE(seed.contains(x));
    if (std::find(a.truncated.begin(), a.truncated.end(), x) == a.truncated.end()) {
      EXPECT_EQ(seed.size(), 4U);
    }
    // every member is reachable from x inside the seed
    ElementSet reached(xs.size(), {x});
    for (std::size_t step = 0; step < 4; ++step) {
      ElementSet next = reached;
      reached.for_each([&](std::size_t y) { next |= net.out_neighbors(y) & seed; });
      reached = next;
    }
    EXPECT_EQ(reached, seed);
  }
  config.rng_seed = 100;
  EXPECT_NE(set_seeds(space, config, nullptr).seeds, a.seeds);
}

TEST(RandomWalk, WeightProportionalFavoursHeavyEdges) {
  std::vector<double> w(9, 0.0);
  w[0 * 3 + 1] = 0.01;
  w[0 * 3 + 2] = 1.0;
  const auto space = space_from(3, w);
  int heavy_uniform = 0;
  int heavy_weighted = 0;
  for (std::size_t s = 0; s < 400; ++s) {
    auto r1 = walk_rng(s, 0);
    auto r2 = walk_rng(s, 0);
    heavy_uniform += random_walk_neighbors(0, 2, space, WalkSampling::Uniform, r1)
                         .members.contains(2);
    heavy_weighted += random_walk_neighbors(0, 2, space, WalkSampling::WeightProportional, r2)
                          .members.contains(2);
  }
  EXPECT_GT(heavy_uniform, 140);
  EXPECT_LT(heavy_uniform, 260);
  EXPECT_GT(heavy_weighted, 380);
}

TEST(SeedProperties, NearestSeedsHaveSizeDAndContainStart) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(50);
  for (auto& x : xs) x = u(rng);
  const auto dm = line_distances(xs);
  const auto space = radius_space(dm, 0.1);
  for (const std::size_t d : {1, 2, 5, 50}) {
    SeedConfig config;
    config.d = d;
    const auto list = set_seeds(space, config, &dm);
    ASSERT_EQ(list.seeds.size(), xs.size());
    for (std::size_t x = 0; x < xs.size(); ++x) {
      EXPECT_EQ(list.seeds[x].size(), d);
      EXPECT_TRUE(list.seeds[x].contains(x));
    }
  }
}

TEST(SeedProperties, NearestSeedsArePermutationEquivariant) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(40);
  for (auto& x : xs) x = u(rng);
  std::vector<std::size_t> perm(xs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> permuted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) permuted[perm[i]] = xs[i];
  const auto dm = line_distances(xs);
  const auto dmp = line_distances(permuted);
  for (std::size_t x = 0; x < xs.size(); ++x) {
    const auto seed = nearest_neighbors(x, 4, dm);
    ElementSet mapped(xs.size());
    seed.for_each([&](std::size_t y) { mapped.insert(perm[y]); });
    EXPECT_EQ(nearest_neighbors(perm[x], 4, dmp), mapped);
  }
}
