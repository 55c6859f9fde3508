#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sbo_ann/config.hpp"
#include "sbo_ann/optimizers.hpp"

using namespace sbo_ann;

namespace {

SearchConfig config(std::size_t pop, std::size_t iters, std::uint64_t seed) {
  SearchConfig c;
  c.population_size = pop;
  c.iterations = iters;
  c.seed = seed;
  return c;
}

class EachAlgorithm : public ::testing::TestWithParam<Algorithm> {};

std::string name_of(const ::testing::TestParamInfo<Algorithm> &info) {
  return std::string(to_string(info.param));
}

} // namespace

TEST(Benchmarks, Examples) {
  EXPECT_EQ(benchmark_sphere(Vector(4, 0.0)), 0.0);
  EXPECT_EQ(benchmark_rastrigin(Vector(4, 0.0)), 0.0);
  EXPECT_EQ(benchmark_sphere(Vector{1, 2, 3}), 14.0);
  EXPECT_NEAR(benchmark_rastrigin(Vector{1.0}), 1.0, 1e-12);
  EXPECT_NEAR(benchmark_rastrigin(Vector{0.5, 0.5}), 2 * (0.25 + 10) + 20, 1e-12);
}

TEST(Algorithms, NamesRoundTrip) {
  for (auto a : kAllAlgorithms) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
    EXPECT_EQ(hybrid_label(a).rfind("ANN-", 0), 0u);
  }
  EXPECT_EQ(hybrid_label(Algorithm::sbo), "ANN-SBO");
  EXPECT_THROW(parse_algorithm("pso"), ValidationError);
}

TEST(Defaults, SboHyperparameters) {
  SearchConfig c;
  EXPECT_EQ(c.sbo.step_size, 0.94);
  EXPECT_EQ(c.sbo.variance_factor, 0.02);
  EXPECT_EQ(c.sbo.mutation_probability, 0.05);
  EXPECT_EQ(c.hgso.clusters, 5u);
  EXPECT_EQ(c.sfo.pollination_rate, 0.05);
  EXPECT_EQ(c.sfo.mortality_rate, 0.1);
  EXPECT_EQ(c.vsa.gamma_shape, 0.1);
  EXPECT_EQ(c.iterations, 1000u);
}

TEST(Vsa, RadiusFactorShrinksToZero) {
  const std::size_t T = 200;
  double previous = vsa_radius_factor(0, T, 0.1);
  EXPECT_GT(previous, 1.0);
  for (std::size_t t = 1; t < T; ++t) {
    const double f = vsa_radius_factor(t, T, 0.1);
    EXPECT_LT(f, previous) << "t=" << t;
    previous = f;
  }
  EXPECT_EQ(vsa_radius_factor(T, T, 0.1), 0.0);
  // x * factor is the point where the regularised lower incomplete gamma
  // with shape a_t reaches probability x
  const double z = vsa_radius_factor(50, T, 0.1) * 0.1;
  EXPECT_NEAR(boost::math::gamma_p(1.0 - 50.0 / T, z), 0.1, 1e-12);
}

TEST(Config, KeyValueFileOverridesFields) {
  std::istringstream in("# search settings\npop = 30\niters=12\n\nsbo.step_size = 0.5  # a\nhgso.clusters=3\n"
                        "sfo.mortality_rate=0.2\nvsa.gamma_shape=0.3\nseed=9\n");
  SearchConfig c;
  read_config(in, c);
  EXPECT_EQ(c.population_size, 30u);
  EXPECT_EQ(c.iterations, 12u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.sbo.step_size, 0.5);
  EXPECT_EQ(c.hgso.clusters, 3u);
  EXPECT_EQ(c.sfo.mortality_rate, 0.2);
  EXPECT_EQ(c.vsa.gamma_shape, 0.3);
  EXPECT_EQ(c.sbo.variance_factor, 0.02); // untouched
}

TEST(Config, Errors) {
  SearchConfig c;
  std::istringstream unknown("sbo.temperature = 3\n");
  EXPECT_THROW(read_config(unknown, c), ValidationError);
  std::istringstream no_eq("pop 30\n");
  EXPECT_THROW(read_config(no_eq, c), ValidationError);
  std::istringstream bad_number("iters = ten\n");
  EXPECT_THROW(read_config(bad_number, c), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/search.cfg"), Error);
}

TEST_P(EachAlgorithm, ImprovesOnInitialPopulation) {
  const ObjectiveSpec sphere{Bounds::uniform(2, -5, 5), benchmark_sphere};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto trace = optimize(GetParam(), sphere, config(20, 100, seed));
    EXPECT_LT(trace.final_cost, trace.initial_best_cost) << "seed " << seed;
  }
}

TEST_P(EachAlgorithm, EveryCandidateWithinBounds) {
  // Asymmetric per-coordinate box with the optimum outside it so the search
  // keeps pressing against the walls.
  Bounds bounds{{-1.0, 2.0, -3.0}, {0.5, 4.0, -1.0}};
  std::size_t outside = 0;
  std::size_t evaluated = 0;
  ObjectiveSpec obj{bounds, [&](std::span<const double> x) {
                      ++evaluated;
                      if (!bounds.contains(x))
                        ++outside;
                      return benchmark_sphere(x) + 10.0 * std::abs(x[0] - 3.0);
                    }};
  auto trace = optimize(GetParam(), obj, config(15, 40, 3));
  EXPECT_EQ(outside, 0u);
  EXPECT_EQ(evaluated, trace.evaluations);
  EXPECT_TRUE(bounds.contains(trace.best_position));
}

TEST_P(EachAlgorithm, TraceShapeAndMonotonicity) {
  const ObjectiveSpec rastrigin{Bounds::uniform(4, -5.12, 5.12), benchmark_rastrigin};
  auto trace = optimize(GetParam(), rastrigin, config(20, 75, 8));
  ASSERT_EQ(trace.best_cost.size(), 75u);
  for (std::size_t t = 1; t < trace.best_cost.size(); ++t)
    EXPECT_LE(trace.best_cost[t], trace.best_cost[t - 1]) << "iteration " << t;
  EXPECT_LE(trace.best_cost.front(), trace.initial_best_cost);
  EXPECT_EQ(trace.final_cost, trace.best_cost.back());
  EXPECT_DOUBLE_EQ(trace.final_cost, benchmark_rastrigin(trace.best_position));
}

TEST_P(EachAlgorithm, SeededDeterminism) {
  const ObjectiveSpec sphere{Bounds::uniform(3, -5, 5), benchmark_sphere};
  auto a = optimize(GetParam(), sphere, config(10, 30, 17));
  auto b = optimize(GetParam(), sphere, config(10, 30, 17));
  EXPECT_EQ(a, b);
  auto c = optimize(GetParam(), sphere, config(10, 30, 18));
  EXPECT_NE(a.best_position, c.best_position);
}

TEST_P(EachAlgorithm, ObjectiveFailureIsTagged) {
  ObjectiveSpec obj{Bounds::uniform(2, -1, 1),
                    [](std::span<const double> x) -> double {
                      if (x[0] > 0.9)
                        throw std::runtime_error("bad region");
                      return benchmark_sphere(x);
                    }};
  try {
    optimize(GetParam(), obj, config(20, 200, 1));
    FAIL() << "expected the objective to fail at some point";
  } catch (const OptimizationError &e) {
    const std::string what = e.what();
    EXPECT_TRUE(what.find("iteration") != std::string::npos || what.find("initialisation") != std::string::npos)
        << what;
    EXPECT_NE(what.find("bad region"), std::string::npos);
  }
}

TEST_P(EachAlgorithm, RejectsInvalidProblems) {
  const ObjectiveSpec sphere{Bounds::uniform(2, -5, 5), benchmark_sphere};
  EXPECT_THROW(optimize(GetParam(), sphere, config(1, 10, 0)), ValidationError);
  EXPECT_THROW(optimize(GetParam(), sphere, config(10, 0, 0)), ValidationError);
  EXPECT_THROW(optimize(GetParam(), ObjectiveSpec{Bounds{}, benchmark_sphere}, config(10, 10, 0)), Error);
  EXPECT_THROW(optimize(GetParam(), ObjectiveSpec{Bounds::uniform(2, -1, 1), nullptr}, config(10, 10, 0)),
               ValidationError);
}

INSTANTIATE_TEST_SUITE_P(Optimizers, EachAlgorithm, ::testing::ValuesIn(kAllAlgorithms), name_of);

TEST(Hgso, ClusterCountMustFitPopulation) {
  const ObjectiveSpec sphere{Bounds::uniform(2, -5, 5), benchmark_sphere};
  auto c = config(4, 10, 0);
  c.hgso.clusters = 5;
  EXPECT_THROW(optimize(Algorithm::hgso, sphere, c), ValidationError);
}

TEST(Sfo, RatesMustLeaveSurvivors) {
  const ObjectiveSpec sphere{Bounds::uniform(2, -5, 5), benchmark_sphere};
  auto c = config(10, 10, 0);
  c.sfo.mortality_rate = 0.6;
  c.sfo.pollination_rate = 0.5;
  EXPECT_THROW(optimize(Algorithm::sfo, sphere, c), ValidationError);
}
