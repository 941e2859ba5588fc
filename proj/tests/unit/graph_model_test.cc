#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mlel/error.h"
#include "mlel/graph_model.h"

namespace mlel {
namespace {

void expect_simple_graph(const Adjacency& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_FALSE(a.has_edge(i, i));
    for (std::size_t j = 0; j < a.size(); ++j) ASSERT_EQ(a.has_edge(i, j), a.has_edge(j, i));
  }
}

double norm_by_summation(const DegreeVector& w) {
  double s = 0.0;
  for (double x : w.entries()) s += x * x;
  return std::sqrt(s);
}

LayerSpec two_block(double tau, double lambda) {
  LayerSpec l;
  l.tau = tau;
  l.lambda = lambda;
  return l;
}

LayerSpec power_law(double tau, double beta) {
  LayerSpec l;
  l.family = WeightFamily::kPowerLaw;
  l.tau = tau;
  l.beta = beta;
  return l;
}

TEST(Faulhaber, SmallSums) {
  EXPECT_DOUBLE_EQ(faulhaber_sum(3, 1), 6.0);
  EXPECT_DOUBLE_EQ(faulhaber_sum(17, 0), 17.0);
  EXPECT_NEAR(faulhaber_sum(2, 0.5), 2.414214, 1e-6);
  EXPECT_DOUBLE_EQ(faulhaber_sum(3, 4), 98.0);
}

TEST(TwoBlockWeights, FourNodes) {
  const DegreeVector w = make_weights_two_block(4, 2, 0.8);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_NEAR(w[0], 0.565685, 1e-6);
  EXPECT_NEAR(w[1], 0.565685, 1e-6);
  EXPECT_NEAR(w[2], 0.424264, 1e-6);
  EXPECT_NEAR(w[3], 0.424264, 1e-6);
}

TEST(TwoBlockWeights, LambdaOneZeroesSecondBlock) {
  const DegreeVector w = make_weights_two_block(4, 2, 1.0);
  EXPECT_NEAR(w[0], 0.707107, 1e-6);
  EXPECT_NEAR(w[1], 0.707107, 1e-6);
  EXPECT_EQ(w[2], 0.0);
  EXPECT_EQ(w[3], 0.0);
}

TEST(TwoBlockWeights, UnitNormAfterRounding) {
  const DegreeVector w = make_weights_two_block(6, 2, 0.8);
  EXPECT_EQ(w[0], w[1]);
  EXPECT_EQ(w[1], w[2]);
  EXPECT_NEAR(norm_by_summation(w), 1.0, 1e-12);
  // n/r not an integer: floor split plus renormalization
  for (std::size_t n : {5u, 7u, 101u, 400u}) {
    for (double r : {1.5, 2.0, 2.5, 3.0}) {
      EXPECT_NEAR(norm_by_summation(make_weights_two_block(n, r, 0.7)), 1.0, 1e-9);
    }
  }
}

TEST(TwoBlockWeights, RejectsBadParameters) {
  EXPECT_THROW(make_weights_two_block(4, 1.0, 0.8), ValidationError);
  EXPECT_THROW(make_weights_two_block(4, 2, 0.0), ValidationError);
  EXPECT_THROW(make_weights_two_block(4, 2, 1.2), ValidationError);
  EXPECT_THROW(make_weights_two_block(2, 3, 0.8), ValidationError);
}

TEST(PowerLawWeights, Values) {
  const DegreeVector w = make_weights_power_law(3, 1);
  EXPECT_NEAR(w[0], 0.267261, 1e-6);
  EXPECT_NEAR(w[1], 0.534522, 1e-6);
  EXPECT_NEAR(w[2], 0.801784, 1e-6);
  const DegreeVector u = make_weights_power_law(9, 0);
  for (double x : u.entries()) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
  const DegreeVector q = make_weights_power_law(3, 2);
  EXPECT_NEAR(q[0], 1 / std::sqrt(98.0), 1e-15);
  EXPECT_NEAR(q[1], 4 / std::sqrt(98.0), 1e-15);
  EXPECT_NEAR(q[2], 9 / std::sqrt(98.0), 1e-15);
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    EXPECT_NEAR(norm_by_summation(make_weights_power_law(400, beta)), 1.0, 1e-9);
  }
  EXPECT_THROW(make_weights_power_law(3, -1), ValidationError);
}

TEST(DegreeVectorTest, Invariants) {
  EXPECT_THROW(DegreeVector({0.5, 0.5}), ValidationError);
  EXPECT_THROW(DegreeVector({1.2, 0.0}), ValidationError);
  const DegreeVector w({0.6, 0.8});
  EXPECT_NEAR(w.l1_norm(), 1.4, 1e-15);
  EXPECT_NEAR(w.l2_norm_squared(), 1.0, 1e-15);
}

TEST(InnerProduct, ClosedForm) {
  const DegreeVector a = make_weights_two_block(400, 2, 0.8);
  EXPECT_NEAR(weight_inner_product(a, a), 1.0, 1e-12);
  const DegreeVector b = make_weights_two_block(400, 2, 0.5);
  EXPECT_NEAR(weight_inner_product(a, b), 0.919615, 1e-6);
  EXPECT_NEAR(weight_inner_product(a, b), 0.4 + std::sqrt(0.36 * 0.75), 1e-12);
  EXPECT_THROW(weight_inner_product(a, make_weights_two_block(10, 2, 0.5)), ValidationError);
}

TEST(Rho, FromTau) {
  EXPECT_NEAR(rho_from_tau(400, 0.5), 20.0, 1e-12);
  EXPECT_NEAR(rho_from_tau(400, 0.3), 6.034176, 1e-6);
  EXPECT_DOUBLE_EQ(rho_from_tau(400, 0), 1.0);
  LayerSpec l = two_block(0.3, 0.8);
  l.rho_override = 2.5;
  EXPECT_DOUBLE_EQ(layer_rho(l, 400), 2.5);
}

TEST(Validate, HardAndSoftChecks) {
  ScenarioSpec s;
  s.layers = {two_block(0.3, 0.8)};
  EXPECT_THROW(validate(s), ValidationError);
  s.layers.push_back(two_block(0.2, 0.8));
  EXPECT_TRUE(validate(s).empty());
  s.layers[1].tau = 0.6;
  EXPECT_EQ(validate(s).size(), 1u);
  s.layers[1].tau = 0.2;
  s.n = 3;
  EXPECT_THROW(validate(s), ValidationError);
  s.n = 401;
  s.rank = Rank::kRank2;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Sampler, RhoZeroGivesEmptyGraph) {
  RandomStream s(1);
  const LayerSample out = sample_rank1_layer(make_weights_two_block(50, 2, 0.8), 0.0, s);
  EXPECT_EQ(out.adjacency.edge_count(), 0u);
  RandomStream t(1);
  EXPECT_EQ(sample_rank2_layer(make_weights_two_block(50, 2, 0.8), 0.0, 1.1, 0.9, t)
                .adjacency.edge_count(),
            0u);
}

TEST(Sampler, ProbabilityOneGivesCompleteGraph) {
  const std::size_t n = 12;
  const DegreeVector w = make_weights_power_law(n, 0);  // 1/sqrt(n)
  RandomStream s(5);
  const LayerSample out = sample_rank1_layer(w, static_cast<double>(n), s);
  EXPECT_EQ(out.adjacency.edge_count(), n * (n - 1) / 2);
  expect_simple_graph(out.adjacency);
}

TEST(Sampler, ClippingIsCounted) {
  const std::size_t n = 10;
  const DegreeVector w = make_weights_power_law(n, 0);
  RandomStream s(5);
  const LayerSample out = sample_rank1_layer(w, 2.0 * n, s);
  EXPECT_EQ(out.clipped_pairs, n * (n - 1) / 2);
  EXPECT_EQ(out.adjacency.edge_count(), n * (n - 1) / 2);
}

TEST(Sampler, EdgeCountNearExactMean) {
  const std::size_t n = 400;
  const DegreeVector w = make_weights_two_block(n, 2, 0.8);
  const double rho = rho_from_tau(n, 0.3);
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = std::min(1.0, rho * w[i] * w[j]);
      mean += p;
      var += p * (1 - p);
    }
  }
  RandomStream s(42);
  const LayerSample out = sample_rank1_layer(w, rho, s);
  expect_simple_graph(out.adjacency);
  EXPECT_LT(std::abs(static_cast<double>(out.adjacency.edge_count()) - mean),
            4.0 * std::sqrt(var));
}

TEST(Sampler, Rank2WithUnitFactorsMatchesRank1) {
  const DegreeVector w = make_weights_two_block(60, 2, 0.7);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RandomStream a(seed), b(seed);
    EXPECT_EQ(sample_rank1_layer(w, 8.0, a).adjacency,
              sample_rank2_layer(w, 8.0, 1.0, 1.0, b).adjacency);
  }
}

TEST(Sampler, Rank2BlockRatios) {
  const std::size_t n = 400, half = n / 2;
  const DegreeVector w = make_weights_two_block(n, 2, 0.8);
  const double rho = rho_from_tau(n, 0.3);
  double within_mean = 0.0, cross_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ((i < half) == (j < half) ? within_mean : cross_mean) += rho * w[i] * w[j];
    }
  }
  double within = 0.0, cross = 0.0;
  RandomStream root(7);
  for (std::uint64_t d = 0; d < 100; ++d) {
    RandomStream s = root.split(d);
    const Adjacency a = sample_rank2_layer(w, rho, 1.1, 0.9, s).adjacency;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (a.has_edge(i, j)) ((i < half) == (j < half) ? within : cross) += 1.0;
      }
    }
  }
  EXPECT_NEAR(within / (100 * within_mean), 1.1, 0.05 * 1.1);
  EXPECT_NEAR(cross / (100 * cross_mean), 0.9, 0.05 * 0.9);
  RandomStream s(1);
  EXPECT_THROW(sample_rank2_layer(make_weights_two_block(5, 2, 0.8), 1.0, 1.1, 0.9, s),
               ValidationError);
}

TEST(Multilayer, DeterministicPerSeed) {
  ScenarioSpec spec;
  spec.n = 120;
  spec.layers = {two_block(0.3, 0.8), two_block(0.2, 0.8), two_block(0.4, 0.8)};
  const MultilayerNetwork a = sample_multilayer(spec, 99);
  const MultilayerNetwork b = sample_multilayer(spec, 99);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == sample_multilayer(spec, 100));
  for (const Adjacency& layer : a.layers) expect_simple_graph(layer);
  // layer l only depends on its own stream
  ScenarioSpec two = spec;
  two.layers.pop_back();
  const MultilayerNetwork c = sample_multilayer(two, 99);
  EXPECT_EQ(c.layers[0], a.layers[0]);
  EXPECT_EQ(c.layers[1], a.layers[1]);
}

TEST(Multilayer, MeanTotalDegreeWithinFourSigma) {
  ScenarioSpec spec;
  spec.n = 400;
  spec.layers = {two_block(0.3, 0.8), two_block(0.2, 0.8), two_block(0.4, 0.8)};
  const ScenarioModel model = build_model(spec);
  const int draws = 50;
  for (std::size_t l = 0; l < 3; ++l) {
    const DegreeVector& w = model.weights[l];
    const double rho = model.rho[l];
    const double l1 = w.l1_norm();
    const double expected = rho * (l1 * l1 - w.l2_norm_squared());
    // variance of the total degree 2|E| of one draw
    double var = 0.0;
    for (std::size_t i = 0; i < spec.n; ++i) {
      for (std::size_t j = i + 1; j < spec.n; ++j) {
        const double p = rho * w[i] * w[j];
        var += 4.0 * p * (1.0 - p);
      }
    }
    double total = 0.0;
    for (int d = 0; d < draws; ++d) {
      total += 2.0 * sample_multilayer(model, 1000 + d).layers[l].edge_count();
    }
    EXPECT_LT(std::abs(total / draws - expected), 4.0 * std::sqrt(var / draws)) << "layer " << l;
  }
}

TEST(Multilayer, SharedWeightsDifferentDensity) {
  ScenarioSpec spec;
  spec.n = 200;
  spec.layers = {two_block(0.1, 0.8), two_block(0.4, 0.8)};
  const ScenarioModel model = build_model(spec);
  EXPECT_EQ(std::vector<double>(model.weights[0].entries().begin(), model.weights[0].entries().end()),
            std::vector<double>(model.weights[1].entries().begin(), model.weights[1].entries().end()));
  EXPECT_LT(model.rho[0], model.rho[1]);
}

TEST(Difference, PaperRows) {
  ScenarioSpec spec;
  spec.layers = {two_block(0.3, 0.8), two_block(0.2, 0.6), two_block(0.4, 0.5)};
  EXPECT_NEAR(scenario_difference(spec), 0.5, 1e-12);
  spec.layers = {power_law(0.3, 1), power_law(0.2, 3), power_law(0.4, 4)};
  EXPECT_NEAR(scenario_difference(spec), 5.0, 1e-12);
  spec.layers = {two_block(0.3, 0.8), two_block(0.2, 0.8)};
  EXPECT_EQ(scenario_difference(spec), 0.0);
  spec.layers = {two_block(0.3, 0.8), power_law(0.2, 1)};
  EXPECT_THROW(scenario_difference(spec), ValidationError);
}

TEST(AdjacencyTest, EdgeBookkeeping) {
  Adjacency a(4);
  EXPECT_TRUE(a.add_edge(0, 1));
  EXPECT_FALSE(a.add_edge(1, 0));
  EXPECT_THROW(a.add_edge(2, 2), ValidationError);
  EXPECT_THROW(a.add_edge(0, 4), ValidationError);
  a.add_edge(1, 2);
  EXPECT_EQ(a.edge_count(), 2u);
  EXPECT_EQ(a.degrees(), (std::vector<std::size_t>{1, 2, 1, 0}));
  EXPECT_EQ(a.neighbors(1), (std::vector<std::size_t>{0, 2}));
}

}  // namespace
}  // namespace mlel
