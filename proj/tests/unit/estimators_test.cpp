#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ope/enumerate.hpp"
#include "ope/environments.hpp"
#include "ope/estimators.hpp"
#include "ope/oracle.hpp"
#include "ope/sampling.hpp"
#include "ope/statistics.hpp"
#include "small_mdps.hpp"

namespace ope {
namespace {

double mean_return(const Dataset& data) {
  double total = 0.0;
  for (const auto& t : data.trajectories) total += t.total_return();
  return total / static_cast<double>(data.size());
}

WeightedTrajectory unit_weights(std::vector<double> rewards) {
  std::vector<double> ratios(rewards.size(), 1.0);
  return {std::move(rewards), std::move(ratios)};
}

// --- statistics --------------------------------------------------------------

TEST(Statistics, SampleVarianceAndCovariance) {
  const std::vector<double> constant(10, 3.25);
  EXPECT_EQ(sample_var(constant), 0.0);
  const std::vector<double> xs = {1.0, 2.0, 4.0, 8.0};
  EXPECT_DOUBLE_EQ(sample_cov(xs, xs), sample_var(xs));
  EXPECT_THROW(sample_var(std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(sample_cov(xs, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST(Statistics, AgreesWithTwoPassReference) {
  RandomStream rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xs(1000), ys(1000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = 5.0 + 3.0 * rng.uniform();
      ys[i] = -2.0 * xs[i] + rng.uniform();
    }
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    long double cxy = 0, cxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cxy += (xs[i] - mx) * (ys[i] - my);
      cxx += (xs[i] - mx) * (xs[i] - mx);
    }
    cxy /= xs.size() - 1;
    cxx /= xs.size() - 1;
    EXPECT_NEAR(sample_cov(xs, ys), static_cast<double>(cxy), 1e-12);
    EXPECT_NEAR(sample_var(xs), static_cast<double>(cxx), 1e-12);
  }
}

TEST(Statistics, PairwiseSumIsExactOnIntegers) {
  std::vector<double> xs(10001);
  std::iota(xs.begin(), xs.end(), 0.0);
  EXPECT_EQ(pairwise_sum(xs), 10000.0 * 10001.0 / 2.0);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}

// --- weights -----------------------------------------------------------------

TEST(Weights, LogSpaceAgreesWithDirectProducts) {
  RandomStream rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> ratios(50);
    for (auto& r : ratios) r = std::exp(8.0 * (rng.uniform() - 0.5));  // factors up to ~55
    if (rep % 3 == 0) ratios[7] = 2000.0;  // forces the log-space path
    const auto logged = cumulative_weights(ratios);
    const auto direct = direct_cumulative_weights(ratios);
    for (std::size_t t = 0; t < ratios.size(); ++t) {
      EXPECT_NEAR(logged[t], direct[t], 1e-9 * std::abs(direct[t]));
    }
  }
}

TEST(Weights, RecursionAndZeroFactor) {
  const std::vector<double> ratios = {2.0, 0.5, 0.0, 3.0};
  const auto w = cumulative_weights(ratios);
  EXPECT_EQ(w, (std::vector<double>{2.0, 1.0, 0.0, 0.0}));
  const std::vector<double> huge = {1e4, 1e-4, 0.0, 5.0};
  EXPECT_EQ(cumulative_weights(huge)[2], 0.0);
  EXPECT_EQ(cumulative_weights(huge)[3], 0.0);
}

TEST(Weights, TwentyStepChainWeightsDoNotOverflow) {
  const std::vector<double> ratios(20, 2.0);
  EXPECT_DOUBLE_EQ(cumulative_weights(ratios).back(), std::ldexp(1.0, 20));
}

TEST(Weights, ZeroBehaviorProbabilityIsAnError) {
  const Trajectory t{{0}, {0}, {1.0}, {0.0}};
  EXPECT_THROW(weigh(t, PrimitivePolicy::uniform(1, 2)), std::invalid_argument);
}

TEST(Weights, ZeroEvaluationProbabilityIsLegal) {
  const Trajectory t{{0, 0}, {1, 0}, {1.0, 1.0}, {0.5, 0.5}};
  const auto w = weigh(t, PrimitivePolicy({{1.0, 0.0}}));
  EXPECT_EQ(w.ratios[0], 0.0);
  const WeightedData data{w};
  EXPECT_EQ(pdis_estimate(data).estimate, 0.0);
}

// --- IS / PDIS / WIS / CWPDIS --------------------------------------------------

TEST(Estimators, OnPolicyEstimatesAreTheMeanReturn) {
  const auto mdp = testing::noisy_small_mdp();
  const auto policy = testing::noisy_small_behavior();
  const auto data = generate_dataset(mdp, policy, 300, 1);
  const double m = mean_return(data);
  EXPECT_NEAR(is_estimate(data, policy).estimate, m, 1e-12);
  EXPECT_NEAR(pdis_estimate(data, policy).estimate, m, 1e-12);
  EXPECT_NEAR(wis_estimate(data, policy).estimate, m, 1e-12);
  EXPECT_NEAR(cwpdis_estimate(data, policy).estimate, m, 1e-12);
  EXPECT_NEAR(incris_estimate(data, policy).estimate, m, 1e-12);
}

TEST(Estimators, PdisOnPolicySumsRewards) {
  const WeightedData data{unit_weights({1.0, 2.0, 3.0})};
  EXPECT_EQ(pdis_estimate(data).estimate, 6.0);
}

TEST(Estimators, ChainOptimalTrajectoryHasWeightEight) {
  const auto mdp = chain_mdp({3});
  const auto optimal = chain_optimal_policy({3});
  Trajectory t{{0, 1, 2}, {0, 0, 0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.5}};
  Dataset data;
  data.trajectories.push_back(t);
  EXPECT_EQ(is_estimate(data, optimal).estimate, 8.0);
  EXPECT_EQ(pdis_estimate(data, optimal).estimate, 8.0);
  EXPECT_EQ(wis_estimate(data, optimal).estimate, 1.0);
  EXPECT_EQ(is_estimate(data, optimal).diagnostics.max_weight, 8.0);
}

TEST(Estimators, ChainPdisEqualsIs) {
  const auto mdp = chain_mdp({6});
  const auto data = generate_dataset(mdp, PrimitivePolicy::uniform(13, 2), 200, 4);
  const auto optimal = chain_optimal_policy({6});
  EXPECT_EQ(pdis_estimate(data, optimal).estimate, is_estimate(data, optimal).estimate);
}

TEST(Estimators, ChainWisIsOneWithAnyOptimalTrajectory) {
  const auto mdp = chain_mdp({3});
  const auto uniform = PrimitivePolicy::uniform(7, 2);
  const auto optimal = chain_optimal_policy({3});
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto data = generate_dataset(mdp, uniform, 5, seed);
    bool any = false;
    for (const auto& t : data.trajectories) any = any || t.total_return() == 1.0;
    const double wis = wis_estimate(data, optimal).estimate;
    EXPECT_EQ(wis, any ? 1.0 : 0.0);
    checked += any;
  }
  EXPECT_GT(checked, 0);
}

TEST(Estimators, WisOfZeroWeightsIsZero) {
  WeightedData data{{{1.0, 2.0}, {0.0, 1.0}}, {{3.0}, {0.0}}};
  EXPECT_EQ(wis_estimate(data).estimate, 0.0);
}

TEST(Estimators, WisIsAConvexCombinationOfReturns) {
  const auto mdp = testing::noisy_small_mdp();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto data = generate_dataset(mdp, testing::noisy_small_behavior(), 20, seed);
    double lo = 1e300, hi = -1e300;
    for (const auto& t : data.trajectories) {
      lo = std::min(lo, t.total_return());
      hi = std::max(hi, t.total_return());
    }
    const double wis = wis_estimate(data, testing::noisy_small_evaluation()).estimate;
    EXPECT_GE(wis, lo - 1e-12);
    EXPECT_LE(wis, hi + 1e-12);
  }
}

TEST(Estimators, CwpdisWithOneTrajectoryIsItsReturn) {
  const auto mdp = testing::noisy_small_mdp();
  const auto data = generate_dataset(mdp, testing::noisy_small_behavior(), 1, 8);
  EXPECT_NEAR(cwpdis_estimate(data, testing::noisy_small_evaluation()).estimate,
              data.trajectories[0].total_return(), 1e-12);
}

TEST(Estimators, CwpdisPadsEndedTrajectories) {
  // The short trajectory keeps its final weight and contributes reward 0 at step 1.
  const WeightedData data{{{1.0}, {2.0}}, {{1.0, 1.0}, {0.5, 4.0}}};
  EXPECT_DOUBLE_EQ(cwpdis_estimate(data).estimate, (2.0 + 0.5) / 2.5 + (2.0 * 1.0) / (2.0 + 2.0));
}

TEST(Estimators, EmptyDatasetIsAnError) {
  const WeightedData empty;
  EXPECT_THROW(pdis_estimate(empty), std::invalid_argument);
  EXPECT_THROW(wis_estimate(empty), std::invalid_argument);
}

TEST(Estimators, UnbiasedByEnumeration) {
  const auto mdp = testing::two_state_mdp();
  const auto b = testing::two_state_behavior();
  const auto e = testing::two_state_evaluation();
  EXPECT_EQ(count_trajectories(mdp, b), 25u);
  const double truth = exact_value(mdp, e).value;
  EXPECT_NEAR(exact_estimator_expectation(mdp, b, e, Estimator::is), truth, 1e-9);
  EXPECT_NEAR(exact_estimator_expectation(mdp, b, e, Estimator::pdis), truth, 1e-9);

  const auto noisy = testing::noisy_small_mdp();
  const double noisy_truth = exact_value(noisy, testing::noisy_small_evaluation()).value;
  for (auto id : {Estimator::is, Estimator::pdis}) {
    EXPECT_NEAR(exact_estimator_expectation(noisy, testing::noisy_small_behavior(),
                                            testing::noisy_small_evaluation(), id),
                noisy_truth, 1e-9);
  }
}

// --- options PDIS --------------------------------------------------------------

OptionsPolicy one_step_options(std::vector<std::vector<double>> probabilities) {
  std::vector<Option> options;
  for (ActionId a = 0; a < 2; ++a) {
    options.push_back(Option::fixed_length(std::to_string(a),
                                           PrimitivePolicy::preferring(3, 2, a, 1.0), 1));
  }
  return OptionsPolicy(std::move(options), std::move(probabilities));
}

TEST(OptionsPdis, OneStepOptionsEqualFlatPdis) {
  const auto mdp = testing::noisy_small_mdp();
  const auto behavior = one_step_options({{0.5, 0.5}, {0.25, 0.75}, {0.6, 0.4}});
  const auto evaluation = one_step_options({{0.9, 0.1}, {0.5, 0.5}, {0.2, 0.8}});
  const auto data = generate_options_dataset(mdp, behavior, 400, 6);
  const double options = options_pdis_estimate(data, evaluation).estimate;
  const double flat = pdis_estimate(flatten(data), testing::noisy_small_evaluation()).estimate;
  EXPECT_NEAR(options, flat, 1e-12);
}

TEST(OptionsPdis, UnchangedPoliciesGiveMeanReturn) {
  const auto mdp = testing::noisy_small_mdp();
  const auto policy = testing::toy_options_behavior();
  const auto data = generate_options_dataset(mdp, policy, 300, 2);
  double total = 0.0;
  for (const auto& t : data.trajectories) total += t.total_return();
  EXPECT_NEAR(options_pdis_estimate(data, policy).estimate, total / 300.0, 1e-12);
}

TEST(OptionsPdis, WithoutChangedOptionsOnlyOptionRatiosAppear) {
  const auto mdp = testing::noisy_small_mdp();
  const auto behavior = testing::toy_options_behavior();
  const auto evaluation = testing::toy_options_evaluation();
  const auto data = generate_options_dataset(mdp, behavior, 50, 3);
  double expected = 0.0;
  for (const auto& t : data.trajectories) {
    double w = 1.0;
    for (const auto& s : t.segments) {
      w *= evaluation.probability(s.start_observation, s.option) / s.option_probability;
      expected += w * s.accumulated_reward;
    }
  }
  EXPECT_NEAR(options_pdis_estimate(data, evaluation).estimate, expected / 50.0, 1e-12);
}

TEST(OptionsPdis, UnbiasedOnToySemiMdp) {
  const auto mdp = testing::noisy_small_mdp();
  const auto behavior = testing::toy_options_behavior();
  const auto evaluation = testing::toy_options_evaluation();
  const double truth = exact_value(mdp, evaluation).value;
  EXPECT_NEAR(exact_estimator_expectation(mdp, behavior, evaluation, Estimator::options_pdis,
                                          {"left"}),
              truth, 1e-9);
  // Changing only the option probabilities: no sub-policy ratios needed.
  const OptionsPolicy mu_only(testing::toy_options(PrimitivePolicy({{0.7, 0.3}, {0.6, 0.4}, {0.8, 0.2}})),
                              {{0.8, 0.2}, {0.5, 0.5}, {0.1, 0.9}});
  EXPECT_NEAR(exact_estimator_expectation(mdp, behavior, mu_only, Estimator::options_pdis),
              exact_value(mdp, mu_only).value, 1e-9);
  // Ignoring a changed sub-policy is biased.
  EXPECT_GT(std::abs(exact_estimator_expectation(mdp, behavior, evaluation, Estimator::options_pdis) -
                     truth),
            1e-3);
}

TEST(OptionsPdis, MissingOptionGetsWeightZero) {
  const auto mdp = testing::noisy_small_mdp();
  const auto behavior = testing::toy_options_behavior();
  const auto data = generate_options_dataset(mdp, behavior, 100, 5);
  const OptionsPolicy only_pair({testing::toy_options(PrimitivePolicy::uniform(3, 2))[1]}, {{1.0}});
  EXPECT_NO_THROW(options_pdis_estimate(data, only_pair, {"left"}));
}

// --- partitioned PDIS ----------------------------------------------------------

std::size_t funnel_cut(const Trajectory& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.observations[i] == testing::kFunnel) return i;
  }
  return t.size();
}

TEST(PartitionedPdis, CutAtZeroIsPdis) {
  const auto mdp = testing::noisy_small_mdp();
  const auto data = generate_dataset(mdp, testing::noisy_small_behavior(), 200, 2);
  const auto e = testing::noisy_small_evaluation();
  EXPECT_EQ(partitioned_pdis_estimate(data, e, [](const Trajectory&) { return std::size_t{0}; })
                .estimate,
            pdis_estimate(data, e).estimate);
}

TEST(PartitionedPdis, OnPolicyIsTheMeanReturn) {
  const auto mdp = testing::funnel_mdp();
  const auto b = testing::funnel_behavior();
  const auto data = generate_dataset(mdp, b, 200, 2);
  EXPECT_NEAR(partitioned_pdis_estimate(data, b, funnel_cut).estimate, mean_return(data), 1e-12);
}

TEST(PartitionedPdis, CutPastTheEndIsAnError) {
  const WeightedData data{unit_weights({1.0, 2.0})};
  const std::size_t cuts[] = {3};
  EXPECT_THROW(partitioned_pdis_estimate(data, cuts), std::invalid_argument);
}

TEST(PartitionedPdis, FunnelIsUnbiasedWithLowerVariance) {
  const auto mdp = testing::funnel_mdp();
  const auto b = testing::funnel_behavior();
  const auto e = testing::funnel_evaluation();
  const double truth = exact_value(mdp, e).value;
  EXPECT_NEAR(exact_estimator_expectation(mdp, b, e, Estimator::partitioned_pdis, funnel_cut),
              truth, 1e-9);
  // Exact second moments of the single-trajectory estimates.
  double pdis2 = 0.0, part2 = 0.0;
  enumerate_trajectories(mdp, b, [&](const Trajectory& t, double p) {
    const WeightedData one{weigh(t, e)};
    const std::size_t cuts[] = {funnel_cut(t)};
    pdis2 += p * std::pow(pdis_estimate(one).estimate, 2);
    part2 += p * std::pow(partitioned_pdis_estimate(one, cuts).estimate, 2);
  });
  EXPECT_LT(part2 - truth * truth, pdis2 - truth * truth);
}

// --- covariance test -------------------------------------------------------------

TEST(CovarianceSplitBias, Examples) {
  const std::vector<double> ones(5, 1.0), ys = {1.0, 3.0, -2.0, 0.5, 4.0};
  EXPECT_EQ(covariance_split_bias(ones, ys), 0.0);
  EXPECT_DOUBLE_EQ(covariance_split_bias(ys, ys), sample_var(ys));
  EXPECT_THROW(covariance_split_bias(std::vector<double>{1.0}, std::vector<double>{1.0}),
               std::invalid_argument);
}

TEST(CovarianceSplitBias, IndependentCoinsGiveVanishingBias) {
  // W1 and W2 are products of independent coin ratios (2 or 0 with equal
  // chance, mean 1); r depends only on the coins behind W2.
  RandomStream rng(13);
  double previous = 1e300;
  for (std::size_t n : {100u, 10000u, 1000000u}) {
    std::vector<double> w1(n), w2r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rng.uniform() < 0.5 ? 2.0 : 0.0;
      const bool c = rng.uniform() < 0.5;
      w1[i] = a;
      w2r[i] = (c ? 1.5 : 0.5) * (c ? 3.0 : 1.0);
    }
    const double bias = std::abs(covariance_split_bias(w1, w2r));
    EXPECT_LT(bias, 5.0 * 1.5 / std::sqrt(static_cast<double>(n)));
    previous = std::min(previous, bias);
  }
}

// --- INCRIS -------------------------------------------------------------------

TEST(Incris, UnitRatiosGiveTheMeanReturn) {
  const WeightedData data{unit_weights({1.0, 2.0}), unit_weights({0.0, 4.0, 1.0}),
                          unit_weights({3.0})};
  EXPECT_NEAR(incris_estimate(data).estimate, (3.0 + 5.0 + 3.0) / 3.0, 1e-12);
}

TEST(Incris, NeedsTwoTrajectories) {
  const WeightedData one{unit_weights({1.0})};
  EXPECT_THROW(incris_estimate(one), std::invalid_argument);
}

TEST(Incris, FullSuffixRecoversPdis) {
  // One step whose reward tracks the ratio: dropping the ratio is biased, so
  // the full product (k = 1) is chosen and INCRIS equals PDIS.
  WeightedData data;
  for (int i = 0; i < 400; ++i) {
    const bool hit = i % 4 == 0;
    data.push_back({{hit ? 1.0 : 0.0}, {hit ? 3.0 : 1.0 / 3.0}});
  }
  const auto report = incris_estimate(data);
  ASSERT_EQ(report.diagnostics.chosen_suffix_lengths.size(), 1u);
  EXPECT_EQ(report.diagnostics.chosen_suffix_lengths[0], 1);
  EXPECT_NEAR(report.estimate, pdis_estimate(data).estimate, 1e-12);
}

TEST(Incris, TiesGoToLongerSuffixes) {
  // Every statistic is identical for every k when all ratios are 1.
  const WeightedData data{unit_weights({1.0, 2.0, 3.0}), unit_weights({2.0, 0.0, 1.0})};
  const auto report = incris_estimate(data);
  EXPECT_EQ(report.diagnostics.chosen_suffix_lengths, (std::vector<int>{1, 2, 3}));
}

TEST(Incris, SelectsZeroBiasSuffixesAtLargeN) {
  const auto mdp = testing::memory_mdp();
  const auto b = testing::memory_behavior();
  const auto e = testing::memory_evaluation();
  const auto bias = exact_split_biases(mdp, b, e);
  ASSERT_EQ(bias.size(), 3u);
  EXPECT_NEAR(bias[1][0], -2.4, 1e-12);
  EXPECT_NEAR(bias[1][1], -2.4, 1e-12);
  EXPECT_NEAR(bias[1][2], 0.0, 1e-12);
  EXPECT_NEAR(bias[2][0], -0.2, 1e-12);
  EXPECT_NEAR(bias[2][3], 0.0, 1e-12);

  int in_zero_bias_set = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    const auto data = generate_dataset(mdp, b, 100000, derive_seed(77, rep));
    const auto chosen = incris_estimate(data, e).diagnostics.chosen_suffix_lengths;
    bool all = true;
    for (std::size_t t = 0; t < chosen.size(); ++t) {
      all = all && std::abs(bias[t][chosen[t]]) < 1e-12;
    }
    in_zero_bias_set += all;
  }
  EXPECT_GE(in_zero_bias_set, 99);
}

TEST(EstimatorIds, RoundTrip) {
  for (auto e : all_estimators()) EXPECT_EQ(parse_estimator(to_string(e)), e);
  EXPECT_EQ(all_estimators().size(), 7u);
  EXPECT_THROW(parse_estimator("dr"), ConfigError);
}

}  // namespace
}  // namespace ope
