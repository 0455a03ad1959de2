#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "sregret/bandit.hpp"

using namespace sregret;

namespace {

BanditView view_from(const std::vector<std::pair<std::int64_t, double>>& arms) {
  BanditView view(static_cast<int>(arms.size()));
  // Feed the exact (pulls, sum) pairs through add() so means are bit-exact.
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const auto& [pulls, sum] = arms[i];
    for (std::int64_t k = 0; k < pulls; ++k) {
      view.add(static_cast<int>(i), sum / static_cast<double>(pulls));
    }
  }
  return view;
}

}  // namespace

TEST_CASE("record updates one arm and leaves the rest untouched") {
  BanditView view(3);
  view.record(0, 1.0);
  CHECK(view.arm(0).pulls == 1);
  CHECK(view.arm(0).reward_sum == 1.0);
  CHECK(view.arm(0).mean() == 1.0);
  CHECK(view.total_pulls() == 1);

  view.record(0, 0.0);
  CHECK(view.arm(0).pulls == 2);
  CHECK(view.arm(0).mean() == 0.5);

  const ArmStats before = view.arm(0);
  view.record(1, 0.7);
  CHECK(view.arm(0).pulls == before.pulls);
  CHECK(view.arm(0).reward_sum == before.reward_sum);
  CHECK(view.total_pulls() == 3);

  CHECK(std::isnan(view.arm(2).mean()));
  CHECK_THROWS_AS(view.record(3, 0.5), std::out_of_range);
  CHECK_THROWS_AS(view.record(0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(view.record(0, -0.1), std::invalid_argument);
}

TEST_CASE("ucb score matches hand values") {
  CHECK(ucb_score(0.5, 1, 1, 2) == 0.5);  // log(1) = 0
  CHECK(ucb_score(0.0, 2, std::exp(2.0), 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ucb_score(0.3, 4, 100, 2) ==
        doctest::Approx(1.8174271293851464).epsilon(1e-9));
}

TEST_CASE("ucb sqrt score matches hand values") {
  CHECK(ucb_sqrt_score(0.0, 1, 1, 1) == 1.0);
  CHECK(ucb_sqrt_score(0.5, 2, 16, 2) == 2.5);
  CHECK(ucb_sqrt_score(0.7, 5, 81, 0) == 0.7);  // zero exploration term
}

TEST_CASE("score monotonicity in the total pull count") {
  double prev_ucb = ucb_score(0.4, 3, 3, 2);
  double prev_sqrt = ucb_sqrt_score(0.4, 3, 3, 2);
  for (int n = 4; n <= 200; ++n) {
    const double u = ucb_score(0.4, 3, n, 2);
    const double s = ucb_sqrt_score(0.4, 3, n, 2);
    CHECK(u > prev_ucb);
    CHECK(s > prev_sqrt);
    if (n >= 3) CHECK(s >= u);  // sqrt(n) >= log(n)
    prev_ucb = u;
    prev_sqrt = s;
  }
}

TEST_CASE("select forces unpulled arms first, lowest index") {
  Rng rng(7);
  BanditView view(3);
  view.record(0, 1.0);
  for (PolicyKind kind : {PolicyKind::UCB, PolicyKind::UCB_SQRT, PolicyKind::EPS_GREEDY,
                          PolicyKind::UNIFORM, PolicyKind::VOI_AWARE}) {
    PolicySpec spec;
    spec.kind = kind;
    CHECK(select(view, spec, rng) == 1);
  }
  BanditView single(1);
  CHECK_THROWS_AS(select(single, PolicySpec{}, rng), std::invalid_argument);
}

TEST_CASE("eps-greedy selection frequencies match the definition") {
  // arm 0 is the current best; eps=0.5 over K=3 gives [0.5, 0.25, 0.25].
  BanditView view = view_from({{10, 9.0}, {10, 5.0}, {10, 1.0}});
  PolicySpec spec;
  spec.kind = PolicyKind::EPS_GREEDY;
  spec.epsilon = 0.5;

  Rng rng(123);
  const int draws = 100000;
  std::array<int, 3> counts{};
  for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(select(view, spec, rng))]++;

  const std::array<double, 3> expected{0.5, 0.25, 0.25};
  for (int i = 0; i < 3; ++i) {
    const double p = expected[static_cast<std::size_t>(i)];
    const double se = std::sqrt(p * (1.0 - p) / draws);
    CHECK(std::abs(counts[static_cast<std::size_t>(i)] / double(draws) - p) < 3.0 * se);
  }
}

TEST_CASE("eps = 1/K degenerates to uniform sampling") {
  BanditView view = view_from({{5, 4.0}, {5, 3.0}, {5, 2.0}, {5, 1.0}});
  PolicySpec spec;
  spec.kind = PolicyKind::EPS_GREEDY;
  spec.epsilon = 0.25;

  Rng rng(99);
  const int draws = 100000;
  std::array<int, 4> counts{};
  for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(select(view, spec, rng))]++;
  const double se = std::sqrt(0.25 * 0.75 / draws);
  for (int count : counts) {
    CHECK(std::abs(count / double(draws) - 0.25) < 3.0 * se);
  }
}

TEST_CASE("ucb selection is invariant under arm permutation") {
  // Arms 0 and 2 tie for the top UCB score; ties split uniformly.
  BanditView view = view_from({{2, 1.0}, {2, 0.4}, {2, 1.0}, {2, 0.2}});
  PolicySpec spec;
  spec.kind = PolicyKind::UCB;
  spec.c = 2.0;

  const std::array<int, 4> perm{2, 3, 0, 1};  // permuted[i] = original perm[i]
  BanditView permuted = view_from({{2, 1.0}, {2, 0.2}, {2, 1.0}, {2, 0.4}});

  const int draws = 100000;
  Rng rng_a(2024), rng_b(4048);
  std::array<int, 4> direct{}, mapped{};
  for (int i = 0; i < draws; ++i) {
    direct[static_cast<std::size_t>(select(view, spec, rng_a))]++;
    mapped[static_cast<std::size_t>(perm[static_cast<std::size_t>(select(permuted, spec, rng_b))])]++;
  }
  CHECK(direct[1] == 0);
  CHECK(direct[3] == 0);
  CHECK(mapped[1] == 0);
  CHECK(mapped[3] == 0);

  // Two-sample homogeneity chi-square over the two tied cells, df = 1;
  // critical value at p = 0.001 is 10.828.
  double chi2 = 0.0;
  for (int i : {0, 2}) {
    const double a = direct[static_cast<std::size_t>(i)];
    const double b = mapped[static_cast<std::size_t>(i)];
    chi2 += (a - b) * (a - b) / (a + b);
  }
  CHECK(chi2 < 10.828);
}

TEST_CASE("recommend returns the lowest-index mean maximizer") {
  CHECK(recommend(view_from({{10, 2.0}, {10, 9.0}, {10, 9.0}})) == 1);
  CHECK(recommend(view_from({{10, 4.0}, {10, 7.0}})) == 1);

  BanditView partial(3);
  partial.record(2, 0.3);
  CHECK(recommend(partial) == 2);  // only pulled arm

  BanditView empty(2);
  CHECK_THROWS_AS(recommend(empty), std::logic_error);
}

TEST_CASE("randomized recommend splits exact ties uniformly") {
  BanditView view = view_from({{4, 2.0}, {4, 2.0}, {4, 1.0}});
  Rng rng(5);
  const int draws = 100000;
  std::array<int, 3> counts{};
  for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(recommend(view, rng))]++;
  CHECK(counts[2] == 0);
  const double se = std::sqrt(0.25 / draws);
  CHECK(std::abs(counts[0] / double(draws) - 0.5) < 3.0 * se);
}

TEST_CASE("voi estimates match hand values") {
  CHECK(voi_best_arm(0.5, 0, 0.5) == 0.5);  // exp(0) = 1, denominator 1
  CHECK(voi_best_arm(0.6, 4, 0.5) ==
        doctest::Approx(0.09231163463866358).epsilon(1e-9));
  CHECK(voi_challenger(0.8, 0.5, 9) ==
        doctest::Approx(0.0039579739816722936).epsilon(1e-9));

  BanditView view = view_from({{4, 2.4}, {5, 2.5}});
  const auto estimates = voi_estimates(view);
  REQUIRE(estimates.size() == 2);
  CHECK(estimates[0] == doctest::Approx(0.09231163463866358).epsilon(1e-9));
  CHECK(estimates[1] == voi_challenger(0.6, 0.5, 5));
}

TEST_CASE("voi estimates stay in [0,1] and decrease in the pull count") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::int64_t, double>> arms;
    const int num_arms = uniform_int(rng, 2, 6);
    for (int i = 0; i < num_arms; ++i) {
      const std::int64_t pulls = uniform_int(rng, 1, 30);
      arms.emplace_back(pulls, uniform_unit(rng) * static_cast<double>(pulls));
    }
    for (double v : voi_estimates(view_from(arms))) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  double prev_gap = voi_challenger(0.8, 0.5, 1);
  double prev_tied = voi_challenger(0.5, 0.5, 1);
  for (std::int64_t n = 2; n <= 60; ++n) {
    const double with_gap = voi_challenger(0.8, 0.5, n);
    const double tied = voi_challenger(0.5, 0.5, n);
    CHECK(with_gap < prev_gap);
    CHECK(tied < prev_tied);
    CHECK(tied == 0.5 / (static_cast<double>(n) + 1.0));  // unit exponential factor
    prev_gap = with_gap;
    prev_tied = tied;
  }
}

TEST_CASE("true arms expose gaps with one exact zero") {
  const TrueArms truth({0.9, 0.5, 0.2});
  CHECK(truth.best_mean() == 0.9);
  CHECK(truth.best_arm() == 0);
  const auto gaps = truth.gaps();
  CHECK(gaps[0] == 0.0);
  CHECK(realized_regret(truth, 2) == doctest::Approx(0.7));
  CHECK(realized_regret(truth, 0) == 0.0);
  CHECK_THROWS_AS(realized_regret(truth, 3), std::out_of_range);
}

TEST_CASE("bound calculators match hand values") {
  const BoundParams envelope{1.0, 0.1};
  const TrueArms two({1.0, 0.8});  // gaps [0, 0.2]

  CHECK(bound_eps_greedy(two, 100, 0.5, envelope) ==
        doctest::Approx(0.14715177646857693).epsilon(1e-9));
  CHECK(bound_uniform(two, 100, envelope) ==
        doctest::Approx(0.05413411329464508).epsilon(1e-9));
  CHECK(bound_ucb_sqrt(two, 100, 2, envelope) ==
        doctest::Approx(1.8159971904993941e-5).epsilon(1e-9));

  const TrueArms flat({0.4, 0.4, 0.4});  // all gaps zero
  CHECK(bound_eps_greedy(flat, 50, 0.5, envelope) == 0.0);
  CHECK(bound_uniform(flat, 50, envelope) == 0.0);
  CHECK(bound_ucb_sqrt(flat, 50, 2, envelope) == 0.0);

  CHECK_THROWS_AS(bound_eps_greedy(two, 100, 0.0, envelope), std::invalid_argument);
  CHECK_THROWS_AS(bound_eps_greedy(two, 100, 1.0, envelope), std::invalid_argument);
  CHECK_THROWS_AS(bound_ucb_sqrt(two, 100, 0.0, envelope), std::invalid_argument);
}

TEST_CASE("bounds are nonnegative, equal 2*gamma*sum(gaps) at n=0, and decrease in n") {
  const BoundParams params{2.0, 0.05};
  const TrueArms truth({0.95, 0.6, 0.4, 0.1});
  const auto gaps = truth.gaps();
  const double gap_sum = std::accumulate(gaps.begin(), gaps.end(), 0.0);

  CHECK(bound_eps_greedy(truth, 0, 0.5, params) == doctest::Approx(2.0 * 2.0 * gap_sum));
  CHECK(bound_uniform(truth, 0, params) == doctest::Approx(2.0 * 2.0 * gap_sum));
  CHECK(bound_ucb_sqrt(truth, 0, 2, params) == doctest::Approx(2.0 * 2.0 * gap_sum));

  double prev_eps = bound_eps_greedy(truth, 0, 0.5, params);
  double prev_uni = bound_uniform(truth, 0, params);
  double prev_sqrt = bound_ucb_sqrt(truth, 0, 2, params);
  for (double n : {10.0, 50.0, 200.0, 1000.0, 5000.0}) {
    const double e = bound_eps_greedy(truth, n, 0.5, params);
    const double u = bound_uniform(truth, n, params);
    const double s = bound_ucb_sqrt(truth, n, 2, params);
    CHECK(e >= 0.0);
    CHECK(u >= 0.0);
    CHECK(s >= 0.0);
    CHECK(e < prev_eps);
    CHECK(u < prev_uni);
    CHECK(s < prev_sqrt);
    prev_eps = e;
    prev_uni = u;
    prev_sqrt = s;
  }
}

TEST_CASE("half-greedy and uniform envelopes share their decay rate for many arms") {
  // With one nonzero gap the bounds are pure exponentials, so the decay-rate
  // ratio is log(bound_eps/A) / log(bound_uniform/A) with A = 2*gamma*gap.
  const BoundParams params{1.0, 0.1};
  const double n = 1000.0;
  double previous_ratio = 0.0;
  for (int k : {10, 100, 1000, 10000}) {
    std::vector<double> means(static_cast<std::size_t>(k), 0.6);
    means[0] = 0.9;
    const TrueArms truth(means);
    const double amplitude = 2.0 * (static_cast<double>(k) - 1.0) * 0.3;
    const double eps_rate = -std::log(bound_eps_greedy(truth, n, 0.5, params) / amplitude);
    const double uniform_rate = -std::log(bound_uniform(truth, n, params) / amplitude);
    const double ratio = eps_rate / uniform_rate;
    CHECK(ratio > previous_ratio);  // approaches 1 from below as K grows
    CHECK(ratio < 1.0);
    previous_ratio = ratio;
  }
  CHECK(previous_ratio > 0.95);
}

TEST_CASE("two-arm one-pull-each regret matches the enumerated expectation") {
  const TrueArms truth({0.9, 0.1});

  // Independent oracle: enumerate the four Bernoulli outcomes; exact ties
  // between the two sample means are split half/half.
  double expected = 0.0;
  for (int r0 : {0, 1}) {
    for (int r1 : {0, 1}) {
      const double prob = (r0 == 1 ? 0.9 : 0.1) * (r1 == 1 ? 0.1 : 0.9);
      double regret;
      if (r0 > r1) {
        regret = 0.0;
      } else if (r1 > r0) {
        regret = truth.gap(1);
      } else {
        regret = 0.5 * truth.gap(1);
      }
      expected += prob * regret;
    }
  }
  CHECK(expected == doctest::Approx(0.08).epsilon(1e-12));

  Rng rng(31337);
  const int reps = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    BanditView view(2);
    view.record(0, uniform_unit(rng) < 0.9 ? 1.0 : 0.0);
    view.record(1, uniform_unit(rng) < 0.1 ? 1.0 : 0.0);
    const double regret = realized_regret(truth, recommend(view, rng));
    sum += regret;
    sum_sq += regret * regret;
  }
  const double mean = sum / reps;
  const double var = (sum_sq - sum * sum / reps) / (reps - 1);
  const double sigma = std::sqrt(var / reps);
  CHECK(std::abs(mean - expected) < 3.0 * sigma);
}
