#include "sregret/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sregret {

namespace {

void check_arm_index(const BanditView& view, int arm) {
  if (arm < 0 || arm >= view.num_arms()) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range [0, " +
                            std::to_string(view.num_arms()) + ")");
  }
}

// Two-pass argmax with uniform tie-breaking; recomputes scores on the second
// pass only when there is an actual tie.
template <typename ScoreFn>
int argmax_random_ties(int count, ScoreFn&& score, Rng& rng) {
  double best = -std::numeric_limits<double>::infinity();
  int best_index = -1;
  int ties = 0;
  for (int i = 0; i < count; ++i) {
    const double s = score(i);
    if (s > best) {
      best = s;
      best_index = i;
      ties = 1;
    } else if (s == best) {
      ++ties;
    }
  }
  if (ties <= 1) return best_index;
  int pick = uniform_int(rng, 0, ties - 1);
  for (int i = 0; i < count; ++i) {
    if (score(i) == best && pick-- == 0) return i;
  }
  return best_index;  // unreachable
}

}  // namespace

void PolicySpec::validate() const {
  switch (kind) {
    case PolicyKind::UCB:
    case PolicyKind::UCB_SQRT:
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("exploration factor c must be positive");
      }
      break;
    case PolicyKind::EPS_GREEDY:
      if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0,1)");
      }
      break;
    case PolicyKind::UNIFORM:
    case PolicyKind::VOI_AWARE:
      break;
  }
}

void BanditView::record(int arm, double reward) {
  check_arm_index(*this, arm);
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("reward " + std::to_string(reward) + " outside [0,1]");
  }
  add(arm, reward);
}

void BanditView::add(int arm, double value) {
  check_arm_index(*this, arm);
  if (!std::isfinite(value)) {
    throw std::invalid_argument("non-finite value");
  }
  ArmStats& a = arms_[static_cast<std::size_t>(arm)];
  a.pulls += 1;
  a.reward_sum += value;
  total_pulls_ += 1;
}

double ucb_score(double mean, double n_i, double n, double c) {
  return mean + std::sqrt(c * std::log(n) / n_i);
}

double ucb_sqrt_score(double mean, double n_i, double n, double c) {
  return mean + std::sqrt(c * std::sqrt(n) / n_i);
}

int select(const BanditView& view, const PolicySpec& spec, Rng& rng) {
  const int num_arms = view.num_arms();
  if (num_arms < 2) {
    throw std::invalid_argument("select requires at least 2 arms");
  }
  spec.validate();

  for (int i = 0; i < num_arms; ++i) {
    if (view.arm(i).pulls == 0) return i;  // forced pull, lowest index first
  }

  switch (spec.kind) {
    case PolicyKind::UCB: {
      const double n = static_cast<double>(view.total_pulls());
      const double log_n = std::log(n);
      return argmax_random_ties(
          num_arms,
          [&](int i) {
            const ArmStats& a = view.arm(i);
            return a.mean() + std::sqrt(spec.c * log_n / static_cast<double>(a.pulls));
          },
          rng);
    }
    case PolicyKind::UCB_SQRT: {
      const double sqrt_n = std::sqrt(static_cast<double>(view.total_pulls()));
      return argmax_random_ties(
          num_arms,
          [&](int i) {
            const ArmStats& a = view.arm(i);
            return a.mean() + std::sqrt(spec.c * sqrt_n / static_cast<double>(a.pulls));
          },
          rng);
    }
    case PolicyKind::EPS_GREEDY: {
      const int best = argmax_random_ties(
          num_arms, [&](int i) { return view.arm(i).mean(); }, rng);
      if (uniform_unit(rng) < spec.epsilon) return best;
      int other = uniform_int(rng, 0, num_arms - 2);
      return other < best ? other : other + 1;
    }
    case PolicyKind::UNIFORM:
      return uniform_int(rng, 0, num_arms - 1);
    case PolicyKind::VOI_AWARE: {
      // alpha/beta are identified with deterministic lowest-index ties, the
      // same rule voi_estimates uses; only the final argmax is randomized.
      int alpha = 0;
      for (int i = 1; i < num_arms; ++i) {
        if (view.arm(i).mean() > view.arm(alpha).mean()) alpha = i;
      }
      int beta = alpha == 0 ? 1 : 0;
      for (int i = 0; i < num_arms; ++i) {
        if (i != alpha && view.arm(i).mean() > view.arm(beta).mean()) beta = i;
      }
      const double best_mean = view.arm(alpha).mean();
      const double second_mean = view.arm(beta).mean();
      return argmax_random_ties(
          num_arms,
          [&](int i) {
            if (i == alpha) return voi_best_arm(best_mean, view.arm(alpha).pulls, second_mean);
            return voi_challenger(best_mean, view.arm(i).mean(), view.arm(i).pulls);
          },
          rng);
    }
  }
  throw std::logic_error("unknown policy kind");
}

int recommend(const BanditView& view) {
  int best = -1;
  for (int i = 0; i < view.num_arms(); ++i) {
    if (view.arm(i).pulls == 0) continue;
    if (best < 0 || view.arm(i).mean() > view.arm(best).mean()) best = i;
  }
  if (best < 0) throw std::logic_error("recommend called with no pulled arm");
  return best;
}

int recommend(const BanditView& view, Rng& rng) {
  double best = -std::numeric_limits<double>::infinity();
  int best_index = -1;
  int ties = 0;
  for (int i = 0; i < view.num_arms(); ++i) {
    if (view.arm(i).pulls == 0) continue;
    const double m = view.arm(i).mean();
    if (m > best) {
      best = m;
      best_index = i;
      ties = 1;
    } else if (m == best) {
      ++ties;
    }
  }
  if (best_index < 0) throw std::logic_error("recommend called with no pulled arm");
  if (ties <= 1) return best_index;
  int pick = uniform_int(rng, 0, ties - 1);
  for (int i = 0; i < view.num_arms(); ++i) {
    if (view.arm(i).pulls > 0 && view.arm(i).mean() == best && pick-- == 0) return i;
  }
  return best_index;  // unreachable
}

double voi_best_arm(double best_mean, std::int64_t best_pulls, double second_mean) {
  const double gap = best_mean - second_mean;
  const double n = static_cast<double>(best_pulls);
  return second_mean / (n + 1.0) * std::exp(-2.0 * gap * gap * n);
}

double voi_challenger(double best_mean, double arm_mean, std::int64_t arm_pulls) {
  const double gap = best_mean - arm_mean;
  const double n = static_cast<double>(arm_pulls);
  return (1.0 - best_mean) / (n + 1.0) * std::exp(-2.0 * gap * gap * n);
}

std::vector<double> voi_estimates(const BanditView& view) {
  const int num_arms = view.num_arms();
  if (num_arms < 2) {
    throw std::invalid_argument("voi_estimates requires at least 2 arms");
  }
  int alpha = 0;
  for (int i = 1; i < num_arms; ++i) {
    if (view.arm(i).mean() > view.arm(alpha).mean()) alpha = i;
  }
  int beta = alpha == 0 ? 1 : 0;
  for (int i = 0; i < num_arms; ++i) {
    if (i != alpha && view.arm(i).mean() > view.arm(beta).mean()) beta = i;
  }
  std::vector<double> out(static_cast<std::size_t>(num_arms));
  const double best_mean = view.arm(alpha).mean();
  for (int i = 0; i < num_arms; ++i) {
    out[static_cast<std::size_t>(i)] =
        i == alpha ? voi_best_arm(best_mean, view.arm(alpha).pulls, view.arm(beta).mean())
                   : voi_challenger(best_mean, view.arm(i).mean(), view.arm(i).pulls);
  }
  return out;
}

TrueArms::TrueArms(std::vector<double> m) : means(std::move(m)) {
  if (means.empty()) throw std::invalid_argument("TrueArms needs at least one mean");
  for (double mu : means) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw std::invalid_argument("true means must lie in [0,1]");
    }
  }
  best_arm_ = static_cast<int>(
      std::max_element(means.begin(), means.end()) - means.begin());
  best_mean_ = means[static_cast<std::size_t>(best_arm_)];
}

std::vector<double> TrueArms::gaps() const {
  std::vector<double> out(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) out[i] = best_mean_ - means[i];
  return out;
}

double realized_regret(const TrueArms& truth, int recommended) {
  if (recommended < 0 || recommended >= truth.num_arms()) {
    throw std::out_of_range("recommended arm out of range");
  }
  return truth.gap(recommended);
}

void BoundParams::validate() const {
  if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
}

double bound_eps_greedy(const TrueArms& truth, double n, double epsilon,
                        const BoundParams& params) {
  params.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  if (!(n >= 0.0)) throw std::invalid_argument("n must be nonnegative");
  const double k = static_cast<double>(truth.num_arms());
  const double root = 1.0 + std::sqrt((k - 1.0) * epsilon / (1.0 - epsilon));
  const double denom = root * root;
  double sum = 0.0;
  for (int i = 0; i < truth.num_arms(); ++i) {
    const double gap = truth.gap(i);
    sum += gap * std::exp(-2.0 * gap * gap * n * epsilon / denom);
  }
  return 2.0 * params.gamma * sum;
}

double bound_uniform(const TrueArms& truth, double n, const BoundParams& params) {
  params.validate();
  if (!(n >= 0.0)) throw std::invalid_argument("n must be nonnegative");
  const double k = static_cast<double>(truth.num_arms());
  double sum = 0.0;
  for (int i = 0; i < truth.num_arms(); ++i) {
    const double gap = truth.gap(i);
    sum += gap * std::exp(-gap * gap * n / k);
  }
  return 2.0 * params.gamma * sum;
}

double bound_ucb_sqrt(const TrueArms& truth, double n, double c,
                      const BoundParams& params) {
  params.validate();
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(n >= 0.0)) throw std::invalid_argument("n must be nonnegative");
  double sum = 0.0;
  for (int i = 0; i < truth.num_arms(); ++i) {
    sum += truth.gap(i);
  }
  return 2.0 * params.gamma * sum * std::exp(-c * std::sqrt(n) / 2.0);
}

}  // namespace sregret
