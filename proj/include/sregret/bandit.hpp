#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sregret/rng.hpp"

namespace sregret {

enum class PolicyKind { UCB, UCB_SQRT, EPS_GREEDY, UNIFORM, VOI_AWARE };

// Selection rule plus its parameters. Parameters not used by the selected
// kind are ignored.
struct PolicySpec {
  PolicyKind kind = PolicyKind::UCB;
  double c = 2.0;        // exploration factor (UCB, UCB_SQRT)
  double epsilon = 0.5;  // probability of pulling the current best (EPS_GREEDY)

  void validate() const;  // throws std::invalid_argument
};

// Sufficient statistics for one arm.
struct ArmStats {
  std::int64_t pulls = 0;
  double reward_sum = 0.0;

  double mean() const {
    return pulls > 0 ? reward_sum / static_cast<double>(pulls)
                     : std::numeric_limits<double>::quiet_NaN();
  }
};

// Ordered arm statistics plus the total pull count n.
class BanditView {
 public:
  BanditView() = default;
  explicit BanditView(int num_arms) : arms_(static_cast<std::size_t>(num_arms)) {}

  void reset(int num_arms) {
    arms_.assign(static_cast<std::size_t>(num_arms), ArmStats{});
    total_pulls_ = 0;
  }

  int num_arms() const { return static_cast<int>(arms_.size()); }
  const ArmStats& arm(int i) const { return arms_[static_cast<std::size_t>(i)]; }
  std::int64_t total_pulls() const { return total_pulls_; }

  // Records a bounded reward; rejects rewards outside [0,1].
  void record(int arm, double reward);

  // Accumulates an unbounded finite value. Tree back-propagation uses this:
  // a rollout return is a sum of per-step rewards and may leave [0,1].
  void add(int arm, double value);

 private:
  std::vector<ArmStats> arms_;
  std::int64_t total_pulls_ = 0;
};

// mean + sqrt(c * log(n) / n_i). Callers never pass n_i = 0; unpulled arms
// are handled by the forced-pull rule in select().
double ucb_score(double mean, double n_i, double n, double c);

// mean + sqrt(c * sqrt(n) / n_i). Grows the exploration term faster than
// ucb_score, so the current best is sampled less often.
double ucb_sqrt_score(double mean, double n_i, double n, double c);

// Picks the next arm to pull. If any arm is unpulled the lowest-index such
// arm is returned regardless of kind. Ties among maximizers are broken
// uniformly at random via rng.
int select(const BanditView& view, const PolicySpec& spec, Rng& rng);

// argmax of sample means over pulled arms, lowest index on ties.
int recommend(const BanditView& view);

// argmax of sample means over pulled arms, ties broken uniformly at random.
int recommend(const BanditView& view, Rng& rng);

// Value-of-information estimates for pulling each arm, given current stats.
// best/second refer to the two greatest sample means (lowest index on ties).
double voi_best_arm(double best_mean, std::int64_t best_pulls, double second_mean);
double voi_challenger(double best_mean, double arm_mean, std::int64_t arm_pulls);
std::vector<double> voi_estimates(const BanditView& view);

// Ground-truth arm means of a problem instance.
struct TrueArms {
  std::vector<double> means;

  explicit TrueArms(std::vector<double> m);
  int num_arms() const { return static_cast<int>(means.size()); }
  double best_mean() const { return best_mean_; }
  int best_arm() const { return best_arm_; }
  double gap(int i) const { return best_mean_ - means[static_cast<std::size_t>(i)]; }
  std::vector<double> gaps() const;

 private:
  double best_mean_ = 0.0;
  int best_arm_ = 0;
};

// Gap of the recommended arm: mu_* - mu_j.
double realized_regret(const TrueArms& truth, int recommended);

// Envelope parameters for the regret bounds. eta is carried for labeling
// only: the bounds hold with probability at least 1 - eta for large n, and
// eta does not enter the bound value.
struct BoundParams {
  double gamma = 1.0;  // >= 1; 1 gives the bare asymptotic envelope
  double eta = 0.1;    // in (0,1)

  void validate() const;
};

// 2*gamma * sum_i gap_i * exp(-2*gap_i^2*n*eps / (1+sqrt((K-1)eps/(1-eps)))^2)
double bound_eps_greedy(const TrueArms& truth, double n, double epsilon,
                        const BoundParams& params);

// 2*gamma * sum_i gap_i * exp(-gap_i^2*n/K)
double bound_uniform(const TrueArms& truth, double n, const BoundParams& params);

// 2*gamma * sum_i gap_i * exp(-c*sqrt(n)/2)
double bound_ucb_sqrt(const TrueArms& truth, double n, double c,
                      const BoundParams& params);

}  // namespace sregret
