#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sregret/bandit.hpp"
#include "sregret/rng.hpp"

namespace sregret {

// Opaque state handle; each model defines its own encoding.
using State = std::uint64_t;

struct Step {
  State next = 0;
  double reward = 0.0;
};

// Generative-model contract the search engine samples from. Actions are
// integer labels whose meaning is model-specific (arm index, move direction).
class MdpModel {
 public:
  virtual ~MdpModel() = default;

  virtual State initial_state() const = 0;
  virtual std::vector<int> actions(State state) const = 0;
  virtual Step sample_transition(State state, int action, Rng& rng) const = 0;
  virtual bool is_terminal(State state) const = 0;

  // Ground-truth value of taking `action` in `state`, when the domain knows
  // it. Evaluation-only; the engine never calls this.
  virtual std::optional<double> true_action_value(State state, int action) const {
    (void)state;
    (void)action;
    return std::nullopt;
  }
};

enum class TransformKind { IDENTITY, NEGATE_AND_SCALE, NEGATE };

// Maps a model's raw reward into the value the engine accumulates.
// IDENTITY passes through rewards already in [0,1]. NEGATE_AND_SCALE maps a
// bounded cost in [lo,hi] to (hi-raw)/(hi-lo), so lower cost means higher
// reward. NEGATE returns -raw: cost domains with variable-length episodes
// need the per-step sign flipped without an additive shift, otherwise longer
// trajectories accumulate more transformed reward than cheaper ones.
struct RewardTransform {
  TransformKind kind = TransformKind::IDENTITY;
  double lo = 0.0;
  double hi = 1.0;

  static RewardTransform identity() { return {}; }
  static RewardTransform negate_and_scale(double lo, double hi);
  static RewardTransform negate() { return {TransformKind::NEGATE, 0.0, 0.0}; }
};

double transform_reward(double raw, const RewardTransform& transform);

// Per-state statistics tree. Children are keyed by (action, sampled next
// state); statistics aggregate per action at the parent.
struct SearchNode {
  std::vector<int> actions;  // action labels, fixed on first expansion
  BanditView stats;
  std::vector<std::vector<std::pair<State, std::unique_ptr<SearchNode>>>> children;

  bool expanded() const { return !actions.empty(); }
  std::int64_t visits() const { return stats.total_pulls(); }

  void expand(std::vector<int> action_labels);
  SearchNode& child(int arm, State next);  // find-or-create
  const SearchNode* find_child(int arm, State next) const;
};

struct SearchParams {
  PolicySpec root_policy;   // selects the first step of a rollout
  PolicySpec tree_policy;   // selects every later step (normally UCB)
  int depth_cutoff = 1;
  std::int64_t budget = 1;  // number of rollouts
  RewardTransform transform;
};

// One two-stage rollout from `state` downward. Returns the cumulative
// transformed reward from this node to the leaf; updates the statistics of
// every node along the path with the value observed below it.
double rollout(const MdpModel& model, SearchNode& node, State state, int depth,
               const SearchParams& params, Rng& rng);

struct SearchResult {
  int action = -1;  // recommended action label
  std::unique_ptr<SearchNode> root;
};

// Runs params.budget rollouts from the model's initial state and recommends
// the root action with the greatest sample mean (lowest index on ties).
SearchResult search(const MdpModel& model, const SearchParams& params, Rng& rng);

// As search(), invoking visit(root, budget_so_far) at each checkpoint.
// Checkpoints must be ascending; the last one bounds the rollout count.
void search_with_checkpoints(const MdpModel& model, const SearchParams& params,
                             std::span<const std::int64_t> checkpoints, Rng& rng,
                             const std::function<void(const SearchNode&, std::int64_t)>& visit);

}  // namespace sregret
