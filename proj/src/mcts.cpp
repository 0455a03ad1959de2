#include "sregret/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sregret {

RewardTransform RewardTransform::negate_and_scale(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("negate_and_scale requires lo < hi");
  return {TransformKind::NEGATE_AND_SCALE, lo, hi};
}

double transform_reward(double raw, const RewardTransform& transform) {
  switch (transform.kind) {
    case TransformKind::IDENTITY:
      if (!(raw >= 0.0 && raw <= 1.0)) {
        throw std::invalid_argument("identity transform requires rewards in [0,1]");
      }
      return raw;
    case TransformKind::NEGATE_AND_SCALE: {
      if (!(transform.lo < transform.hi)) {
        throw std::invalid_argument("negate_and_scale requires lo < hi");
      }
      const double clamped = std::clamp(raw, transform.lo, transform.hi);
      return (transform.hi - clamped) / (transform.hi - transform.lo);
    }
    case TransformKind::NEGATE:
      return -raw;
  }
  throw std::logic_error("unknown transform kind");
}

void SearchNode::expand(std::vector<int> action_labels) {
  if (action_labels.empty()) {
    throw std::runtime_error("model yielded an empty action list at a non-terminal state");
  }
  actions = std::move(action_labels);
  stats.reset(static_cast<int>(actions.size()));
  children.clear();
  children.resize(actions.size());
}

SearchNode& SearchNode::child(int arm, State next) {
  auto& slot = children[static_cast<std::size_t>(arm)];
  for (auto& [state, node] : slot) {
    if (state == next) return *node;
  }
  slot.emplace_back(next, std::make_unique<SearchNode>());
  return *slot.back().second;
}

const SearchNode* SearchNode::find_child(int arm, State next) const {
  const auto& slot = children[static_cast<std::size_t>(arm)];
  for (const auto& [state, node] : slot) {
    if (state == next) return node.get();
  }
  return nullptr;
}

double rollout(const MdpModel& model, SearchNode& node, State state, int depth,
               const SearchParams& params, Rng& rng) {
  if (depth < 1) throw std::invalid_argument("rollout depth starts at 1");
  if (model.is_terminal(state) || depth > params.depth_cutoff) return 0.0;

  if (!node.expanded()) node.expand(model.actions(state));
  int arm;
  if (node.stats.num_arms() == 1) {
    arm = 0;  // select() requires two arms; a single action needs no policy
  } else {
    const PolicySpec& policy = depth == 1 ? params.root_policy : params.tree_policy;
    arm = select(node.stats, policy, rng);
  }

  const Step step = model.sample_transition(state, node.actions[static_cast<std::size_t>(arm)], rng);
  const double reward = transform_reward(step.reward, params.transform);
  const double value = reward + rollout(model, node.child(arm, step.next), step.next,
                                        depth + 1, params, rng);
  node.stats.add(arm, value);
  return value;
}

namespace {

std::unique_ptr<SearchNode> run_rollouts(
    const MdpModel& model, const SearchParams& params,
    std::span<const std::int64_t> checkpoints, Rng& rng,
    const std::function<void(const SearchNode&, std::int64_t)>& visit) {
  if (checkpoints.empty()) throw std::invalid_argument("no checkpoints given");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("checkpoints must be ascending");
  }
  if (params.depth_cutoff < 1) throw std::invalid_argument("depth_cutoff must be >= 1");
  params.root_policy.validate();
  params.tree_policy.validate();

  if (checkpoints.front() < 1) throw std::invalid_argument("checkpoints must be positive");

  const State root_state = model.initial_state();
  auto root = std::make_unique<SearchNode>();
  root->expand(model.actions(root_state));

  std::size_t next_checkpoint = 0;
  const std::int64_t total = checkpoints.back();
  for (std::int64_t done = 1; done <= total; ++done) {
    rollout(model, *root, root_state, 1, params, rng);
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == done) {
      if (visit) visit(*root, done);
      ++next_checkpoint;
    }
  }
  return root;
}

}  // namespace

void search_with_checkpoints(const MdpModel& model, const SearchParams& params,
                             std::span<const std::int64_t> checkpoints, Rng& rng,
                             const std::function<void(const SearchNode&, std::int64_t)>& visit) {
  run_rollouts(model, params, checkpoints, rng, visit);
}

SearchResult search(const MdpModel& model, const SearchParams& params, Rng& rng) {
  if (params.budget < static_cast<std::int64_t>(model.actions(model.initial_state()).size())) {
    throw std::invalid_argument("budget must cover at least one pull per root action");
  }
  const std::int64_t budget[] = {params.budget};
  SearchResult result;
  result.root = run_rollouts(model, params, budget, rng, nullptr);
  result.action =
      result.root->actions[static_cast<std::size_t>(recommend(result.root->stats))];
  return result;
}

}  // namespace sregret
