#include "sregret/environments.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sregret {

namespace {

void check_num_arms(int num_arms) {
  if (num_arms < 2) throw std::invalid_argument("need at least 2 arms");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double bernoulli_draw(double mean, Rng& rng) {
  return uniform_unit(rng) < mean ? 1.0 : 0.0;
}

// States: 0 = root, 1 = terminal.
class BernoulliBanditModel final : public MdpModel {
 public:
  explicit BernoulliBanditModel(BernoulliBandit bandit) : bandit_(std::move(bandit)) {
    check_num_arms(bandit_.num_arms());
  }

  State initial_state() const override { return 0; }
  bool is_terminal(State state) const override { return state == 1; }

  std::vector<int> actions(State) const override {
    std::vector<int> out(static_cast<std::size_t>(bandit_.num_arms()));
    for (int i = 0; i < bandit_.num_arms(); ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
  }

  Step sample_transition(State, int action, Rng& rng) const override {
    return {1, bernoulli_draw(bandit_.means[static_cast<std::size_t>(action)], rng)};
  }

  std::optional<double> true_action_value(State state, int action) const override {
    if (state != 0) return std::nullopt;
    return bandit_.means[static_cast<std::size_t>(action)];
  }

 private:
  BernoulliBandit bandit_;
};

// States: 0 = root, 1..K = switch node of arm (state-1), K+1 = terminal.
class SwitchTreeModel final : public MdpModel {
 public:
  explicit SwitchTreeModel(SwitchTree tree) : tree_(std::move(tree)) {
    check_num_arms(tree_.num_arms());
  }

  State initial_state() const override { return 0; }
  bool is_terminal(State state) const override {
    return state == static_cast<State>(tree_.num_arms()) + 1;
  }

  std::vector<int> actions(State state) const override {
    if (state == 0) {
      std::vector<int> out(static_cast<std::size_t>(tree_.num_arms()));
      for (int i = 0; i < tree_.num_arms(); ++i) out[static_cast<std::size_t>(i)] = i;
      return out;
    }
    return {0, 1};
  }

  Step sample_transition(State state, int action, Rng& rng) const override {
    if (state == 0) {
      return {static_cast<State>(action) + 1, 0.0};
    }
    const int arm = static_cast<int>(state) - 1;
    return {static_cast<State>(tree_.num_arms()) + 1,
            bernoulli_draw(tree_.leaf_mean(arm, action), rng)};
  }

  std::optional<double> true_action_value(State state, int action) const override {
    if (state == 0) return tree_.arm_value(action);
    return tree_.leaf_mean(static_cast<int>(state) - 1, action);
  }

 private:
  SwitchTree tree_;
};

}  // namespace

BernoulliBandit gen_bernoulli(int num_arms, Rng& rng) {
  check_num_arms(num_arms);
  BernoulliBandit out;
  out.means.resize(static_cast<std::size_t>(num_arms));
  for (double& m : out.means) m = uniform_unit(rng);
  return out;
}

TrueArms SwitchTree::truth() const {
  std::vector<double> values(p.size());
  for (int i = 0; i < num_arms(); ++i) values[static_cast<std::size_t>(i)] = arm_value(i);
  return TrueArms(std::move(values));
}

SwitchTree gen_switch_tree(int num_arms, Rng& rng) {
  check_num_arms(num_arms);
  SwitchTree out;
  out.p.resize(static_cast<std::size_t>(num_arms));
  for (double& q : out.p) q = uniform_unit(rng);
  return out;
}

std::string to_line(const Instance& instance) {
  std::string line;
  if (const auto* bandit = std::get_if<BernoulliBandit>(&instance)) {
    line = "bernoulli " + std::to_string(bandit->num_arms());
    for (double m : bandit->means) line += " " + format_double(m);
  } else if (const auto* tree = std::get_if<SwitchTree>(&instance)) {
    line = "switch " + std::to_string(tree->num_arms());
    for (double q : tree->p) line += " " + format_double(q);
  } else {
    const auto& episode = std::get<SailingEpisode>(instance);
    line = "sailing " + std::to_string(episode.size) + " " + std::to_string(episode.seed);
  }
  return line;
}

Instance parse_instance_line(const std::string& line) {
  std::istringstream in(line);
  std::string kind;
  if (!(in >> kind)) throw std::invalid_argument("empty instance line");
  if (kind == "bernoulli" || kind == "switch") {
    int count = 0;
    if (!(in >> count) || count < 2) {
      throw std::invalid_argument("bad arm count in instance line");
    }
    std::vector<double> values(static_cast<std::size_t>(count));
    for (double& v : values) {
      if (!(in >> v)) throw std::invalid_argument("truncated instance line");
    }
    if (kind == "bernoulli") return BernoulliBandit{std::move(values)};
    return SwitchTree{std::move(values)};
  }
  if (kind == "sailing") {
    SailingEpisode episode;
    if (!(in >> episode.size >> episode.seed) || episode.size < 2) {
      throw std::invalid_argument("bad sailing instance line");
    }
    return episode;
  }
  throw std::invalid_argument("unknown instance kind: " + kind);
}

std::unique_ptr<MdpModel> as_mdp(const BernoulliBandit& bandit) {
  return std::make_unique<BernoulliBanditModel>(bandit);
}

std::unique_ptr<MdpModel> as_mdp(const SwitchTree& tree) {
  return std::make_unique<SwitchTreeModel>(tree);
}

}  // namespace sregret
