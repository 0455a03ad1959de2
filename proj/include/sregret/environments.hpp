#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sregret/bandit.hpp"
#include "sregret/mcts.hpp"
#include "sregret/rng.hpp"

namespace sregret {

// Flat set of Bernoulli arms.
struct BernoulliBandit {
  std::vector<double> means;

  int num_arms() const { return static_cast<int>(means.size()); }
  TrueArms truth() const { return TrueArms(means); }
};

// K means drawn independently and uniformly from [0,1].
BernoulliBandit gen_bernoulli(int num_arms, Rng& rng);

// Two-level max-max tree built to deceive uniform sampling: each root arm
// leads to a switch node whose two Bernoulli leaves have means p_i and
// 1 - p_i, so uniform averaging reports 0.5 for every arm while the true
// arm value is max(p_i, 1 - p_i).
struct SwitchTree {
  std::vector<double> p;  // switch parameter per root arm

  int num_arms() const { return static_cast<int>(p.size()); }
  double leaf_mean(int arm, int leaf) const {
    return leaf == 0 ? p[static_cast<std::size_t>(arm)]
                     : 1.0 - p[static_cast<std::size_t>(arm)];
  }
  double arm_value(int arm) const {
    const double q = p[static_cast<std::size_t>(arm)];
    return q > 1.0 - q ? q : 1.0 - q;
  }
  TrueArms truth() const;
};

SwitchTree gen_switch_tree(int num_arms, Rng& rng);

// Sailing episode reference for instance files: the domain is derived from
// (size, seed), the seed driving initial wind and the realized wind path.
struct SailingEpisode {
  int size = 6;
  std::uint64_t seed = 0;
};

using Instance = std::variant<BernoulliBandit, SwitchTree, SailingEpisode>;

// Line-oriented serialization: "bernoulli K m1 ... mK", "switch K p1 ... pK",
// "sailing size seed". Doubles round-trip exactly.
std::string to_line(const Instance& instance);
Instance parse_instance_line(const std::string& line);

// Depth-1 adapter: pull an arm, observe a Bernoulli reward, stop.
std::unique_ptr<MdpModel> as_mdp(const BernoulliBandit& bandit);

// Depth-2 max-max adapter: choose a root arm, then one of its two leaves,
// observe a Bernoulli reward, stop. Needs depth_cutoff >= 2.
std::unique_ptr<MdpModel> as_mdp(const SwitchTree& tree);

}  // namespace sregret
