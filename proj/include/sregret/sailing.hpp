#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "sregret/mcts.hpp"
#include "sregret/rng.hpp"

namespace sregret {

// Eight compass directions, 45 degrees apart, counter-clockwise from east.
inline constexpr int kNumDirections = 8;
inline constexpr int kNoHeading = 8;  // before the first move
inline constexpr std::array<int, 8> kDirDx = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr std::array<int, 8> kDirDy = {0, 1, 1, 1, 0, -1, -1, -1};

// Every tunable constant of the sailing benchmark lives here so the
// parameterization can be aligned with other implementations in one place.
// Wind direction is the direction the wind blows toward; a move at 180
// degrees to it (dead against the wind) is inadmissible. angle_cost is
// indexed by the move/wind angle in 45-degree units (0..3); diagonal moves
// cost diagonal_factor times more; flipping the crosswind side adds
// tack_delay. Wind keeps its direction with wind_stay_prob and rotates 45
// degrees either way with equal shares of the remaining mass.
struct SailingConfig {
  int size = 6;
  std::array<double, 4> angle_cost = {1.0, 2.0, 3.0, 4.0};
  double diagonal_factor = 1.4142135623730951;
  double tack_delay = 3.0;
  double wind_stay_prob = 0.4;
  bool frozen_wind = false;

  void validate() const;
};

struct SailingState {
  int x = 0;
  int y = 0;
  int heading = kNoHeading;
  int wind = 0;

  bool operator==(const SailingState&) const = default;
};

// The lake: exact per-state cost and wind-transition tables plus sampling
// helpers. The MCTS-facing generative model is built on top via make_model().
class SailingDomain {
 public:
  explicit SailingDomain(SailingConfig config);

  const SailingConfig& config() const { return config_; }
  int size() const { return config_.size; }

  State encode(const SailingState& s) const;
  SailingState decode(State state) const;
  std::size_t num_states() const;

  bool at_goal(int x, int y) const {
    return x == config_.size - 1 && y == config_.size - 1;
  }
  bool is_terminal(const SailingState& s) const { return at_goal(s.x, s.y); }

  // Angle between two directions in 45-degree units (0..4).
  static int angle_steps(int a, int b);
  // Sign of the crosswind component of `wind` relative to move `dir`.
  static int tack(int dir, int wind);

  bool admissible(int x, int y, int wind, int dir) const;
  std::vector<int> admissible_moves(int x, int y, int wind) const;

  // Positive, finite cost of an admissible move.
  double move_cost(int heading, int wind, int dir) const;

  // Row of the wind-transition matrix; sums to 1.
  std::array<double, kNumDirections> wind_row(int wind) const;
  int sample_wind(int wind, Rng& rng) const;

  // Range of the per-step cost table (for reward scaling).
  double cost_lo() const;
  double cost_hi() const;

  SailingState initial_state(Rng& rng) const;  // (0,0), no heading, uniform wind
  SailingState apply_move(const SailingState& s, int dir, int next_wind) const;

  // Generative model rooted at `root`, for re-planning from any state.
  // Raw rewards are the positive step costs; run the engine with the
  // NEGATE transform so that maximizing return minimizes cost.
  std::unique_ptr<MdpModel> make_model(const SailingState& root) const;

 private:
  SailingConfig config_;
};

// Optimal expected cost-to-go per state, from synchronous Bellman sweeps.
struct ValueTable {
  std::vector<double> values;  // indexed by SailingDomain::encode
  double tolerance = 0.0;
  std::vector<double> residuals;  // max residual per sweep

  double at(State state) const { return values[static_cast<std::size_t>(state)]; }
};

// Sweeps until the max residual drops below tolerance; throws if the cap is
// reached first (the domain is a proper stochastic shortest-path problem, so
// non-convergence signals a modeling bug).
ValueTable value_iteration(const SailingDomain& domain, double tolerance,
                           int max_sweeps = 200000);

}  // namespace sregret
