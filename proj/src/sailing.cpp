#include "sregret/sailing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sregret {

namespace {

class SailingModel final : public MdpModel {
 public:
  SailingModel(const SailingDomain& domain, SailingState root)
      : domain_(domain), root_(root) {}

  State initial_state() const override { return domain_.encode(root_); }

  bool is_terminal(State state) const override {
    return domain_.is_terminal(domain_.decode(state));
  }

  std::vector<int> actions(State state) const override {
    const SailingState s = domain_.decode(state);
    return domain_.admissible_moves(s.x, s.y, s.wind);
  }

  Step sample_transition(State state, int action, Rng& rng) const override {
    const SailingState s = domain_.decode(state);
    const double cost = domain_.move_cost(s.heading, s.wind, action);
    const SailingState next = domain_.apply_move(s, action, domain_.sample_wind(s.wind, rng));
    return {domain_.encode(next), cost};
  }

 private:
  const SailingDomain& domain_;
  SailingState root_;
};

}  // namespace

void SailingConfig::validate() const {
  if (size < 2) throw std::invalid_argument("lake size must be at least 2");
  for (double c : angle_cost) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("angle costs must be positive and finite");
    }
  }
  if (!(diagonal_factor >= 1.0)) throw std::invalid_argument("diagonal factor must be >= 1");
  if (!(tack_delay >= 0.0)) throw std::invalid_argument("tack delay must be nonnegative");
  if (!(wind_stay_prob > 0.0 && wind_stay_prob <= 1.0)) {
    throw std::invalid_argument("wind stay probability must lie in (0,1]");
  }
}

SailingDomain::SailingDomain(SailingConfig config) : config_(config) {
  config_.validate();
}

State SailingDomain::encode(const SailingState& s) const {
  const int size = config_.size;
  return static_cast<State>(((s.wind * 9 + s.heading) * size + s.y) * size + s.x);
}

SailingState SailingDomain::decode(State state) const {
  const int size = config_.size;
  auto v = static_cast<std::int64_t>(state);
  SailingState s;
  s.x = static_cast<int>(v % size);
  v /= size;
  s.y = static_cast<int>(v % size);
  v /= size;
  s.heading = static_cast<int>(v % 9);
  s.wind = static_cast<int>(v / 9);
  return s;
}

std::size_t SailingDomain::num_states() const {
  const auto size = static_cast<std::size_t>(config_.size);
  return size * size * 9 * kNumDirections;
}

int SailingDomain::angle_steps(int a, int b) {
  const int diff = (a - b) & 7;
  return std::min(diff, 8 - diff);
}

int SailingDomain::tack(int dir, int wind) {
  const int cross = kDirDx[static_cast<std::size_t>(dir)] * kDirDy[static_cast<std::size_t>(wind)] -
                    kDirDy[static_cast<std::size_t>(dir)] * kDirDx[static_cast<std::size_t>(wind)];
  return cross > 0 ? 1 : cross < 0 ? -1 : 0;
}

bool SailingDomain::admissible(int x, int y, int wind, int dir) const {
  if (angle_steps(dir, wind) == 4) return false;  // dead against the wind
  const int nx = x + kDirDx[static_cast<std::size_t>(dir)];
  const int ny = y + kDirDy[static_cast<std::size_t>(dir)];
  return nx >= 0 && nx < config_.size && ny >= 0 && ny < config_.size;
}

std::vector<int> SailingDomain::admissible_moves(int x, int y, int wind) const {
  std::vector<int> out;
  out.reserve(kNumDirections);
  for (int dir = 0; dir < kNumDirections; ++dir) {
    if (admissible(x, y, wind, dir)) out.push_back(dir);
  }
  return out;
}

double SailingDomain::move_cost(int heading, int wind, int dir) const {
  const int angle = angle_steps(dir, wind);
  if (angle == 4) throw std::invalid_argument("move dead against the wind");
  double cost = config_.angle_cost[static_cast<std::size_t>(angle)];
  if (kDirDx[static_cast<std::size_t>(dir)] != 0 && kDirDy[static_cast<std::size_t>(dir)] != 0) {
    cost *= config_.diagonal_factor;
  }
  if (heading != kNoHeading) {
    const int old_tack = tack(heading, wind);
    const int new_tack = tack(dir, wind);
    if (old_tack != 0 && new_tack != 0 && old_tack != new_tack) {
      cost += config_.tack_delay;
    }
  }
  return cost;
}

std::array<double, kNumDirections> SailingDomain::wind_row(int wind) const {
  std::array<double, kNumDirections> row{};
  if (config_.frozen_wind) {
    row[static_cast<std::size_t>(wind)] = 1.0;
    return row;
  }
  const double rotate = (1.0 - config_.wind_stay_prob) / 2.0;
  row[static_cast<std::size_t>(wind)] = config_.wind_stay_prob;
  row[static_cast<std::size_t>((wind + 1) & 7)] += rotate;
  row[static_cast<std::size_t>((wind + 7) & 7)] += rotate;
  return row;
}

int SailingDomain::sample_wind(int wind, Rng& rng) const {
  if (config_.frozen_wind) return wind;
  const double u = uniform_unit(rng);
  const double rotate = (1.0 - config_.wind_stay_prob) / 2.0;
  if (u < config_.wind_stay_prob) return wind;
  if (u < config_.wind_stay_prob + rotate) return (wind + 1) & 7;
  return (wind + 7) & 7;
}

double SailingDomain::cost_lo() const {
  return *std::min_element(config_.angle_cost.begin(), config_.angle_cost.end());
}

double SailingDomain::cost_hi() const {
  return *std::max_element(config_.angle_cost.begin(), config_.angle_cost.end()) *
             config_.diagonal_factor +
         config_.tack_delay;
}

SailingState SailingDomain::initial_state(Rng& rng) const {
  SailingState s;
  s.x = 0;
  s.y = 0;
  s.heading = kNoHeading;
  s.wind = uniform_int(rng, 0, kNumDirections - 1);
  return s;
}

SailingState SailingDomain::apply_move(const SailingState& s, int dir, int next_wind) const {
  if (!admissible(s.x, s.y, s.wind, dir)) {
    throw std::invalid_argument("inadmissible sailing move");
  }
  SailingState next;
  next.x = s.x + kDirDx[static_cast<std::size_t>(dir)];
  next.y = s.y + kDirDy[static_cast<std::size_t>(dir)];
  next.heading = dir;
  next.wind = next_wind;
  return next;
}

std::unique_ptr<MdpModel> SailingDomain::make_model(const SailingState& root) const {
  return std::make_unique<SailingModel>(*this, root);
}

ValueTable value_iteration(const SailingDomain& domain, double tolerance, int max_sweeps) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const int size = domain.size();

  ValueTable table;
  table.tolerance = tolerance;
  table.values.assign(domain.num_states(), 0.0);

  // Wind rows never change, precompute the up-to-3 reachable next winds.
  struct WindOutcome {
    int wind;
    double prob;
  };
  std::array<std::vector<WindOutcome>, kNumDirections> wind_outcomes;
  for (int w = 0; w < kNumDirections; ++w) {
    const auto row = domain.wind_row(w);
    for (int w2 = 0; w2 < kNumDirections; ++w2) {
      if (row[static_cast<std::size_t>(w2)] > 0.0) {
        wind_outcomes[static_cast<std::size_t>(w)].push_back(
            {w2, row[static_cast<std::size_t>(w2)]});
      }
    }
  }

  std::vector<double> next(table.values.size(), 0.0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double residual = 0.0;
    for (int wind = 0; wind < kNumDirections; ++wind) {
      for (int heading = 0; heading <= kNoHeading; ++heading) {
        for (int y = 0; y < size; ++y) {
          for (int x = 0; x < size; ++x) {
            const State code = domain.encode({x, y, heading, wind});
            if (domain.at_goal(x, y)) {
              next[static_cast<std::size_t>(code)] = 0.0;
              continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (int dir = 0; dir < kNumDirections; ++dir) {
              if (!domain.admissible(x, y, wind, dir)) continue;
              double q = domain.move_cost(heading, wind, dir);
              for (const auto& [w2, prob] : wind_outcomes[static_cast<std::size_t>(wind)]) {
                const State succ = domain.encode(
                    {x + kDirDx[static_cast<std::size_t>(dir)],
                     y + kDirDy[static_cast<std::size_t>(dir)], dir, w2});
                q += prob * table.values[static_cast<std::size_t>(succ)];
              }
              best = std::min(best, q);
            }
            next[static_cast<std::size_t>(code)] = best;
            residual = std::max(residual,
                                std::abs(best - table.values[static_cast<std::size_t>(code)]));
          }
        }
      }
    }
    table.values.swap(next);
    table.residuals.push_back(residual);
    if (residual < tolerance) return table;
  }
  throw std::runtime_error("value iteration failed to converge");
}

}  // namespace sregret
