#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sregret/bandit.hpp"
#include "sregret/environments.hpp"
#include "sregret/sailing.hpp"

namespace sregret {

enum class Family { MAB, TREE, SAILING, VOI_TREE };

std::string family_name(Family family);

// One regret curve: a flat policy for MAB, or a (root, tree) pair for the
// tree and sailing families. Labels key the CSV rows and the per-policy
// random streams, so they must be unique within a spec.
struct PolicyConfig {
  std::string label;
  PolicySpec root;
  PolicySpec tree;        // ignored for MAB
  double c_value = 0.0;   // CSV c column
};

struct ExperimentSpec {
  Family family = Family::MAB;
  int arms = 32;           // MAB / TREE / VOI_TREE
  int lake_size = 6;       // SAILING
  std::vector<PolicyConfig> policies;
  std::vector<std::int64_t> budgets;  // strictly ascending pull/rollout counts
  std::vector<double> c_sweep;        // optional exploration-factor grid
  int repetitions = 1;
  std::uint64_t master_seed = 1;
  int threads = 0;         // 0 = hardware concurrency

  int depth_cutoff = 0;    // 0 = family default (2 for trees, 4*size for sailing)
  int episode_step_cap = 0;  // 0 = 25*size; bounds a sailing episode
  double vi_tolerance = 1e-10;
  bool frozen_wind = false;

  // MAB only: evaluate this exact instance instead of generating one per
  // repetition.
  std::optional<std::vector<double>> fixed_means;

  // Replaces instance generation; repetition r uses instance r. Overrides
  // `repetitions` with the instance count.
  std::optional<std::vector<Instance>> replay_instances;

  void validate() const;
  int resolved_depth_cutoff() const;
  int resolved_step_cap() const;
};

// One aggregated output row.
struct RegretPoint {
  std::string family;
  std::string policy;
  double c = 0.0;
  std::int64_t n = 0;
  std::string statistic;  // mean | median | min
  double value = 0.0;
  double std_error = 0.0;  // nonzero only for mean
  int repetitions = 0;
  std::uint64_t seed = 0;
  std::optional<double> raw_cost;  // SAILING: matching raw trajectory-cost statistic
};

struct RunResult {
  std::vector<RegretPoint> points;
  std::vector<std::string> instance_lines;  // one per repetition, replayable
};

// Runs the experiment: per repetition one shared instance, one derived
// random stream per policy (paired design), aggregated into mean (with
// standard error), median and min per (policy, c, budget).
RunResult run(const ExperimentSpec& spec);

// Repeats run() once per value in c_sweep, rewriting the exploration factor
// of every policy that consumes one (and of the tree policy). Falls back to
// a single run when the sweep list is empty.
RunResult sweep_exploration(const ExperimentSpec& spec);

std::string csv_string(const std::vector<RegretPoint>& points);
void write_csv(const std::vector<RegretPoint>& points, const std::string& path);

}  // namespace sregret
