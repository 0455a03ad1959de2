#include "sregret/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sregret/mcts.hpp"

namespace sregret {

namespace {

struct RepResult {
  // regret[policy][budget]; raw_cost populated for sailing only.
  std::vector<std::vector<double>> regret;
  std::vector<std::vector<double>> raw_cost;
  std::string instance_line;
};

std::uint64_t instance_seed(const ExperimentSpec& spec, int rep) {
  return derive_seed(spec.master_seed, static_cast<std::uint64_t>(rep) + 1, 0);
}

template <typename Fn>
void with_policy_context(const std::string& label, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("policy '" + label + "': " + e.what());
  }
}

std::uint64_t policy_seed(const ExperimentSpec& spec, int rep, const PolicyConfig& policy) {
  return derive_seed(spec.master_seed, static_cast<std::uint64_t>(rep) + 1,
                     fnv1a(policy.label));
}

double bernoulli_draw(double mean, Rng& rng) {
  return uniform_unit(rng) < mean ? 1.0 : 0.0;
}

RepResult run_rep_mab(const ExperimentSpec& spec, int rep) {
  RepResult out;
  BernoulliBandit instance;
  if (spec.replay_instances) {
    instance = std::get<BernoulliBandit>((*spec.replay_instances)[static_cast<std::size_t>(rep)]);
  } else if (spec.fixed_means) {
    instance.means = *spec.fixed_means;
  } else {
    Rng rng(instance_seed(spec, rep));
    instance = gen_bernoulli(spec.arms, rng);
  }
  out.instance_line = to_line(Instance{instance});
  const TrueArms truth = instance.truth();
  const int num_arms = instance.num_arms();

  out.regret.resize(spec.policies.size());
  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    const PolicyConfig& policy = spec.policies[p];
    const std::uint64_t base = policy_seed(spec, rep, policy);
    Rng pull_rng(derive_seed(base, 1));
    Rng tie_rng(derive_seed(base, 2));

    BanditView view(num_arms);
    auto& regret = out.regret[p];
    regret.resize(spec.budgets.size());
    with_policy_context(policy.label, [&] {
      std::size_t bi = 0;
      const std::int64_t total = spec.budgets.back();
      for (std::int64_t n = 1; n <= total; ++n) {
        const int arm = select(view, policy.root, pull_rng);
        view.record(arm, bernoulli_draw(instance.means[static_cast<std::size_t>(arm)], pull_rng));
        while (bi < spec.budgets.size() && spec.budgets[bi] == n) {
          regret[bi] = realized_regret(truth, recommend(view, tie_rng));
          ++bi;
        }
      }
    });
  }
  return out;
}

RepResult run_rep_tree(const ExperimentSpec& spec, int rep) {
  RepResult out;
  SwitchTree instance;
  if (spec.replay_instances) {
    instance = std::get<SwitchTree>((*spec.replay_instances)[static_cast<std::size_t>(rep)]);
  } else {
    Rng rng(instance_seed(spec, rep));
    instance = gen_switch_tree(spec.arms, rng);
  }
  out.instance_line = to_line(Instance{instance});
  const TrueArms truth = instance.truth();
  const auto model = as_mdp(instance);

  out.regret.resize(spec.policies.size());
  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    const PolicyConfig& policy = spec.policies[p];
    Rng rng(policy_seed(spec, rep, policy));

    SearchParams params;
    params.root_policy = policy.root;
    params.tree_policy = policy.tree;
    params.depth_cutoff = spec.resolved_depth_cutoff();
    params.budget = spec.budgets.back();
    params.transform = RewardTransform::identity();

    auto& regret = out.regret[p];
    regret.resize(spec.budgets.size());
    with_policy_context(policy.label, [&] {
      std::size_t bi = 0;
      search_with_checkpoints(*model, params, spec.budgets, rng,
                              [&](const SearchNode& root, std::int64_t) {
                                const int action = root.actions[static_cast<std::size_t>(
                                    recommend(root.stats))];
                                regret[bi++] = realized_regret(truth, action);
                              });
    });
  }
  return out;
}

RepResult run_rep_sailing(const ExperimentSpec& spec, int rep, const SailingDomain& domain,
                          const ValueTable& optimal) {
  RepResult out;
  std::uint64_t episode_seed = instance_seed(spec, rep);
  if (spec.replay_instances) {
    episode_seed =
        std::get<SailingEpisode>((*spec.replay_instances)[static_cast<std::size_t>(rep)]).seed;
  }
  out.instance_line = to_line(Instance{SailingEpisode{domain.size(), episode_seed}});

  const int cap = spec.resolved_step_cap();
  Rng wind_rng(derive_seed(episode_seed, 1));
  SailingState start = domain.initial_state(wind_rng);
  // The wind chain does not depend on the boat, so one realized path serves
  // every policy and budget of this repetition (paired design).
  std::vector<int> wind_path(static_cast<std::size_t>(cap) + 1);
  wind_path[0] = start.wind;
  for (int t = 0; t < cap; ++t) {
    wind_path[static_cast<std::size_t>(t) + 1] =
        domain.sample_wind(wind_path[static_cast<std::size_t>(t)], wind_rng);
  }
  const double baseline = optimal.at(domain.encode(start));

  out.regret.resize(spec.policies.size());
  out.raw_cost.resize(spec.policies.size());
  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    const PolicyConfig& policy = spec.policies[p];
    const std::uint64_t base = policy_seed(spec, rep, policy);
    out.regret[p].resize(spec.budgets.size());
    out.raw_cost[p].resize(spec.budgets.size());

    with_policy_context(policy.label, [&] {
      for (std::size_t bi = 0; bi < spec.budgets.size(); ++bi) {
        Rng rng(derive_seed(base, bi + 1));
        SearchParams params;
        params.root_policy = policy.root;
        params.tree_policy = policy.tree;
        params.depth_cutoff = spec.resolved_depth_cutoff();
        params.budget = spec.budgets[bi];
        params.transform = RewardTransform::negate();

        SailingState state = start;
        double cost = 0.0;
        for (int t = 0; t < cap && !domain.is_terminal(state); ++t) {
          const auto model = domain.make_model(state);
          const SearchResult result = search(*model, params, rng);
          cost += domain.move_cost(state.heading, state.wind, result.action);
          state = domain.apply_move(state, result.action,
                                    wind_path[static_cast<std::size_t>(t) + 1]);
        }
        out.raw_cost[p][bi] = cost;
        out.regret[p][bi] = cost - baseline;
      }
    });
  }
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void append_stats(std::vector<RegretPoint>& points, const ExperimentSpec& spec,
                  const PolicyConfig& policy, std::int64_t budget,
                  std::vector<double> regrets, std::vector<double> raws) {
  const int reps = static_cast<int>(regrets.size());
  double mean = 0.0;
  for (double v : regrets) mean += v;
  mean /= reps;
  double var = 0.0;
  if (reps > 1) {
    for (double v : regrets) var += (v - mean) * (v - mean);
    var /= reps - 1;
  }
  const double std_error = reps > 1 ? std::sqrt(var / reps) : 0.0;

  auto median_of = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };
  auto min_of = [](const std::vector<double>& v) {
    return *std::min_element(v.begin(), v.end());
  };

  const bool sailing = !raws.empty();
  RegretPoint base;
  base.family = family_name(spec.family);
  base.policy = policy.label;
  base.c = policy.c_value;
  base.n = budget;
  base.repetitions = reps;
  base.seed = spec.master_seed;

  RegretPoint mean_point = base;
  mean_point.statistic = "mean";
  mean_point.value = mean;
  mean_point.std_error = std_error;

  RegretPoint median_point = base;
  median_point.statistic = "median";
  RegretPoint min_point = base;
  min_point.statistic = "min";

  if (sailing) {
    double raw_mean = 0.0;
    for (double v : raws) raw_mean += v;
    mean_point.raw_cost = raw_mean / reps;
    min_point.raw_cost = min_of(raws);
    min_point.value = min_of(regrets);
    median_point.raw_cost = median_of(raws);
    median_point.value = median_of(regrets);
  } else {
    min_point.value = min_of(regrets);
    median_point.value = median_of(regrets);
  }

  points.push_back(std::move(mean_point));
  points.push_back(std::move(median_point));
  points.push_back(std::move(min_point));
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::MAB:
      return "mab";
    case Family::TREE:
      return "tree";
    case Family::SAILING:
      return "sailing";
    case Family::VOI_TREE:
      return "voi-tree";
  }
  throw std::logic_error("unknown family");
}

void ExperimentSpec::validate() const {
  if (policies.empty()) throw std::invalid_argument("no policies given");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    policies[i].root.validate();
    if (family != Family::MAB) policies[i].tree.validate();
    if (policies[i].label.empty()) throw std::invalid_argument("empty policy label");
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      if (policies[i].label == policies[j].label) {
        throw std::invalid_argument("duplicate policy label: " + policies[i].label);
      }
    }
  }
  if (budgets.empty()) throw std::invalid_argument("no budgets given");
  if (budgets.front() < 1) throw std::invalid_argument("budgets must be positive");
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] <= budgets[i - 1]) {
      throw std::invalid_argument("budgets must be strictly ascending");
    }
  }
  if (repetitions < 1 && !replay_instances) {
    throw std::invalid_argument("repetitions must be >= 1");
  }
  if (family == Family::MAB || family == Family::TREE || family == Family::VOI_TREE) {
    if (arms < 2 && !fixed_means && !replay_instances) {
      throw std::invalid_argument("need at least 2 arms");
    }
  }
  if (family == Family::SAILING && lake_size < 2) {
    throw std::invalid_argument("lake size must be at least 2");
  }
  if (fixed_means && family != Family::MAB) {
    throw std::invalid_argument("fixed means apply to the mab family only");
  }
  if (fixed_means && fixed_means->size() < 2) {
    throw std::invalid_argument("fixed means need at least 2 arms");
  }
}

int ExperimentSpec::resolved_depth_cutoff() const {
  if (depth_cutoff > 0) return depth_cutoff;
  switch (family) {
    case Family::MAB:
      return 1;
    case Family::TREE:
    case Family::VOI_TREE:
      return 2;
    case Family::SAILING:
      return 4 * lake_size;
  }
  return 1;
}

int ExperimentSpec::resolved_step_cap() const {
  return episode_step_cap > 0 ? episode_step_cap : 25 * lake_size;
}

RunResult run(const ExperimentSpec& spec) {
  ExperimentSpec resolved = spec;
  if (resolved.replay_instances) {
    resolved.repetitions = static_cast<int>(resolved.replay_instances->size());
    if (resolved.repetitions == 0) throw std::invalid_argument("empty replay instance list");
  }
  resolved.validate();

  // Shared, repetition-independent sailing machinery.
  std::unique_ptr<SailingDomain> domain;
  std::unique_ptr<ValueTable> optimal;
  if (resolved.family == Family::SAILING) {
    SailingConfig config;
    config.size = resolved.lake_size;
    config.frozen_wind = resolved.frozen_wind;
    domain = std::make_unique<SailingDomain>(config);
    optimal = std::make_unique<ValueTable>(value_iteration(*domain, resolved.vi_tolerance));
  }

  const int reps = resolved.repetitions;
  std::vector<RepResult> results(static_cast<std::size_t>(reps));

  auto run_one = [&](int rep) -> RepResult {
    try {
      switch (resolved.family) {
        case Family::MAB:
          return run_rep_mab(resolved, rep);
        case Family::TREE:
        case Family::VOI_TREE:
          return run_rep_tree(resolved, rep);
        case Family::SAILING:
          return run_rep_sailing(resolved, rep, *domain, *optimal);
      }
      throw std::logic_error("unknown family");
    } catch (const std::exception& e) {
      throw std::runtime_error("repetition " + std::to_string(rep) + ": " + e.what());
    }
  };

  int workers = resolved.threads > 0 ? resolved.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, reps);

  if (workers == 1) {
    for (int rep = 0; rep < reps; ++rep) results[static_cast<std::size_t>(rep)] = run_one(rep);
  } else {
    std::atomic<int> next_rep{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
      for (;;) {
        const int rep = next_rep.fetch_add(1);
        if (rep >= reps) return;
        try {
          results[static_cast<std::size_t>(rep)] = run_one(rep);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  RunResult out;
  out.instance_lines.reserve(static_cast<std::size_t>(reps));
  for (const auto& r : results) out.instance_lines.push_back(r.instance_line);

  for (std::size_t p = 0; p < resolved.policies.size(); ++p) {
    for (std::size_t bi = 0; bi < resolved.budgets.size(); ++bi) {
      std::vector<double> regrets(static_cast<std::size_t>(reps));
      std::vector<double> raws;
      if (resolved.family == Family::SAILING) raws.resize(static_cast<std::size_t>(reps));
      for (int rep = 0; rep < reps; ++rep) {
        regrets[static_cast<std::size_t>(rep)] = results[static_cast<std::size_t>(rep)].regret[p][bi];
        if (resolved.family == Family::SAILING) {
          raws[static_cast<std::size_t>(rep)] = results[static_cast<std::size_t>(rep)].raw_cost[p][bi];
        }
      }
      append_stats(out.points, resolved, resolved.policies[p], resolved.budgets[bi],
                   std::move(regrets), std::move(raws));
    }
  }
  return out;
}

RunResult sweep_exploration(const ExperimentSpec& spec) {
  if (spec.c_sweep.empty()) return run(spec);

  RunResult out;
  for (std::size_t ci = 0; ci < spec.c_sweep.size(); ++ci) {
    const double c = spec.c_sweep[ci];
    if (!(c > 0.0)) throw std::invalid_argument("swept exploration factors must be positive");
    ExperimentSpec point = spec;
    point.c_sweep.clear();
    for (PolicyConfig& policy : point.policies) {
      if (policy.root.kind == PolicyKind::UCB || policy.root.kind == PolicyKind::UCB_SQRT) {
        policy.root.c = c;
      }
      policy.tree.c = c;
      policy.c_value = c;
    }
    RunResult part = run(point);
    if (ci == 0) out.instance_lines = std::move(part.instance_lines);
    out.points.insert(out.points.end(), part.points.begin(), part.points.end());
  }
  return out;
}

std::string csv_string(const std::vector<RegretPoint>& points) {
  std::vector<const RegretPoint*> order;
  order.reserve(points.size());
  for (const auto& p : points) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const RegretPoint* a, const RegretPoint* b) {
    if (a->policy != b->policy) return a->policy < b->policy;
    if (a->c != b->c) return a->c < b->c;
    if (a->n != b->n) return a->n < b->n;
    return a->statistic < b->statistic;
  });

  bool any_raw = false;
  for (const auto& p : points) any_raw = any_raw || p.raw_cost.has_value();

  std::string out = "family,policy,c,n,statistic,value,stderr,repetitions,seed";
  if (any_raw) out += ",raw_cost";
  out += "\n";
  for (const RegretPoint* p : order) {
    out += p->family;
    out += ',';
    out += p->policy;
    out += ',';
    out += format_number(p->c);
    out += ',';
    out += std::to_string(p->n);
    out += ',';
    out += p->statistic;
    out += ',';
    out += format_number(p->value);
    out += ',';
    out += format_number(p->std_error);
    out += ',';
    out += std::to_string(p->repetitions);
    out += ',';
    out += std::to_string(p->seed);
    if (any_raw) {
      out += ',';
      out += p->raw_cost ? format_number(*p->raw_cost) : std::string();
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::vector<RegretPoint>& points, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  file << csv_string(points);
  if (!file) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace sregret
