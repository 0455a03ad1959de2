#include "sregret/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

namespace sregret::cli {

namespace {

std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) out.push_back(token);
  return out;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad number: " + text);
  return v;
}

// lo:hi:logN -> N log-spaced doubles including both endpoints.
std::optional<std::vector<double>> parse_log_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 || parts[2].rfind("log", 0) != 0) return std::nullopt;
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const int count = std::stoi(parts[2].substr(3));
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("bad log range: " + text);
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

PolicySpec parse_policy_token(const std::string& token, std::string& label) {
  const auto parts = split(token, ':');
  if (parts.empty() || parts.size() > 2) {
    throw std::invalid_argument("bad policy token: " + token);
  }
  const std::string& kind = parts[0];
  PolicySpec spec;
  if (kind == "ucb" || kind == "ucbsqrt") {
    spec.kind = kind == "ucb" ? PolicyKind::UCB : PolicyKind::UCB_SQRT;
    spec.c = parts.size() == 2 ? parse_double(parts[1]) : 2.0;
    label = kind + ":" + format_param(spec.c);
  } else if (kind == "eps") {
    spec.kind = PolicyKind::EPS_GREEDY;
    spec.epsilon = parts.size() == 2 ? parse_double(parts[1]) : 0.5;
    label = kind + ":" + format_param(spec.epsilon);
  } else if (kind == "uniform" || kind == "voi") {
    if (parts.size() == 2) throw std::invalid_argument(kind + " takes no parameter");
    spec.kind = kind == "uniform" ? PolicyKind::UNIFORM : PolicyKind::VOI_AWARE;
    label = kind;
  } else {
    throw std::invalid_argument("unknown policy kind: " + kind);
  }
  spec.validate();
  return spec;
}

struct Preset {
  Family family;
  std::map<std::string, std::string> values;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"paper-fig1b",
       {Family::MAB,
        {{"arms", "32"},
         {"reps", "10000"},
         {"budgets", "10:10000:log25"},
         {"policies", "ucb:2,ucbsqrt:2,eps:0.5,uniform"}}}},
      {"paper-fig2b",
       {Family::TREE,
        {{"arms", "16"},
         {"reps", "10000"},
         {"budgets", "10:10000:log25"},
         {"policies", "ucb:2,ucbsqrt:2,eps:0.5"}}}},
      {"paper-fig2c",
       {Family::TREE,
        {{"arms", "64"},
         {"reps", "10000"},
         {"budgets", "10:10000:log25"},
         {"policies", "ucb:2,ucbsqrt:2,eps:0.5"}}}},
      {"paper-fig4a",
       {Family::SAILING,
        {{"size", "6"},
         {"reps", "1000"},
         {"budgets", "397"},
         {"c-sweep", "0.02:20:log11"},
         {"policies", "ucb,ucbsqrt,eps:0.5"}}}},
      {"paper-fig4b",
       {Family::SAILING,
        {{"size", "6"},
         {"reps", "1000"},
         {"budgets", "1585"},
         {"c-sweep", "0.02:20:log11"},
         {"policies", "ucb,ucbsqrt,eps:0.5"}}}},
      {"paper-fig5b",
       {Family::SAILING,
        {{"size", "10"},
         {"reps", "1000"},
         {"budgets", "397"},
         {"c-sweep", "0.02:20:log11"},
         {"policies", "ucb,ucbsqrt,eps:0.5"}}}},
      {"paper-fig7",
       {Family::VOI_TREE,
        {{"arms", "32"},
         {"reps", "10000"},
         {"budgets", "10:10000:log25"},
         {"policies", "voi,ucb:2,ucbsqrt:2,eps:0.5"}}}},
  };
  return table;
}

// Flags shared by the experiment subcommands, collected before spec build.
struct ExperimentArgs {
  std::string budgets;
  std::string policies;
  std::string c_sweep;
  std::string preset;
  std::string out_path;
  std::string dump_instances;
  std::string instances_path;  // replay only
  int arms = 0;
  int size = 0;
  int reps = 0;
  int threads = 0;
  int depth = 0;
  int cap = 0;
  std::uint64_t seed = 1;
  double tree_c = 0.0;
  bool frozen_wind = false;
  std::string fixed_means;

  CLI::Option* arms_opt = nullptr;
  CLI::Option* size_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* budgets_opt = nullptr;
  CLI::Option* policies_opt = nullptr;
  CLI::Option* sweep_opt = nullptr;
  CLI::Option* tree_c_opt = nullptr;
};

void add_common_options(CLI::App* cmd, ExperimentArgs& args, Family family) {
  args.reps_opt = cmd->add_option("--reps", args.reps, "Repetitions (paired instances)");
  args.budgets_opt =
      cmd->add_option("--budgets", args.budgets, "Sample budgets: lo:hi:logN or comma list");
  args.policies_opt =
      cmd->add_option("--policies", args.policies, "Comma list of kind[:param] tokens");
  cmd->add_option("--seed", args.seed, "Master seed")->envname("REGRET_SEED");
  cmd->add_option("--out", args.out_path, "Output CSV path")->required();
  cmd->add_option("--threads", args.threads, "Worker thread cap (0 = hardware)");
  cmd->add_option("--dump-instances", args.dump_instances,
                  "Write one replayable instance line per repetition");
  cmd->add_option("--preset", args.preset, "Named protocol preset (paper-*)");
  cmd->set_config("--config");
  if (family != Family::MAB) {
    args.tree_c_opt = cmd->add_option(
        "--tree-c", args.tree_c, "UCB factor below the root (default: root's factor)");
    cmd->add_option("--depth", args.depth, "Rollout depth cutoff");
  }
  if (family == Family::SAILING) {
    args.size_opt = cmd->add_option("--size", args.size, "Lake dimension");
    args.sweep_opt = cmd->add_option("--c-sweep", args.c_sweep,
                                     "Exploration factor grid: lo:hi:logN or comma list");
    cmd->add_flag("--frozen-wind", args.frozen_wind, "Keep the wind fixed all episode");
    cmd->add_option("--cap", args.cap, "Episode step cap");
  } else {
    args.arms_opt = cmd->add_option("--arms", args.arms, "Number of arms");
  }
  if (family == Family::MAB) {
    cmd->add_option("--fixed-means", args.fixed_means,
                    "Evaluate this exact instance (comma list of means)");
  }
}

void apply_preset(ExperimentArgs& args, Family family) {
  if (args.preset.empty()) return;
  const auto it = presets().find(args.preset);
  if (it == presets().end()) {
    throw std::invalid_argument("unknown preset: " + args.preset);
  }
  if (it->second.family != family) {
    throw std::invalid_argument("preset " + args.preset + " belongs to the " +
                                family_name(it->second.family) + " subcommand");
  }
  for (const auto& [key, value] : it->second.values) {
    if (key == "arms" && args.arms_opt->count() == 0) args.arms = std::stoi(value);
    if (key == "size" && args.size_opt && args.size_opt->count() == 0) {
      args.size = std::stoi(value);
    }
    if (key == "reps" && args.reps_opt->count() == 0) args.reps = std::stoi(value);
    if (key == "budgets" && args.budgets_opt->count() == 0) args.budgets = value;
    if (key == "policies" && args.policies_opt->count() == 0) args.policies = value;
    if (key == "c-sweep" && args.sweep_opt && args.sweep_opt->count() == 0) {
      args.c_sweep = value;
    }
  }
}

// Desk-scale defaults for anything neither the preset nor the user set.
void fill_defaults(ExperimentArgs& args, Family family) {
  if (args.reps == 0) {
    args.reps = family == Family::MAB ? 2000 : family == Family::SAILING ? 500 : 1000;
  }
  if (args.arms == 0) args.arms = family == Family::TREE ? 16 : 32;
  if (args.size == 0) args.size = 6;
  if (args.budgets.empty()) {
    args.budgets = family == Family::SAILING ? "397"
                   : family == Family::MAB   ? "10:10000:log25"
                                             : "10:10000:log13";
  }
  if (args.policies.empty()) {
    switch (family) {
      case Family::MAB:
        args.policies = "ucb:2,ucbsqrt:2,eps:0.5,uniform";
        break;
      case Family::TREE:
        args.policies = "ucb:2,ucbsqrt:2,eps:0.5";
        break;
      case Family::SAILING:
        args.policies = "ucb:2,ucbsqrt:2";
        break;
      case Family::VOI_TREE:
        args.policies = "voi,ucb:2,ucbsqrt:2,eps:0.5";
        break;
    }
  }
}

ExperimentSpec build_spec(const ExperimentArgs& args, Family family) {
  ExperimentSpec spec;
  spec.family = family;
  if (args.arms > 0) spec.arms = args.arms;
  if (args.size > 0) spec.lake_size = args.size;
  spec.repetitions = args.reps;
  spec.master_seed = args.seed;
  spec.threads = args.threads;
  spec.depth_cutoff = args.depth;
  spec.episode_step_cap = args.cap;
  spec.frozen_wind = args.frozen_wind;
  spec.budgets = parse_budget_list(args.budgets);
  if (!args.c_sweep.empty()) spec.c_sweep = parse_factor_list(args.c_sweep);
  const std::optional<double> tree_c =
      args.tree_c_opt && args.tree_c_opt->count() > 0 ? std::optional<double>(args.tree_c)
                                                      : std::nullopt;
  spec.policies = parse_policies(args.policies, family, tree_c, !spec.c_sweep.empty());
  if (!args.fixed_means.empty()) {
    std::vector<double> means;
    for (const auto& token : split(args.fixed_means, ',')) means.push_back(parse_double(token));
    spec.fixed_means = std::move(means);
  }
  return spec;
}

void print_summary(const std::vector<RegretPoint>& points, Family family) {
  std::int64_t top_budget = 0;
  for (const auto& p : points) top_budget = std::max(top_budget, p.n);
  const RegretPoint* best = nullptr;
  for (const auto& p : points) {
    if (p.n != top_budget || p.statistic != "mean") continue;
    if (!best || p.value < best->value) best = &p;
  }
  if (!best) return;
  const char* metric = family == Family::SAILING ? "mean regret (cost - optimal)" : "mean regret";
  std::cout << "best at n=" << top_budget << ": " << best->policy;
  if (best->c != 0.0) std::cout << " (c=" << format_param(best->c) << ")";
  std::cout << " with " << metric << " " << format_param(best->value) << "\n";
}

void write_instances(const std::vector<std::string>& lines, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open instance file: " + path);
  for (const auto& line : lines) file << line << '\n';
  if (!file) throw std::runtime_error("failed writing instance file: " + path);
}

int run_experiment(const ExperimentArgs& args, Family family) {
  const ExperimentSpec spec = build_spec(args, family);
  const RunResult result = spec.c_sweep.empty() ? sregret::run(spec) : sweep_exploration(spec);
  write_csv(result.points, args.out_path);
  if (!args.dump_instances.empty()) write_instances(result.instance_lines, args.dump_instances);
  print_summary(result.points, family);
  return 0;
}

int run_replay(const ExperimentArgs& args) {
  std::ifstream file(args.instances_path);
  if (!file) throw std::runtime_error("cannot open instance file: " + args.instances_path);
  std::vector<Instance> instances;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    instances.push_back(parse_instance_line(line));
  }
  if (instances.empty()) throw std::runtime_error("no instances in " + args.instances_path);

  Family family = Family::MAB;
  int size = 0;
  if (std::holds_alternative<SwitchTree>(instances.front())) family = Family::TREE;
  if (const auto* episode = std::get_if<SailingEpisode>(&instances.front())) {
    family = Family::SAILING;
    size = episode->size;
  }
  for (const auto& inst : instances) {
    if (inst.index() != instances.front().index()) {
      throw std::runtime_error("mixed instance kinds in " + args.instances_path);
    }
  }

  ExperimentArgs replay_args = args;
  if (size > 0) replay_args.size = size;
  ExperimentSpec spec = build_spec(replay_args, family);
  spec.replay_instances = std::move(instances);
  const RunResult result = spec.c_sweep.empty() ? sregret::run(spec) : sweep_exploration(spec);
  write_csv(result.points, args.out_path);
  print_summary(result.points, family);
  return 0;
}

int run_bounds(const std::string& gaps_text, const std::string& scheme, double n, double c,
               double epsilon, double gamma, double eta, const std::string& out_path) {
  std::vector<double> gaps;
  for (const auto& token : split(gaps_text, ',')) gaps.push_back(parse_double(token));
  if (gaps.empty()) throw std::runtime_error("empty gap list");
  const double least = *std::min_element(gaps.begin(), gaps.end());
  if (least != 0.0) throw std::runtime_error("gap list must contain 0 for the best arm");
  std::vector<double> means(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] < 0.0 || gaps[i] > 1.0) throw std::runtime_error("gaps must lie in [0,1]");
    means[i] = 1.0 - gaps[i];
  }
  const TrueArms truth(means);
  const BoundParams params{gamma, eta};

  double value = 0.0;
  if (scheme == "eps") {
    value = bound_eps_greedy(truth, n, epsilon, params);
  } else if (scheme == "uniform") {
    value = bound_uniform(truth, n, params);
  } else if (scheme == "ucbsqrt") {
    value = bound_ucb_sqrt(truth, n, c, params);
  } else {
    throw std::runtime_error("unknown bound scheme: " + scheme);
  }
  std::cout << format_param(value) << "\n";

  if (!out_path.empty()) {
    RegretPoint point;
    point.family = "bounds";
    point.policy = scheme;
    point.c = scheme == "ucbsqrt" ? c : (scheme == "eps" ? epsilon : 0.0);
    point.n = static_cast<std::int64_t>(n);
    point.statistic = "bound";
    point.value = value;
    write_csv({point}, out_path);
  }
  return 0;
}

}  // namespace

std::vector<std::int64_t> parse_budget_list(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty budget list");
  std::vector<std::int64_t> out;
  if (auto range = parse_log_range(text)) {
    for (double v : *range) {
      const auto rounded = static_cast<std::int64_t>(std::llround(v));
      if (rounded < 1) throw std::invalid_argument("budgets must be >= 1");
      if (out.empty() || out.back() != rounded) out.push_back(rounded);
    }
    return out;
  }
  for (const auto& token : split(text, ',')) {
    const double v = parse_double(token);
    const auto rounded = static_cast<std::int64_t>(std::llround(v));
    if (rounded < 1 || rounded != v) {
      throw std::invalid_argument("budgets must be positive integers");
    }
    out.push_back(rounded);
  }
  if (!std::is_sorted(out.begin(), out.end())) {
    throw std::invalid_argument("budgets must be ascending");
  }
  return out;
}

std::vector<double> parse_factor_list(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty factor list");
  if (auto range = parse_log_range(text)) return *range;
  std::vector<double> out;
  for (const auto& token : split(text, ',')) out.push_back(parse_double(token));
  return out;
}

std::vector<PolicyConfig> parse_policies(const std::string& text, Family family,
                                         std::optional<double> tree_c, bool strip_c) {
  if (text.empty()) throw std::invalid_argument("empty policy list");
  std::vector<PolicyConfig> out;
  for (const auto& token : split(text, ',')) {
    PolicyConfig config;
    config.root = parse_policy_token(token, config.label);

    const bool root_has_c =
        config.root.kind == PolicyKind::UCB || config.root.kind == PolicyKind::UCB_SQRT;
    if (strip_c && root_has_c) {
      config.label = config.label.substr(0, config.label.find(':'));
    }
    if (family == Family::MAB) {
      config.c_value = root_has_c ? config.root.c : 0.0;
    } else {
      config.tree.kind = PolicyKind::UCB;
      config.tree.c = tree_c ? *tree_c : (root_has_c ? config.root.c : 2.0);
      config.label += tree_c ? "+uct:" + format_param(*tree_c) : "+uct";
      config.c_value = root_has_c ? config.root.c : config.tree.c;
    }
    out.push_back(std::move(config));
  }
  return out;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Simple-regret sampling policies for bandits and Monte-Carlo tree search"};
  app.require_subcommand(1);

  ExperimentArgs mab_args, tree_args, sailing_args, voi_args, replay_args;
  CLI::App* mab = app.add_subcommand("mab", "Flat Bernoulli bandit regret curves");
  add_common_options(mab, mab_args, Family::MAB);
  CLI::App* tree = app.add_subcommand("tree", "Two-level switch-tree regret curves");
  add_common_options(tree, tree_args, Family::TREE);
  CLI::App* sailing = app.add_subcommand("sailing", "Sailing-domain replanning costs");
  add_common_options(sailing, sailing_args, Family::SAILING);
  CLI::App* voi = app.add_subcommand("voi-tree", "Switch trees including the VOI-aware root");
  add_common_options(voi, voi_args, Family::VOI_TREE);

  CLI::App* replay = app.add_subcommand("replay", "Re-run experiments from an instance file");
  replay->add_option("--instances", replay_args.instances_path, "Instance line file")->required();
  replay_args.reps_opt = replay->add_option("--reps", replay_args.reps, "(ignored; instance count rules)");
  replay_args.budgets_opt = replay->add_option("--budgets", replay_args.budgets,
                                               "Sample budgets: lo:hi:logN or comma list");
  replay_args.policies_opt =
      replay->add_option("--policies", replay_args.policies, "Comma list of kind[:param] tokens");
  replay->add_option("--seed", replay_args.seed, "Master seed")->envname("REGRET_SEED");
  replay->add_option("--out", replay_args.out_path, "Output CSV path")->required();
  replay->add_option("--threads", replay_args.threads, "Worker thread cap (0 = hardware)");
  replay_args.tree_c_opt =
      replay->add_option("--tree-c", replay_args.tree_c, "UCB factor below the root");
  replay->add_option("--depth", replay_args.depth, "Rollout depth cutoff");
  replay->add_option("--cap", replay_args.cap, "Episode step cap (sailing)");
  replay->add_flag("--frozen-wind", replay_args.frozen_wind, "Frozen wind (sailing)");

  std::string gaps_text, scheme, bounds_out;
  double bound_n = 100.0, bound_c = 2.0, bound_eps = 0.5, bound_gamma = 1.0, bound_eta = 0.1;
  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate the regret bound calculators");
  bounds->add_option("--gaps", gaps_text, "Comma list of true gaps, 0 for the best arm")
      ->required();
  bounds->add_option("--scheme", scheme, "One of eps, uniform, ucbsqrt")->required();
  bounds->add_option("--n", bound_n, "Sample count");
  bounds->add_option("--c", bound_c, "Exploration factor (ucbsqrt)");
  bounds->add_option("--epsilon", bound_eps, "Greedy-pull probability (eps)");
  bounds->add_option("--gamma", bound_gamma, "Envelope slack, >= 1");
  bounds->add_option("--eta", bound_eta, "Reported failure probability, in (0,1)");
  bounds->add_option("--out", bounds_out, "Optional CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (mab->parsed()) {
      apply_preset(mab_args, Family::MAB);
      fill_defaults(mab_args, Family::MAB);
      return run_experiment(mab_args, Family::MAB);
    }
    if (tree->parsed()) {
      apply_preset(tree_args, Family::TREE);
      fill_defaults(tree_args, Family::TREE);
      return run_experiment(tree_args, Family::TREE);
    }
    if (sailing->parsed()) {
      apply_preset(sailing_args, Family::SAILING);
      fill_defaults(sailing_args, Family::SAILING);
      return run_experiment(sailing_args, Family::SAILING);
    }
    if (voi->parsed()) {
      apply_preset(voi_args, Family::VOI_TREE);
      fill_defaults(voi_args, Family::VOI_TREE);
      return run_experiment(voi_args, Family::VOI_TREE);
    }
    if (replay->parsed()) {
      fill_defaults(replay_args, Family::MAB);
      return run_replay(replay_args);
    }
    if (bounds->parsed()) {
      return run_bounds(gaps_text, scheme, bound_n, bound_c, bound_eps, bound_gamma, bound_eta,
                        bounds_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace sregret::cli
