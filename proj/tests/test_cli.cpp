#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sregret/cli.hpp"

using namespace sregret;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("sregret");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("budget lists accept log ranges and comma lists") {
  const auto logs = cli::parse_budget_list("10:10000:log25");
  CHECK(logs.front() == 10);
  CHECK(logs.back() == 10000);
  CHECK(logs.size() <= 25);
  CHECK(logs.size() >= 20);  // a few duplicates collapse at the low end
  for (std::size_t i = 1; i < logs.size(); ++i) CHECK(logs[i] > logs[i - 1]);

  CHECK(cli::parse_budget_list("10,100,1000") ==
        std::vector<std::int64_t>{10, 100, 1000});
  CHECK(cli::parse_budget_list("397") == std::vector<std::int64_t>{397});

  CHECK_THROWS_AS(cli::parse_budget_list("100,50"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_budget_list("0:10:log5"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_budget_list("1,2.5"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_budget_list("abc"), std::invalid_argument);
}

TEST_CASE("factor lists keep real endpoints exact") {
  const auto grid = cli::parse_factor_list("0.02:20:log11");
  REQUIRE(grid.size() == 11);
  CHECK(grid.front() == 0.02);
  CHECK(grid.back() == 20.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

  CHECK(cli::parse_factor_list("0.5,2") == std::vector<double>{0.5, 2.0});
}

TEST_CASE("policy tokens map to specs and stable labels") {
  const auto flat = cli::parse_policies("ucb:2,eps:0.5,ucbsqrt:2,uniform,voi", Family::MAB,
                                        std::nullopt, false);
  REQUIRE(flat.size() == 5);
  CHECK(flat[0].label == "ucb:2");
  CHECK(flat[0].root.kind == PolicyKind::UCB);
  CHECK(flat[0].c_value == 2.0);
  CHECK(flat[1].label == "eps:0.5");
  CHECK(flat[1].root.epsilon == 0.5);
  CHECK(flat[2].root.kind == PolicyKind::UCB_SQRT);
  CHECK(flat[3].label == "uniform");
  CHECK(flat[4].root.kind == PolicyKind::VOI_AWARE);

  const auto tree = cli::parse_policies("ucbsqrt:1.5,eps:0.5", Family::TREE, std::nullopt, false);
  CHECK(tree[0].label == "ucbsqrt:1.5+uct");
  CHECK(tree[0].tree.kind == PolicyKind::UCB);
  CHECK(tree[0].tree.c == 1.5);   // tree factor follows the root's
  CHECK(tree[1].tree.c == 2.0);   // eps has no factor; default UCB(2)

  const auto overridden =
      cli::parse_policies("ucbsqrt:1.5", Family::TREE, std::optional<double>(0.7), false);
  CHECK(overridden[0].tree.c == 0.7);
  CHECK(overridden[0].label == "ucbsqrt:1.5+uct:0.7");

  const auto swept = cli::parse_policies("ucb:2,eps:0.5", Family::SAILING, std::nullopt, true);
  CHECK(swept[0].label == "ucb+uct");
  CHECK(swept[1].label == "eps:0.5+uct");

  CHECK_THROWS_AS(cli::parse_policies("bogus:1", Family::MAB, std::nullopt, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_policies("uniform:3", Family::MAB, std::nullopt, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_policies("eps:1.5", Family::MAB, std::nullopt, false),
                  std::invalid_argument);
}

TEST_CASE("the mab subcommand writes deterministic csv") {
  const std::vector<std::string> args = {
      "mab",   "--arms", "4",       "--reps",     "25",          "--budgets", "10,50",
      "--policies", "ucb:2,eps:0.5", "--seed", "7", "--out", "cli_mab_a.csv"};
  REQUIRE(run_cli(args) == 0);
  auto again = args;
  again.back() = "cli_mab_b.csv";
  REQUIRE(run_cli(again) == 0);
  const std::string a = slurp("cli_mab_a.csv");
  CHECK(a == slurp("cli_mab_b.csv"));
  CHECK(a.rfind("family,policy,c,n,statistic,value,stderr,repetitions,seed\n", 0) == 0);
  CHECK(a.find("mab,ucb:2,") != std::string::npos);
}

TEST_CASE("bounds subcommand evaluates the ucb-sqrt envelope") {
  REQUIRE(run_cli({"bounds", "--gaps", "0,0.2", "--n", "100", "--scheme", "ucbsqrt", "--c", "2",
                   "--gamma", "1", "--out", "cli_bounds.csv"}) == 0);
  const std::string csv = slurp("cli_bounds.csv");
  const auto line_start = csv.find("\nbounds,") + 1;
  std::string row = csv.substr(line_start);
  // family,policy,c,n,statistic,value,...
  std::istringstream fields(row);
  std::string field;
  for (int i = 0; i < 6; ++i) std::getline(fields, field, ',');
  const double value = std::stod(field);
  CHECK(value == doctest::Approx(1.8159971904993941e-5).epsilon(1e-7));

  CHECK(run_cli({"bounds", "--gaps", "0.1,0.2", "--scheme", "uniform", "--out", "x.csv"}) == 2);
  CHECK(run_cli({"bounds", "--gaps", "0,0.2", "--scheme", "nope"}) == 2);
}

TEST_CASE("usage errors exit with code 1 and help with 0") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"mab", "--no-such-flag", "1", "--out", "x.csv"}) == 1);
  CHECK(run_cli({"mab"}) == 1);  // --out is required
  CHECK(run_cli({"mab", "--preset", "nope", "--out", "cli_bad.csv"}) == 1);
  CHECK(run_cli({"tree", "--preset", "paper-fig1b", "--out", "cli_bad.csv"}) == 1);
}

TEST_CASE("replay reruns dumped instances bit-exactly") {
  REQUIRE(run_cli({"tree", "--arms", "4", "--reps", "10", "--budgets", "10,40", "--policies",
                   "ucbsqrt:2", "--seed", "11", "--out", "cli_tree_a.csv", "--dump-instances",
                   "cli_tree.instances"}) == 0);
  REQUIRE(run_cli({"replay", "--instances", "cli_tree.instances", "--budgets", "10,40",
                   "--policies", "ucbsqrt:2", "--seed", "11", "--out", "cli_tree_b.csv"}) == 0);
  CHECK(slurp("cli_tree_a.csv") == slurp("cli_tree_b.csv"));
}

TEST_CASE("the seed falls back to REGRET_SEED") {
  REQUIRE(run_cli({"mab", "--arms", "3", "--reps", "10", "--budgets", "20", "--policies",
                   "uniform", "--seed", "777", "--out", "cli_seed_a.csv"}) == 0);
  setenv("REGRET_SEED", "777", 1);
  REQUIRE(run_cli({"mab", "--arms", "3", "--reps", "10", "--budgets", "20", "--policies",
                   "uniform", "--out", "cli_seed_b.csv"}) == 0);
  unsetenv("REGRET_SEED");
  CHECK(slurp("cli_seed_a.csv") == slurp("cli_seed_b.csv"));
}

TEST_CASE("presets expand to full protocols that flags can override") {
  // Scaled down: the preset fixes arms/budgets/policies, the flags shrink
  // repetitions so the test stays quick.
  REQUIRE(run_cli({"mab", "--preset", "paper-fig1b", "--reps", "5", "--budgets", "10,100",
                   "--seed", "3", "--out", "cli_preset.csv"}) == 0);
  const std::string csv = slurp("cli_preset.csv");
  CHECK(csv.find("ucb:2") != std::string::npos);
  CHECK(csv.find("ucbsqrt:2") != std::string::npos);
  CHECK(csv.find("eps:0.5") != std::string::npos);
  CHECK(csv.find("uniform") != std::string::npos);
  CHECK(csv.find(",5,3") != std::string::npos);  // repetitions 5, seed 3
}
