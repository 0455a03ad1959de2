#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sregret/harness.hpp"

namespace sregret::cli {

// Full command-line entry point. Returns 0 on success, 1 on usage errors,
// 2 on runtime errors.
int run(int argc, const char* const* argv);

// "lo:hi:logN" expands to N log-spaced integers (deduplicated after
// rounding); otherwise a comma-separated list.
std::vector<std::int64_t> parse_budget_list(const std::string& text);

// Same syntax for real-valued exploration factors, without rounding.
std::vector<double> parse_factor_list(const std::string& text);

// Comma-separated policy tokens: kind[:param] with kinds
// {ucb, ucbsqrt, eps, uniform, voi}. For non-MAB families the tree policy is
// UCB with the root's factor unless tree_c overrides it. strip_c renders
// labels without the factor, for sweep output keyed by the c column.
std::vector<PolicyConfig> parse_policies(const std::string& text, Family family,
                                         std::optional<double> tree_c, bool strip_c);

}  // namespace sregret::cli
