#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celle/egraph.hpp"
#include "celle/library.hpp"

namespace celle {

// Operator tree over pattern variables and cell ops.
struct PatternNode {
    int var = -1;            // >= 0: variable index, children empty
    std::uint32_t op = 0;    // cell index when var < 0
    std::vector<PatternNode> children;

    bool is_var() const { return var >= 0; }
};

struct RewriteRule {
    std::string name;
    PatternNode lhs;  // always op-rooted
    PatternNode rhs;  // op-rooted or a bare lhs variable
    std::vector<std::string> var_names;
};

// Rule document: lines `name: OP(args) => PATTERN`, lowercase
// identifiers are variables, `#` starts a comment. Validates ops and
// arities against the library and vars(rhs) <= vars(lhs).
std::vector<RewriteRule> parse_rules(const std::string& text, const CellLibrary& lib);

std::string format_pattern(const PatternNode& p, const CellLibrary& lib,
                           const std::vector<std::string>& var_names);

// Exhaustive truth-table equality of lhs vs rhs over the rule's
// variables; the soundness check behind the default rule set.
bool rule_is_sound(const RewriteRule& rule, const CellLibrary& lib);

struct SaturationLimits {
    std::uint32_t max_iterations = 16;
    std::uint64_t max_enodes = 1'000'000;
    double time_budget_s = 60.0;

    // max_enodes = headroom * gate count, the default sizing rule.
    static SaturationLimits for_gates(std::size_t gates, double headroom = 10.0);
};

struct SaturationReport {
    std::uint32_t iterations = 0;
    std::size_t enodes = 0;
    std::size_t classes = 0;
    std::string stop_reason;  // saturated | iteration_limit | node_limit | time_limit
};

std::string serialize_report(const SaturationReport& r);

// Repeats match-all / apply-all / rebuild until a fixpoint iteration
// changes nothing or a limit trips. Matches are applied in a fixed scan
// order (classes ascending, rules in file order), so results are
// deterministic. `jobs` > 1 parallelizes match collection only.
SaturationReport saturate(EGraph& g, const std::vector<RewriteRule>& rules,
                          const SaturationLimits& limits, unsigned jobs = 1);

}  // namespace celle
