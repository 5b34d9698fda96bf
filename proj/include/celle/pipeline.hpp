#pragma once

#include <cstdint>
#include <string>

#include "celle/miner.hpp"
#include "celle/rules.hpp"
#include "celle/selector.hpp"

namespace celle {

struct RunConfig {
    std::string netlist_path;
    std::string lib_path;        // empty: built-in default library
    std::string rules_path;      // empty: built-in default rules
    std::string egraph_path;     // cmd_mine input
    std::string ext_netlist_path;  // cmd_report input
    std::string ext_lib_path;      // cmd_report input
    std::string out_dir = "celle_out";

    MiningParams mining;  // min_support=4, N=5, K=3 defaults
    std::uint32_t max_iterations = 16;
    std::uint64_t max_enodes = 0;  // 0: 10x gate count
    double time_budget_s = 60.0;
    std::uint32_t max_cells = 5;  // T
    QoRWeights qor;
    std::uint64_t seed = 1;
    bool exhaustive = false;
    bool dot = false;
    unsigned jobs = 1;
};

// Full pipeline: build e-graph, saturate, convert, mine, group, select,
// emit. Writes saturation.json, patterns.json, extended_library.json,
// extended_netlist.json, report.json and report.csv under out_dir.
// Returns 0 on success.
int cmd_extend(const RunConfig& config);

// Individual stages with the same error discipline.
int cmd_saturate(const RunConfig& config);  // writes egraph.json + saturation.json
int cmd_mine(const RunConfig& config);      // egraph.json -> patterns.json
int cmd_report(const RunConfig& config);    // original + extended -> report.json
int cmd_gen_adder(const RunConfig& config, std::uint32_t width,
                  const std::string& out_path);

// Shared helpers.
CellLibrary load_library(const RunConfig& config);
std::vector<RewriteRule> load_rules(const RunConfig& config, const CellLibrary& lib);
std::string read_file(const std::string& path, const std::string& flag);
void write_file(const std::string& path, const std::string& content);

}  // namespace celle
