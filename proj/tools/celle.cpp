#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "celle/defaults.hpp"
#include "celle/error.hpp"
#include "celle/pipeline.hpp"

namespace {

void add_common(CLI::App* cmd, celle::RunConfig& config) {
    cmd->add_option("--lib", config.lib_path, "cell library JSON (default: built-in)");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--seed", config.seed, "seed for randomized checks");
    cmd->add_option("--jobs", config.jobs, "worker threads for rule matching");
    cmd->add_flag("--dot", config.dot, "dump pattern graph in Graphviz format");
}

void add_mining(CLI::App* cmd, celle::RunConfig& config) {
    cmd->add_option("--min-support", config.mining.min_support, "pattern support threshold");
    cmd->add_option("--max-size", config.mining.max_gates, "max gates per pattern (N)");
    cmd->add_option("--max-inputs", config.mining.max_inputs, "max pattern inputs (K)");
    cmd->add_option("--max-patterns", config.mining.max_patterns, "pattern safety cap");
}

void add_saturation(CLI::App* cmd, celle::RunConfig& config) {
    cmd->add_option("--rules", config.rules_path, "rewrite rule file (default: built-in)");
    cmd->add_option("--max-iterations", config.max_iterations, "saturation iteration cap");
    cmd->add_option("--max-enodes", config.max_enodes,
                    "e-node cap (default: 10x gate count)");
    cmd->add_option("--time-budget", config.time_budget_s, "saturation budget, seconds");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"celle: standard cell library extension via equality saturation"};
    app.require_subcommand(1);
    celle::RunConfig config;

    auto* extend = app.add_subcommand(
        "extend", "run the full pipeline and emit an extended library");
    extend->add_option("--netlist", config.netlist_path, "mapped netlist JSON")
        ->required();
    add_common(extend, config);
    add_saturation(extend, config);
    add_mining(extend, config);
    extend->add_option("--max-cells", config.max_cells, "new-cell budget (T)");
    extend->add_flag("--exhaustive", config.exhaustive,
                     "exhaustive subset selection (<= 15 candidates)");

    auto* sat = app.add_subcommand("saturate", "build and saturate the e-graph only");
    sat->add_option("--netlist", config.netlist_path, "mapped netlist JSON")->required();
    add_common(sat, config);
    add_saturation(sat, config);

    auto* mine = app.add_subcommand("mine", "mine patterns from an e-graph snapshot");
    mine->add_option("--egraph", config.egraph_path, "egraph.json from saturate")
        ->required();
    add_common(mine, config);
    add_mining(mine, config);

    auto* report = app.add_subcommand("report", "compare an extended netlist against the original");
    report->add_option("--netlist", config.netlist_path, "original netlist")->required();
    report->add_option("--ext-netlist", config.ext_netlist_path, "rewritten netlist")
        ->required();
    report->add_option("--ext-lib", config.ext_lib_path, "extended library")->required();
    add_common(report, config);

    std::uint32_t width = 16;
    std::string gen_out = "adder.json";
    auto* gen = app.add_subcommand("gen-adder", "generate a ripple-carry adder netlist");
    gen->add_option("--width", width, "adder bit width")->required();
    gen->add_option("--netlist-out", gen_out, "output netlist path");
    add_common(gen, config);

    auto* dump = app.add_subcommand("dump-defaults",
                                    "write the built-in library and rules to --out");
    add_common(dump, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (extend->parsed()) return celle::cmd_extend(config);
        if (sat->parsed()) return celle::cmd_saturate(config);
        if (mine->parsed()) return celle::cmd_mine(config);
        if (report->parsed()) return celle::cmd_report(config);
        if (gen->parsed()) return celle::cmd_gen_adder(config, width, gen_out);
        if (dump->parsed()) {
            celle::write_file(config.out_dir + "/freepdk45ish.json",
                              celle::default_library_json());
            celle::write_file(config.out_dir + "/default.rules",
                              celle::default_rules_text());
            return 0;
        }
    } catch (const celle::Error& e) {
        std::fprintf(stderr, "celle: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "celle: internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
