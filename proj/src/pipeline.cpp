#include "celle/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "celle/defaults.hpp"
#include "celle/error.hpp"
#include "celle/log.hpp"

namespace celle {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path, const std::string& flag) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(flag + ": cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

CellLibrary load_library(const RunConfig& config) {
    if (config.lib_path.empty()) return parse_library(default_library_json());
    return parse_library(read_file(config.lib_path, "--lib"));
}

std::vector<RewriteRule> load_rules(const RunConfig& config, const CellLibrary& lib) {
    if (config.rules_path.empty()) return parse_rules(default_rules_text(), lib);
    return parse_rules(read_file(config.rules_path, "--rules"), lib);
}

namespace {

class StageTimer {
public:
    explicit StageTimer(std::string name)
        : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start_)
                              .count();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s: %.1f ms", name_.c_str(), ms);
        log(LogLevel::kInfo, buf);
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

SaturationLimits limits_for(const RunConfig& config, std::size_t gates) {
    SaturationLimits lim = SaturationLimits::for_gates(gates);
    lim.max_iterations = config.max_iterations;
    lim.time_budget_s = config.time_budget_s;
    if (config.max_enodes) lim.max_enodes = config.max_enodes;
    return lim;
}

// Simulation equivalence of two netlists over shared PI/PO sets:
// exhaustive up to 10 PIs, otherwise `vectors` seeded random vectors.
bool netlists_equivalent(const Netlist& a, const Netlist& b, std::uint64_t seed,
                         std::size_t vectors = 1000) {
    if (a.pis.size() != b.pis.size() || a.pos.size() != b.pos.size()) return false;
    std::map<std::string, std::size_t> pi_pos;
    for (std::size_t i = 0; i < a.pis.size(); ++i) pi_pos[a.pis[i]] = i;

    const std::size_t n = a.pis.size();
    std::mt19937_64 rng(seed);
    const bool exhaustive = n <= 10;
    const std::size_t total = exhaustive ? (std::size_t{1} << n) : vectors;

    for (std::size_t base = 0; base < total; base += 64) {
        const std::size_t lanes = std::min<std::size_t>(64, total - base);
        std::vector<std::uint64_t> wa(n, 0);
        for (std::size_t lane = 0; lane < lanes; ++lane) {
            if (exhaustive) {
                const std::size_t v = base + lane;
                for (std::size_t i = 0; i < n; ++i)
                    if ((v >> i) & 1u) wa[i] |= 1ull << lane;
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    if (rng() & 1u) wa[i] |= 1ull << lane;
            }
        }
        std::vector<std::uint64_t> wb(n, 0);
        for (std::size_t i = 0; i < b.pis.size(); ++i) wb[i] = wa[pi_pos.at(b.pis[i])];
        const auto ra = a.simulate_words(wa);
        const auto rb = b.simulate_words(wb);
        const std::uint64_t mask = lanes == 64 ? ~0ull : ((1ull << lanes) - 1);
        for (std::size_t i = 0; i < ra.size(); ++i)
            if ((ra[i] & mask) != (rb[i] & mask)) return false;
    }
    return true;
}

ordered_json report_json(const RunConfig& config, const Netlist& original,
                         const SaturationReport& sat, const EvalResult& eval,
                         const ExtendedLibrary& chosen, std::size_t candidates,
                         bool equivalent, std::size_t vectors) {
    ordered_json doc;
    doc["netlist"] = config.netlist_path;
    doc["config"] = {{"min_support", config.mining.min_support},
                     {"max_size", config.mining.max_gates},
                     {"max_inputs", config.mining.max_inputs},
                     {"max_cells", config.max_cells},
                     {"seed", config.seed},
                     {"exhaustive", config.exhaustive}};
    doc["saturation"] = {{"iterations", sat.iterations},
                         {"enodes", sat.enodes},
                         {"classes", sat.classes},
                         {"stop_reason", sat.stop_reason}};
    char area_buf[32];
    std::snprintf(area_buf, sizeof area_buf, "%.4f", original.total_area());
    doc["original"] = {{"gates", original.gates.size()},
                       {"area", area_buf},
                       {"depth", original.depth()}};
    std::snprintf(area_buf, sizeof area_buf, "%.4f", eval.area);
    doc["extended"] = {{"gates", eval.gates},
                       {"area", area_buf},
                       {"depth", eval.netlist.depth()}};
    doc["reduction_pct"] = format_reduction_pct(original.total_area(), eval.area);
    doc["candidates"] = candidates;
    doc["cells"] = ordered_json::array();
    for (const auto& cell : chosen.extensions) {
        ordered_json jc;
        jc["name"] = cell.name;
        jc["inputs"] = cell.function.table.arity;
        jc["truth"] = format_truth(cell.function.table);
        jc["sop"] = sop_to_string(cell.sop);
        std::snprintf(area_buf, sizeof area_buf, "%.4f", cell.est_area);
        jc["est_area"] = area_buf;
        jc["support"] = cell.group.support;
        jc["members"] = cell.group.members.size();
        const auto it = eval.cell_uses.find(cell.name);
        jc["uses"] = it == eval.cell_uses.end() ? 0 : it->second;
        doc["cells"].push_back(std::move(jc));
    }
    doc["equivalence"] = {{"checked_vectors", vectors}, {"equivalent", equivalent}};
    return doc;
}

std::string report_csv(const RunConfig& config, const Netlist& original,
                       const EvalResult& eval, const ExtendedLibrary& chosen) {
    std::ostringstream out;
    out << "circuit,gates_orig,area_orig,depth_orig,gates_ext,area_ext,depth_ext,"
           "reduction_pct,cells\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", original.total_area());
    out << config.netlist_path << ',' << original.gates.size() << ',' << buf << ','
        << original.depth() << ',' << eval.gates << ',';
    std::snprintf(buf, sizeof buf, "%.4f", eval.area);
    out << buf << ',' << eval.netlist.depth() << ','
        << format_reduction_pct(original.total_area(), eval.area) << ',';
    for (std::size_t i = 0; i < chosen.extensions.size(); ++i) {
        if (i) out << ';';
        out << chosen.extensions[i].name;
    }
    out << '\n';
    return out.str();
}

}  // namespace

int cmd_extend(const RunConfig& config) {
    const CellLibrary lib = load_library(config);
    const auto rules = load_rules(config, lib);
    const Netlist original =
        parse_netlist(read_file(config.netlist_path, "--netlist"), lib);

    EGraph g = build_egraph(original);
    SaturationReport sat;
    {
        StageTimer t("saturate");
        sat = saturate(g, rules, limits_for(config, original.gates.size()), config.jobs);
    }
    write_file(config.out_dir + "/saturation.json", serialize_report(sat));
    write_file(config.out_dir + "/egraph.json", serialize_egraph(g));

    PatternGraph pg = [&] {
        StageTimer t("graphify");
        return egraph_to_graph(g, lib);
    }();
    if (config.dot) write_file(config.out_dir + "/pattern_graph.dot", to_dot(pg));

    MineResult mined;
    {
        StageTimer t("mine");
        mined = mine(pg, config.mining);
    }
    write_file(config.out_dir + "/patterns.json", serialize_patterns(mined, pg));
    if (mined.truncated)
        log(LogLevel::kWarn, "pattern budget exhausted; results truncated");

    std::vector<PatternGroup> groups;
    {
        StageTimer t("group");
        groups = group_by_function(mined, pg, lib);
    }
    const auto candidates =
        make_candidates(groups, lib, config.mining.max_inputs, config.mining.max_gates);
    log(LogLevel::kInfo, "candidates: " + std::to_string(candidates.size()));

    ExtendedLibrary chosen;
    {
        StageTimer t("select");
        chosen = select_cells(candidates, config.max_cells, g, pg, lib,
                              config.exhaustive);
    }
    EvalResult eval = evaluate_extension(g, pg, chosen);

    const std::size_t vectors =
        original.pis.size() <= 10 ? (std::size_t{1} << original.pis.size()) : 1000;
    const bool equivalent = netlists_equivalent(original, eval.netlist, config.seed);
    if (!equivalent) {
        log(LogLevel::kError, "extended netlist is not equivalent to the original");
        return 1;
    }

    write_file(config.out_dir + "/extended_library.json", serialize_library(*eval.lib));
    write_file(config.out_dir + "/extended_netlist.json", serialize_netlist(eval.netlist));
    const ordered_json report = report_json(config, original, sat, eval, chosen,
                                            candidates.size(), equivalent, vectors);
    write_file(config.out_dir + "/report.json", report.dump(2) + "\n");
    write_file(config.out_dir + "/report.csv", report_csv(config, original, eval, chosen));
    log(LogLevel::kInfo, "area " + format_reduction_pct(original.total_area(), eval.area) +
                             "% smaller with " +
                             std::to_string(chosen.extensions.size()) + " new cells");
    return 0;
}

int cmd_saturate(const RunConfig& config) {
    const CellLibrary lib = load_library(config);
    const auto rules = load_rules(config, lib);
    const Netlist nl = parse_netlist(read_file(config.netlist_path, "--netlist"), lib);
    EGraph g = build_egraph(nl);
    const SaturationReport sat =
        saturate(g, rules, limits_for(config, nl.gates.size()), config.jobs);
    write_file(config.out_dir + "/egraph.json", serialize_egraph(g));
    write_file(config.out_dir + "/saturation.json", serialize_report(sat));
    if (config.dot)
        write_file(config.out_dir + "/pattern_graph.dot", to_dot(egraph_to_graph(g, lib)));
    return 0;
}

int cmd_mine(const RunConfig& config) {
    const CellLibrary lib = load_library(config);
    const EGraph g = parse_egraph(read_file(config.egraph_path, "--egraph"), lib);
    const PatternGraph pg = egraph_to_graph(g, lib);
    if (config.dot) write_file(config.out_dir + "/pattern_graph.dot", to_dot(pg));
    const MineResult mined = mine(pg, config.mining);
    write_file(config.out_dir + "/patterns.json", serialize_patterns(mined, pg));
    return 0;
}

int cmd_report(const RunConfig& config) {
    const CellLibrary lib = load_library(config);
    const Netlist original =
        parse_netlist(read_file(config.netlist_path, "--netlist"), lib);
    const CellLibrary ext_lib =
        parse_library(read_file(config.ext_lib_path, "--ext-lib"));
    const Netlist extended =
        parse_netlist(read_file(config.ext_netlist_path, "--ext-netlist"), ext_lib);

    const bool equivalent = netlists_equivalent(original, extended, config.seed);
    const std::size_t vectors =
        original.pis.size() <= 10 ? (std::size_t{1} << original.pis.size()) : 1000;

    ordered_json doc;
    doc["netlist"] = config.netlist_path;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", original.total_area());
    doc["original"] = {{"gates", original.gates.size()},
                       {"area", buf},
                       {"depth", original.depth()}};
    std::snprintf(buf, sizeof buf, "%.4f", extended.total_area());
    doc["extended"] = {{"gates", extended.gates.size()},
                       {"area", buf},
                       {"depth", extended.depth()}};
    doc["reduction_pct"] =
        format_reduction_pct(original.total_area(), extended.total_area());
    doc["equivalence"] = {{"checked_vectors", vectors}, {"equivalent", equivalent}};
    write_file(config.out_dir + "/report.json", doc.dump(2) + "\n");
    return equivalent ? 0 : 1;
}

int cmd_gen_adder(const RunConfig& config, std::uint32_t width,
                  const std::string& out_path) {
    const CellLibrary lib = load_library(config);
    const Netlist nl = make_adder(width, lib);
    write_file(out_path, serialize_netlist(nl));
    return 0;
}

}  // namespace celle
